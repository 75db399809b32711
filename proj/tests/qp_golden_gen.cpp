// Regenerates tests/qp_golden.inc: grid-search minima for the 50 shared QP
// instances at step 1e-3. Run manually and redirect:
//   ./qp_golden_gen > ../tests/qp_golden.inc

#include <atomic>
#include <cstdio>
#include <thread>
#include <vector>

#include "qp_instances.hpp"

int main() {
  constexpr int kInstances = 50;
  constexpr int kSteps = 1000;
  std::vector<double> minima(kInstances);
  std::vector<std::thread> threads;
  std::atomic<int> next{0};
  const unsigned n = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < n; ++t) {
    threads.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= kInstances) return;
        const auto qp = ensc_test::qp_instance(i);
        minima[size_t(i)] =
            ensc_test::qp_grid_min(qp, ensc_test::qp_instance_m(i), kSteps);
      }
    });
  }
  for (auto& t : threads) t.join();

  std::printf("// Generated by qp_golden_gen; do not edit by hand.\n");
  std::printf("// {instance index, member count, grid-search min at step 1e-3}\n");
  std::printf("inline constexpr struct { int idx; int m; double grid_min; }\n");
  std::printf("    kQpGolden[] = {\n");
  for (int i = 0; i < kInstances; ++i)
    std::printf("    {%d, %d, %.17g},\n", i, ensc_test::qp_instance_m(i),
                minima[size_t(i)]);
  std::printf("};\n");
  return 0;
}
