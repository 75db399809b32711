#include "ensc/benchmark_circuits.hpp"

#include <numbers>

#include "ensc/rng.hpp"

namespace ensc {

namespace {

using std::numbers::pi;

Gate u3_h(int q) { return Gate::u3(q, pi / 2, 0.0, pi); }
Gate u3_rx(int q, double theta) { return Gate::u3(q, theta, -pi / 2, pi / 2); }
Gate u3_phase(int q, double theta) { return Gate::u3(q, 0.0, 0.0, theta); }

// exp(-i dt (XX + YY + ZZ)) on (a, b), exact per bond since the three terms
// commute. Each factor is the standard CNOT conjugation of a Z phase, with
// basis changes H (for XX) and RX(pi/2) (for YY).
void add_heisenberg_bond(Circuit& c, int a, int b, double dt) {
  double theta = 2.0 * dt;
  // XX
  c.add(u3_h(a)).add(u3_h(b));
  c.add(Gate::cnot(a, b)).add(u3_phase(b, theta)).add(Gate::cnot(a, b));
  c.add(u3_h(a)).add(u3_h(b));
  // YY
  c.add(u3_rx(a, pi / 2)).add(u3_rx(b, pi / 2));
  c.add(Gate::cnot(a, b)).add(u3_phase(b, theta)).add(Gate::cnot(a, b));
  c.add(u3_rx(a, -pi / 2)).add(u3_rx(b, -pi / 2));
  // ZZ
  c.add(Gate::cnot(a, b)).add(u3_phase(b, theta)).add(Gate::cnot(a, b));
}

Circuit heisenberg(int n, int steps) {
  if (n < 2) throw InputError("heisenberg: need n >= 2");
  if (steps < 1) throw InputError("heisenberg: need steps >= 1");
  Circuit c(n);
  double dt = 1.0 / steps;
  for (int s = 0; s < steps; ++s)
    for (int i = 0; i + 1 < n; ++i) add_heisenberg_bond(c, i, i + 1, dt);
  return c;
}

Circuit qaoa_ring(int n, int p, std::uint64_t seed) {
  if (n < 3) throw InputError("qaoa_ring: need n >= 3 for a ring");
  if (p < 1) throw InputError("qaoa_ring: need at least one layer");
  Circuit c(n);
  auto rng = make_rng(derive_seed(seed, 0x9a0a));
  std::uniform_real_distribution<double> unif(0.0, pi);
  for (int q = 0; q < n; ++q) c.add(Gate::h(q));
  for (int l = 0; l < p; ++l) {
    double gamma = unif(rng), beta = unif(rng);
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      c.add(Gate::cnot(i, j)).add(Gate::rz(j, 2.0 * gamma)).add(Gate::cnot(i, j));
    }
    // mixer RX(2 beta) = H RZ(2 beta) H
    for (int q = 0; q < n; ++q)
      c.add(Gate::h(q)).add(Gate::rz(q, 2.0 * beta)).add(Gate::h(q));
  }
  return c;
}

// controlled phase diag(1,1,1,e^{i theta}) up to a global phase
void add_cp(Circuit& c, int ctrl, int tgt, double theta) {
  c.add(Gate::rz(ctrl, theta / 2));
  c.add(Gate::cnot(ctrl, tgt));
  c.add(Gate::rz(tgt, -theta / 2));
  c.add(Gate::cnot(ctrl, tgt));
  c.add(Gate::rz(tgt, theta / 2));
}

// Draper transform adder: |a>|b> -> |a>|a+b mod 2^m>, m = n/2.
Circuit qft_adder(int n) {
  if (n < 2 || n % 2 != 0)
    throw InputError("qft_adder: n must be even and >= 2");
  int m = n / 2;
  auto a_bit = [&](int j) { return j; };
  auto b_bit = [&](int j) { return m + j; };
  Circuit c(n);
  // QFT on register b
  for (int i = m - 1; i >= 0; --i) {
    c.add(Gate::h(b_bit(i)));
    for (int j = i - 1; j >= 0; --j)
      add_cp(c, b_bit(j), b_bit(i), pi / double(1 << (i - j)));
  }
  // phase additions controlled on register a
  for (int i = m - 1; i >= 0; --i)
    for (int j = i; j >= 0; --j)
      add_cp(c, a_bit(j), b_bit(i), pi / double(1 << (i - j)));
  // inverse QFT on register b
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j)
      add_cp(c, b_bit(j), b_bit(i), -pi / double(1 << (i - j)));
    c.add(Gate::h(b_bit(i)));
  }
  return c;
}

}  // namespace

Circuit benchmark_circuit(const std::string& name, int n, int steps,
                          std::uint64_t seed) {
  if (name == "heisenberg") return heisenberg(n, steps);
  if (name == "qaoa_ring") return qaoa_ring(n, steps, seed);
  if (name == "qft_adder") return qft_adder(n);
  throw InputError("benchmark_circuit: unknown benchmark '" + name + "'");
}

}  // namespace ensc
