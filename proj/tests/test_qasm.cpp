#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "ensc/circuit.hpp"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "ensc/qasm.hpp"
#include "test_util.hpp"

using namespace ensc;

TEST_SUITE("qasm") {

TEST_CASE("parse a minimal program") {
  std::string src = R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
h q[0];
cx q[0], q[1];
rz(0.5) q[1];
)";
  Circuit c = parse_qasm(src);
  CHECK(c.width == 2);
  REQUIRE(c.size() == 3);
  CHECK(c.gates[0].kind == GateKind::H);
  CHECK(c.gates[1].kind == GateKind::CNOT);
  CHECK(c.gates[2].kind == GateKind::RZ);
  CHECK(c.gates[2].params[0] == doctest::Approx(0.5));
}

TEST_CASE("rz parses to the symmetric convention") {
  Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrz(0.5) q[0];\n");
  CMat u = unitary(c).mat();
  std::complex<double> e0 = std::exp(std::complex<double>(0.0, -0.25));
  CHECK(std::abs(u(0, 0) - e0) < 1e-12);
  CHECK(std::abs(u(1, 1) - std::conj(e0)) < 1e-12);
}

TEST_CASE("bare register name broadcasts a one qubit gate") {
  Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[3];\nh q;\n");
  REQUIRE(c.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(c.gates[i].kind == GateKind::H);
    CHECK(c.gates[i].qubits[0] == int(i));
  }
}

TEST_CASE("barrier is a no-op and measure warns") {
  std::string src = R"(OPENQASM 2.0;
qreg q[2];
creg c[2];
h q[0];
barrier q;
measure q[0] -> c[0];
)";
  std::vector<std::string> warnings;
  Circuit c = parse_qasm(src, &warnings);
  CHECK(c.size() == 1);
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("measure") != std::string::npos);
}

TEST_CASE("parse errors carry position") {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\nfrobnicate q[0];\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.col >= 1);
  }
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0]\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\nqreg a[1];\nqreg b[1];\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[4];\n"),
                  ParseError);
}

TEST_CASE("angle expressions") {
  Circuit c = parse_qasm(
      "OPENQASM 2.0;\nqreg q[1];\nrz(pi/4) q[0];\nrz(-pi) q[0];\n"
      "u3(2*pi, 0.25, 1e-3) q[0];\n");
  REQUIRE(c.size() == 3);
  CHECK(c.gates[0].params[0] == doctest::Approx(M_PI / 4).epsilon(1e-15));
  CHECK(c.gates[1].params[0] == doctest::Approx(-M_PI).epsilon(1e-15));
  CHECK(c.gates[2].params[0] == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(c.gates[2].params[2] == doctest::Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("emit then parse is the identity") {
  Circuit c = testutil::random_circuit(3, 40, 777);
  std::string text = emit_qasm(c);
  Circuit back = parse_qasm(text);
  REQUIRE(back.size() == c.size());
  CHECK(back.width == c.width);
  for (size_t i = 0; i < c.size(); ++i) {
    CHECK(back.gates[i].kind == c.gates[i].kind);
    CHECK(back.gates[i].qubits == c.gates[i].qubits);
    REQUIRE(back.gates[i].params.size() == c.gates[i].params.size());
    // 17 significant digits make the round trip exact.
    for (size_t p = 0; p < c.gates[i].params.size(); ++p)
      CHECK(back.gates[i].params[p] == c.gates[i].params[p]);
  }
  CHECK(frobenius_norm(unitary(back).mat() - unitary(c).mat()) < 1e-12);
}

}  // TEST_SUITE
