#pragma once

#include <stdexcept>
#include <string>

namespace ensc {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: ParseError -> 2, CapacityError -> 3, NumericalError -> 4. Everything
// else (bad arguments, contract violations) is an InputError and also exits 2.

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed user input: QASM syntax errors, bad config files, bad flag values.
struct ParseError : Error {
  ParseError(const std::string& msg, int line = -1, int col = -1)
      : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ", col " +
                              std::to_string(col) + ")"
                        : msg),
        line(line), col(col) {}
  int line;
  int col;
};

// A request that exceeds a hard size limit (dense unitaries past the width
// cap, channel simulation on too many qubits, ...).
struct CapacityError : Error {
  using Error::Error;
};

// An iterative numerical routine failed to converge or produced a result that
// violates its own tolerance.
struct NumericalError : Error {
  using Error::Error;
};

// Caller broke a documented precondition.
struct InputError : Error {
  using Error::Error;
};

}  // namespace ensc
