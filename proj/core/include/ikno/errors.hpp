#ifndef IKNO_ERRORS_HPP
#define IKNO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ikno {

// Error taxonomy shared by the library and the CLI. The CLI maps each class
// to a distinct process exit code (see tools/).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/array dimensions do not admit the requested operation.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid argument values (empty point sets, bad factors, ...).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Inconsistent or infeasible configuration (truncation vs. resolution,
// unknown keys, schedule constants out of range, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Non-finite values, degenerate loss targets, diverging optimization.
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Iterative solver failed to reach its tolerance.
struct SolverError : Error {
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Malformed or missing on-disk data.
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int data = 3;
inline constexpr int numeric = 4;
inline constexpr int config = 5;
}  // namespace exit_code

}  // namespace ikno

#endif  // IKNO_ERRORS_HPP
