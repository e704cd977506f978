#pragma once

#include <stdexcept>
#include <string>

namespace nadyn {

// Bad input: malformed configuration, out-of-range parameters, violated
// preconditions. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its target (eigensolver, step-halving
// convergence, quadrature, degenerate spectrum). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nadyn
