#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diffusym {

/// Problems with user-supplied input: malformed expressions, bad spec files,
/// unbound or duplicate parameters, out-of-range entry parameters.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression syntax error carrying the byte offset and the expected-token set.
class ParseError : public SpecError {
public:
    ParseError(const std::string& msg, std::size_t offset, std::string expected)
        : SpecError(msg + " at offset " + std::to_string(offset) +
                    (expected.empty() ? "" : " (expected " + expected + ")")),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Numerical failures: quadrature non-convergence, ODE step underflow,
/// NaN from an integrand or evaluator, rank-deficient fits, domain violations.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace diffusym
