#pragma once

// Shared basics: error hierarchy, open intervals, finite-difference helpers.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace umbilic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kPi = std::numbers::pi;

// Default step for central finite differences (one Richardson level available).
inline constexpr double kDefaultFdStep = 1e-4;

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments, domain violations, malformed input. CLI maps this to exit 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failure at run time (integration could not complete, singular data).
// CLI maps this to exit 3.
class NumericError : public Error {
public:
    using Error::Error;
};

// Syntax error in an expression, with the byte offset of the failure.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& message, std::size_t byte_offset)
        : ValidationError(message + " (at byte " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

// Domain violation while evaluating an expression; carries the offending
// subexpression in canonical printed form.
class EvalError : public ValidationError {
public:
    EvalError(const std::string& message, std::string subexpr)
        : ValidationError(message + " in subexpression " + subexpr),
          subexpression(std::move(subexpr)) {}
    std::string subexpression;
};

// Open interval (lo, hi); endpoints excluded, infinite endpoints allowed.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    static Interval all() { return Interval{-kInf, kInf}; }

    bool contains(double x) const { return x > lo && x < hi; }

    // Signed distance to the nearer endpoint (positive inside).
    double margin(double x) const {
        return std::min(x - lo, hi - x);
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << lo << ", " << hi << ")";
        return os.str();
    }
};

// Central first derivative, O(h^2).
template <class F>
double central_d1(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Central first derivative with one Richardson extrapolation level, O(h^4).
template <class F>
double central_d1_richardson(F&& f, double x, double h) {
    const double d_h = central_d1(f, x, h);
    const double d_h2 = central_d1(f, x, h / 2.0);
    return (4.0 * d_h2 - d_h) / 3.0;
}

// Central second derivative, O(h^2).
template <class F>
double central_d2(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

}  // namespace umbilic
