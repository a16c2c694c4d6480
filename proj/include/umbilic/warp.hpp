#pragma once

// Warping functions f: I -> R with exact first and second derivatives.
// A small built-in catalog plus construction from parsed expression text.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "umbilic/core.hpp"
#include "umbilic/expr.hpp"

namespace umbilic {

struct WarpSample {
    double f = 0.0;
    double df = 0.0;
    double ddf = 0.0;
};

// f together with its first two derivatives on an open interval. eval()
// rejects arguments outside the domain, so integration code can rely on the
// returned values being finite and meaningful.
struct WarpingFunction {
    std::string name;
    Interval domain = Interval::all();
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> ddf;

    void check_domain(double t) const {
        if (!std::isfinite(t) || !domain.contains(t))
            throw ValidationError("warp '" + name + "': t=" + std::to_string(t) +
                                  " outside open domain " + domain.str());
    }
    WarpSample eval(double t) const {
        check_domain(t);
        return {f(t), df(t), ddf(t)};
    }
    double f_at(double t) const {
        check_domain(t);
        return f(t);
    }
    double df_at(double t) const {
        check_domain(t);
        return df(t);
    }
    double ddf_at(double t) const {
        check_domain(t);
        return ddf(t);
    }
};

// --------------------------------------------------------------------------
// Catalog.

inline WarpingFunction warp_constant(double c) {
    if (!std::isfinite(c)) throw ValidationError("warp_constant: value must be finite");
    WarpingFunction w;
    w.name = "constant(" + std::to_string(c) + ")";
    w.domain = Interval::all();
    w.f = [c](double) { return c; };
    w.df = [](double) { return 0.0; };
    w.ddf = [](double) { return 0.0; };
    return w;
}

// f(t) = a t + b.
inline WarpingFunction warp_linear(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ValidationError("warp_linear: coefficients must be finite");
    WarpingFunction w;
    w.name = "linear(" + std::to_string(a) + "," + std::to_string(b) + ")";
    w.domain = Interval::all();
    w.f = [a, b](double t) { return a * t + b; };
    w.df = [a](double) { return a; };
    w.ddf = [](double) { return 0.0; };
    return w;
}

// f(t) = ln(1/sin t) on (0, pi).
inline WarpingFunction warp_log_inv_sin() {
    WarpingFunction w;
    w.name = "log(1/sin(t))";
    w.domain = Interval{0.0, kPi};
    w.f = [](double t) { return -std::log(std::sin(t)); };
    w.df = [](double t) { return -std::cos(t) / std::sin(t); };
    w.ddf = [](double t) {
        const double s = std::sin(t);
        return 1.0 / (s * s);
    };
    return w;
}

// f(t) = ln(cos t / sqrt(sin t)) on (0, pi/2), valid as written only there.
inline WarpingFunction warp_cos_over_sqrt_sin() {
    WarpingFunction w;
    w.name = "log(cos(t)/sqrt(sin(t)))";
    w.domain = Interval{0.0, 0.5 * kPi};
    w.f = [](double t) { return std::log(std::cos(t)) - 0.5 * std::log(std::sin(t)); };
    w.df = [](double t) { return -std::tan(t) - 0.5 * std::cos(t) / std::sin(t); };
    w.ddf = [](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return -1.0 / (c * c) + 0.5 / (s * s);
    };
    return w;
}

// f(t) = ln|cot t|; the default branch (pi/2, pi) is where cot t < 0.
inline WarpingFunction warp_ln_abs_cot(double lo = 0.5 * kPi, double hi = kPi) {
    Interval dom{lo, hi};
    if (!(lo < hi) || lo < 0.0 || hi > kPi || (lo < 0.5 * kPi && hi > 0.5 * kPi))
        throw ValidationError(
            "warp_ln_abs_cot: domain must be a subinterval of (0,pi/2) or (pi/2,pi)");
    WarpingFunction w;
    w.name = "log_abs_cot";
    w.domain = dom;
    w.f = [](double t) { return std::log(std::abs(std::cos(t) / std::sin(t))); };
    // d/dt ln|cot t| = -1/(sin t cos t)
    w.df = [](double t) { return -1.0 / (std::sin(t) * std::cos(t)); };
    // d2/dt2 ln|cot t| = cos(2t)/(sin t cos t)^2
    w.ddf = [](double t) {
        const double sc = std::sin(t) * std::cos(t);
        return std::cos(2.0 * t) / (sc * sc);
    };
    return w;
}

// f(t) = ln|A e^{sqrt(c0) t} + B e^{-sqrt(c0) t}|. The absolute value keeps f
// real on either side of a sign change of F; the domain must not contain the
// zero of F itself.
inline WarpingFunction warp_ln_exp_pair(double A, double B, double c0,
                                        Interval domain = Interval::all()) {
    if (!(c0 > 0.0)) throw ValidationError("warp_ln_exp_pair: c0 must be positive");
    if (A == 0.0 && B == 0.0)
        throw ValidationError("warp_ln_exp_pair: coefficients must not both vanish");
    const double r = std::sqrt(c0);
    if (A != 0.0 && -B / A > 0.0) {
        const double t_zero = std::log(-B / A) / (2.0 * r);
        if (domain.contains(t_zero))
            throw ValidationError("warp_ln_exp_pair: domain contains a zero of the "
                                  "argument at t=" + std::to_string(t_zero));
    }
    WarpingFunction w;
    w.name = "log_abs_exp_pair(A=" + std::to_string(A) + ",B=" + std::to_string(B) +
             ",c0=" + std::to_string(c0) + ")";
    w.domain = domain;
    auto F = [A, B, r](double t) { return A * std::exp(r * t) + B * std::exp(-r * t); };
    auto Fp = [A, B, r](double t) {
        return r * (A * std::exp(r * t) - B * std::exp(-r * t));
    };
    auto ratio = [F, Fp, w_name = w.name](double t) {
        const double v = F(t);
        if (v == 0.0 || !std::isfinite(1.0 / v))
            throw EvalError("warp argument vanishes", w_name);
        return Fp(t) / v;
    };
    w.f = [F, w_name = w.name](double t) {
        const double v = std::abs(F(t));
        if (v == 0.0) throw EvalError("warp argument vanishes", w_name);
        return std::log(v);
    };
    w.df = ratio;
    // F'' = c0 F, so f'' = c0 - (F'/F)^2.
    w.ddf = [ratio, c0](double t) {
        const double q = ratio(t);
        return c0 - q * q;
    };
    return w;
}

// The first explicit pair-of-exponentials warp with literal constants:
// F(t) = e^{-sqrt(c0) t} [c^2 e^{2 sqrt(c0) t} - 2 c0 kappa] / (4 c0 c),
// i.e. A = c/(4 c0), B = -kappa/(2c).
inline WarpingFunction warp_ln_F1(double c0, double c, int kappa,
                                  Interval domain = Interval::all()) {
    if (!(c > 0.0)) throw ValidationError("warp_ln_F1: c must be positive");
    WarpingFunction w = warp_ln_exp_pair(c / (4.0 * c0), -kappa / (2.0 * c), c0, domain);
    w.name = "log_abs_F1(c0=" + std::to_string(c0) + ",c=" + std::to_string(c) +
             ",kappa=" + std::to_string(kappa) + ")";
    return w;
}

// The second explicit warp with literal constants:
// F(t) = e^{-sqrt(c0) t} [c^2 - 2 c0 e^{2 sqrt(c0)} kappa] / (4 c0 c)
// (a pure multiple of e^{-sqrt(c0) t}).
inline WarpingFunction warp_ln_F2(double c0, double c, int kappa,
                                  Interval domain = Interval::all()) {
    if (!(c > 0.0)) throw ValidationError("warp_ln_F2: c must be positive");
    if (!(c0 > 0.0)) throw ValidationError("warp_ln_F2: c0 must be positive");
    const double B = (c * c - 2.0 * c0 * std::exp(2.0 * std::sqrt(c0)) * kappa) / (4.0 * c0 * c);
    if (B == 0.0) throw ValidationError("warp_ln_F2: coefficient vanishes for these constants");
    WarpingFunction w = warp_ln_exp_pair(0.0, B, c0, domain);
    w.name = "log_abs_F2(c0=" + std::to_string(c0) + ",c=" + std::to_string(c) +
             ",kappa=" + std::to_string(kappa) + ")";
    return w;
}

// Build a warp from expression text; derivatives are exact (symbolic).
inline WarpingFunction warp_from_expression(const std::string& text,
                                            Interval domain = Interval::all()) {
    if (text.empty()) throw ValidationError("warp expression must be non-empty");
    const ExprPtr ast = parse_warp_expr(text);
    const ExprPtr d1 = differentiate(ast);
    const ExprPtr d2 = differentiate(d1);
    WarpingFunction w;
    w.name = print_expr(ast);
    w.domain = domain;
    w.f = [ast](double t) { return eval_ast(ast, t); };
    w.df = [d1](double t) { return eval_ast(d1, t); };
    w.ddf = [d2](double t) { return eval_ast(d2, t); };
    return w;
}

}  // namespace umbilic
