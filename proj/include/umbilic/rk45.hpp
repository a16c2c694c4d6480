#pragma once

// Adaptive explicit Runge-Kutta integration: the Dormand-Prince 5(4)
// embedded pair with standard step-size control. Right-hand sides may throw
// ValidationError / EvalError when a trial stage leaves their domain; such a
// step is rejected and retried smaller, so domain edges shrink the step until
// the caller's event logic (or step underflow) takes over.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>

#include "umbilic/core.hpp"

namespace umbilic {

struct OdeOptions {
    double tol = 1e-10;       // absolute and relative tolerance
    double max_step = kInf;   // upper bound on the step size
    double first_step = 0.0;  // 0 selects a conservative default
};

template <int N>
struct OdeStepRecord {
    double s0 = 0.0, s1 = 0.0;
    Eigen::Matrix<double, N, 1> y0, y1;
    Eigen::Matrix<double, N, 1> d0, d1;  // derivatives at the two endpoints
};

inline constexpr double kStepUnderflowFactor = 1e-14;

template <int N, class Rhs>
class DormandPrince {
public:
    using Vec = Eigen::Matrix<double, N, 1>;

    DormandPrince(Rhs rhs, double s0, const Vec& y0, const OdeOptions& opt)
        : rhs_(std::move(rhs)), opt_(opt), s_(s0), y_(y0) {
        if (!(opt_.tol > 0.0)) throw ValidationError("integration tolerance must be positive");
        if (!(opt_.max_step > 0.0)) throw ValidationError("max_step must be positive");
        rhs_(s_, y_, d_);  // the initial state must be evaluable
        h_ = opt_.first_step > 0.0 ? opt_.first_step : std::min(opt_.max_step, 1e-3);
    }

    double s() const { return s_; }
    const Vec& y() const { return y_; }
    const Vec& deriv() const { return d_; }

    // Advance by one accepted step, not past s_limit. Returns the step record,
    // or nullopt when the step size underflows.
    std::optional<OdeStepRecord<N>> step(double s_limit) {
        if (!(s_ < s_limit))
            throw ValidationError("integrator asked to step to a non-increasing target");
        Vec k2, k3, k4, k5, k6, k7, y1, err;
        for (;;) {
            const double h = std::min({h_, opt_.max_step, s_limit - s_});
            if (h < kStepUnderflowFactor * std::max(1.0, std::abs(s_))) return std::nullopt;

            bool domain_failure = false;
            double err_norm = 0.0;
            try {
                stage(s_ + h * (1.0 / 5.0), y_ + h * ((1.0 / 5.0) * d_), k2);
                stage(s_ + h * (3.0 / 10.0),
                      y_ + h * ((3.0 / 40.0) * d_ + (9.0 / 40.0) * k2), k3);
                stage(s_ + h * (4.0 / 5.0),
                      y_ + h * ((44.0 / 45.0) * d_ - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3),
                      k4);
                stage(s_ + h * (8.0 / 9.0),
                      y_ + h * ((19372.0 / 6561.0) * d_ - (25360.0 / 2187.0) * k2 +
                                (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4),
                      k5);
                stage(s_ + h,
                      y_ + h * ((9017.0 / 3168.0) * d_ - (355.0 / 33.0) * k2 +
                                (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                                (5103.0 / 18656.0) * k5),
                      k6);
                y1 = y_ + h * ((35.0 / 384.0) * d_ + (500.0 / 1113.0) * k3 +
                               (125.0 / 192.0) * k4 - (2187.0 / 6784.0) * k5 +
                               (11.0 / 84.0) * k6);
                stage(s_ + h, y1, k7);  // FSAL: derivative at the right endpoint
                err = h * ((71.0 / 57600.0) * d_ - (71.0 / 16695.0) * k3 +
                           (71.0 / 1920.0) * k4 - (17253.0 / 339200.0) * k5 +
                           (22.0 / 525.0) * k6 - (1.0 / 40.0) * k7);
                for (int i = 0; i < N; ++i) {
                    const double scale =
                        opt_.tol + opt_.tol * std::max(std::abs(y_[i]), std::abs(y1[i]));
                    const double r = err[i] / scale;
                    err_norm += r * r;
                }
                err_norm = std::sqrt(err_norm / N);
                if (!std::isfinite(err_norm)) domain_failure = true;
            } catch (const ValidationError&) {
                domain_failure = true;  // trial stage left a domain; retry smaller
            }

            if (domain_failure) {
                h_ = h * 0.5;
                continue;
            }
            if (err_norm > 1.0) {
                h_ = h * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
                continue;
            }

            OdeStepRecord<N> rec;
            rec.s0 = s_;
            rec.s1 = s_ + h;
            rec.y0 = y_;
            rec.y1 = y1;
            rec.d0 = d_;
            rec.d1 = k7;

            s_ += h;
            y_ = y1;
            d_ = k7;
            const double grow =
                err_norm > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)))
                               : 5.0;
            h_ = std::min(opt_.max_step, h * grow);
            return rec;
        }
    }

private:
    void stage(double s, const Vec& y, Vec& out) { rhs_(s, y, out); }

    Rhs rhs_;
    OdeOptions opt_;
    double s_;
    Vec y_;
    Vec d_;
    double h_ = 1e-3;
};

// Quintic Hermite interpolation on [s0, s1] from values and first and second
// derivatives at both ends; exact for polynomials of degree five, so the
// interpolation error over a capped step is negligible next to the
// finite-difference stencils applied on top of it.
struct QuinticHermite {
    double s0 = 0.0, s1 = 1.0;
    double y0 = 0.0, d0 = 0.0, dd0 = 0.0;
    double y1 = 0.0, d1 = 0.0, dd1 = 0.0;

    double value(double s) const {
        double c[6];
        coeffs(c);
        const double u = (s - s0) / (s1 - s0);
        double acc = 0.0;
        for (int i = 5; i >= 0; --i) acc = acc * u + c[i];
        return acc;
    }
    double derivative(double s) const {
        double c[6];
        coeffs(c);
        const double h = s1 - s0;
        const double u = (s - s0) / h;
        double acc = 0.0;
        for (int i = 5; i >= 1; --i) acc = acc * u + i * c[i];
        return acc / h;
    }

private:
    // Monomial coefficients in u = (s - s0)/h of the quintic matching
    // (y, h y', h^2 y'') at u=0 and u=1.
    void coeffs(double c[6]) const {
        const double h = s1 - s0;
        const double p0 = y0, m0 = d0 * h, a0 = dd0 * h * h;
        const double p1 = y1, m1 = d1 * h, a1 = dd1 * h * h;
        c[0] = p0;
        c[1] = m0;
        c[2] = 0.5 * a0;
        c[3] = -10.0 * p0 - 6.0 * m0 - 1.5 * a0 + 10.0 * p1 - 4.0 * m1 + 0.5 * a1;
        c[4] = 15.0 * p0 + 8.0 * m0 + 1.5 * a0 - 15.0 * p1 + 7.0 * m1 - a1;
        c[5] = -6.0 * p0 - 3.0 * m0 - 0.5 * a0 + 6.0 * p1 - 3.0 * m1 + 0.5 * a1;
    }
};

}  // namespace umbilic
