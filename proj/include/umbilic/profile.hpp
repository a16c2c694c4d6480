#pragma once

// Profile curves of invariant totally umbilical surfaces. The generating
// curve s -> (rho(s), t(s)) of each invariant class satisfies a first
// integral t_s = F(rho) together with the unit-speed constraint
//   e^{2f(t)} mu(rho)^2 rho_s^2 + t_s^2 = 1.
// The first-order form rho_s = +-sqrt(...) is singular at turning points
// (|t_s| = 1), so integration advances the equivalent regular second-order
// system, which conserves both constraints exactly along exact solutions:
//   rho_ss = -t_s F'(rho) e^{-2f}/mu^2 - f' t_s rho_s - (mu'/mu) rho_s^2
//   t_ss   = F'(rho) rho_s.
// Turning points are then ordinary zeros of rho_s, located by bisection.
// Ambient geodesics are integrated here too (frame-component transport).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "umbilic/core.hpp"
#include "umbilic/geometry.hpp"
#include "umbilic/rk45.hpp"
#include "umbilic/warp.hpp"

namespace umbilic {

enum class IsometryClass {
    rotational,              // any kappa
    euclidean_translation,   // kappa = 0
    parabolic_translation,   // kappa = -1 (horizontal translations, half-plane)
    hyperbolic_translation,  // kappa = -1 (dilations, half-plane)
};

inline const char* isometry_class_name(IsometryClass c) {
    switch (c) {
        case IsometryClass::rotational: return "rotational";
        case IsometryClass::euclidean_translation: return "euclidean";
        case IsometryClass::parabolic_translation: return "parabolic";
        case IsometryClass::hyperbolic_translation: return "hyperbolic";
    }
    return "?";
}

struct InvariantSurfaceSpec {
    IsometryClass cls = IsometryClass::rotational;
    int kappa = 0;
    WarpingFunction warp;
    double c0 = 1.0;
    // Initial condition: arclength origin, profile coordinates, and the sign
    // branch of rho_s used where the curve is not at a turning point.
    double s0 = 0.0;
    double rho0 = 1.0;
    double t0 = 0.0;
    int branch = 1;  // +1 or -1
};

// True when rho is bounded above by pi in this class's chart.
inline bool rho_bounded_by_pi(const InvariantSurfaceSpec& spec) {
    return (spec.cls == IsometryClass::rotational && spec.kappa == 1) ||
           spec.cls == IsometryClass::hyperbolic_translation;
}

inline void validate_rho_chart(const InvariantSurfaceSpec& spec, double rho) {
    if (!(rho > 0.0))
        throw ValidationError("profile coordinate rho must be positive (got " +
                              std::to_string(rho) + ")");
    if (rho_bounded_by_pi(spec) && !(rho < kPi))
        throw ValidationError("profile coordinate rho must lie in (0, pi) for class " +
                              std::string(isometry_class_name(spec.cls)) +
                              " (got " + std::to_string(rho) + ")");
}

inline void validate_invariant_spec(const InvariantSurfaceSpec& spec) {
    validate_kappa(spec.kappa);
    switch (spec.cls) {
        case IsometryClass::rotational:
            break;
        case IsometryClass::euclidean_translation:
            if (spec.kappa != 0)
                throw ValidationError("euclidean translations require kappa=0");
            break;
        case IsometryClass::parabolic_translation:
        case IsometryClass::hyperbolic_translation:
            if (spec.kappa != -1)
                throw ValidationError(std::string(isometry_class_name(spec.cls)) +
                                      " translations require kappa=-1");
            break;
    }
    if (!(spec.c0 > 0.0)) throw ValidationError("constant c0 must be positive");
    if (spec.branch != 1 && spec.branch != -1)
        throw ValidationError("sign branch must be +1 or -1");
    if (!std::isfinite(spec.s0)) throw ValidationError("s0 must be finite");
    validate_rho_chart(spec, spec.rho0);
    spec.warp.check_domain(spec.t0);
}

// Conformal factor mu(rho) of the profile-plane fiber direction:
// ds_fiber = e^f mu(rho) drho.
inline double profile_mu(IsometryClass cls, double rho) {
    switch (cls) {
        case IsometryClass::rotational:
        case IsometryClass::euclidean_translation: return 1.0;
        case IsometryClass::parabolic_translation: return 1.0 / rho;
        case IsometryClass::hyperbolic_translation: return 1.0 / std::sin(rho);
    }
    return 1.0;
}

// d(log mu)/drho, used by the second-order system.
inline double profile_mu_log_slope(IsometryClass cls, double rho) {
    switch (cls) {
        case IsometryClass::rotational:
        case IsometryClass::euclidean_translation: return 0.0;
        case IsometryClass::parabolic_translation: return -1.0 / rho;
        case IsometryClass::hyperbolic_translation: return -std::cos(rho) / std::sin(rho);
    }
    return 0.0;
}

// Prescribed t_s as a function of rho (the first integral of each class).
inline double first_integral_target(const InvariantSurfaceSpec& spec, double rho) {
    validate_rho_chart(spec, rho);
    switch (spec.cls) {
        case IsometryClass::rotational:
            if (spec.kappa == 1) return spec.c0 * std::sin(rho);
            if (spec.kappa == -1) return spec.c0 * std::sinh(rho);
            return spec.c0 * rho;
        case IsometryClass::euclidean_translation: return spec.c0;
        case IsometryClass::parabolic_translation: return 1.0 / (spec.c0 * rho);
        case IsometryClass::hyperbolic_translation: return spec.c0 / std::sin(rho);
    }
    return 0.0;
}

inline double first_integral_slope(const InvariantSurfaceSpec& spec, double rho) {
    validate_rho_chart(spec, rho);
    switch (spec.cls) {
        case IsometryClass::rotational:
            if (spec.kappa == 1) return spec.c0 * std::cos(rho);
            if (spec.kappa == -1) return spec.c0 * std::cosh(rho);
            return spec.c0;
        case IsometryClass::euclidean_translation: return 0.0;
        case IsometryClass::parabolic_translation: return -1.0 / (spec.c0 * rho * rho);
        case IsometryClass::hyperbolic_translation: {
            const double s = std::sin(rho);
            return -spec.c0 * std::cos(rho) / (s * s);
        }
    }
    return 0.0;
}

struct ProfileState {
    double s = 0.0;
    double rho = 0.0;
    double t = 0.0;
    double rho_s = 0.0;
    double t_s = 0.0;
};

// Unit-speed defect e^{2f} mu^2 rho_s^2 + t_s^2 - 1 of a state.
inline double unit_speed_residual(const InvariantSurfaceSpec& spec, const ProfileState& st) {
    const double ef = std::exp(spec.warp.f_at(st.t));
    const double m = profile_mu(spec.cls, st.rho);
    return ef * ef * m * m * st.rho_s * st.rho_s + st.t_s * st.t_s - 1.0;
}

// First-order right-hand side: t_s from the first integral, rho_s from the
// unit-speed constraint with the spec's sign branch. Singular exactly at
// turning points; integration uses the second-order system instead.
inline std::pair<double, double> profile_rhs(const InvariantSurfaceSpec& spec,
                                             const ProfileState& state) {
    const double ts = first_integral_target(spec, state.rho);
    if (std::abs(ts) > 1.0 + 1e-12)
        throw ValidationError("state outside the admissible region: first integral gives |t_s|=" +
                              std::to_string(std::abs(ts)) + " > 1");
    const double ts_clamped = std::clamp(ts, -1.0, 1.0);
    const double ef = std::exp(spec.warp.f_at(state.t));
    const double m = profile_mu(spec.cls, state.rho);
    const double rho_s = spec.branch * std::sqrt(std::max(0.0, 1.0 - ts_clamped * ts_clamped)) /
                         (ef * m);
    return {rho_s, ts_clamped};
}

enum class Termination {
    reached_end,
    axis,                 // rotational rho -> 0
    chart_boundary,       // rho at a chart limit (0 or pi as applicable)
    warp_boundary,        // t at a finite end of the warp domain
    turning_point_limit,  // maximum number of rho_s sign flips exceeded
    step_underflow,
};

inline const char* termination_name(Termination t) {
    switch (t) {
        case Termination::reached_end: return "reached-end";
        case Termination::axis: return "axis";
        case Termination::chart_boundary: return "chart-boundary";
        case Termination::warp_boundary: return "warp-boundary";
        case Termination::turning_point_limit: return "turning-point-limit";
        case Termination::step_underflow: return "step-underflow";
    }
    return "?";
}

inline constexpr double kAxisThreshold = 1e-9;
inline constexpr int kMaxFoldFlips = 32;
inline constexpr double kFoldBisectionTol = 1e-12;

// Dense node: state plus second derivatives, enough for quintic Hermite
// interpolation between consecutive nodes.
struct ProfileNode {
    double s = 0.0;
    double rho = 0.0, t = 0.0;
    double rho_s = 0.0, t_s = 0.0;
    double rho_ss = 0.0, t_ss = 0.0;
};

struct IntegrationResult {
    std::vector<ProfileState> samples;  // on the requested grid (or at nodes)
    std::vector<ProfileNode> nodes;     // every accepted step endpoint
    Termination termination = Termination::reached_end;
    double s_final = 0.0;
    int turning_points = 0;                // rho_s sign flips encountered
    std::vector<double> fold_locations;    // s of each flip, bisected
    double max_unit_speed_residual = 0.0;
    double max_first_integral_residual = 0.0;

    // Interpolated state anywhere inside the integrated range.
    ProfileState state_at(double s) const {
        if (nodes.empty()) throw ValidationError("state_at: empty integration result");
        const double lo = nodes.front().s, hi = nodes.back().s;
        const double slack = 1e-9 * std::max(1.0, std::abs(hi));
        if (s < lo - slack || s > hi + slack)
            throw ValidationError("state_at: s outside integrated range");
        const double sc = std::clamp(s, lo, hi);
        auto it = std::upper_bound(nodes.begin(), nodes.end(), sc,
                                   [](double v, const ProfileNode& n) { return v < n.s; });
        std::size_t j = static_cast<std::size_t>(it - nodes.begin());
        if (j == 0) j = 1;
        if (j >= nodes.size()) j = nodes.size() - 1;
        const ProfileNode& a = nodes[j - 1];
        const ProfileNode& b = nodes[j];
        const QuinticHermite hr{a.s, b.s, a.rho, a.rho_s, a.rho_ss, b.rho, b.rho_s, b.rho_ss};
        const QuinticHermite ht{a.s, b.s, a.t, a.t_s, a.t_ss, b.t, b.t_s, b.t_ss};
        return {sc, hr.value(sc), ht.value(sc), hr.derivative(sc), ht.derivative(sc)};
    }
};

namespace detail {

// Second derivatives of the regular system at a state.
inline std::pair<double, double> profile_accel(const InvariantSurfaceSpec& spec,
                                               double rho, double t, double rho_s, double t_s) {
    const WarpSample ws = spec.warp.eval(t);
    const double m = profile_mu(spec.cls, rho);
    const double Fp = first_integral_slope(spec, rho);
    const double rho_ss = -t_s * Fp * std::exp(-2.0 * ws.f) / (m * m) -
                          ws.df * t_s * rho_s -
                          profile_mu_log_slope(spec.cls, rho) * rho_s * rho_s;
    return {rho_ss, Fp * rho_s};
}

struct ProfileOdeRhs {
    const InvariantSurfaceSpec* spec;
    void operator()(double, const Eigen::Matrix<double, 4, 1>& y,
                    Eigen::Matrix<double, 4, 1>& dy) const {
        validate_rho_chart(*spec, y[0]);
        const auto [rss, tss] = profile_accel(*spec, y[0], y[1], y[2], y[3]);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = rss;
        dy[3] = tss;
    }
};

inline ProfileNode make_profile_node(const InvariantSurfaceSpec& spec, double s,
                                     const Eigen::Matrix<double, 4, 1>& y) {
    const auto [rss, tss] = profile_accel(spec, y[0], y[1], y[2], y[3]);
    return {s, y[0], y[1], y[2], y[3], rss, tss};
}

// Bisection of a scalar function on [lo, hi] with f(lo), f(hi) of opposite
// sign (or hitting zero); refines to tol_s in the abscissa.
template <class F>
double bisect(F&& f, double lo, double hi, double tol_s) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    for (int it = 0; it < 200 && hi - lo > tol_s; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Integrate the profile curve from spec.s0 to s_end. When sample_grid is
// non-empty it must be strictly increasing within [s0, s_end]; samples are
// produced by landing steps exactly on the grid (no interpolation). With an
// empty grid, every accepted node becomes a sample.
inline IntegrationResult integrate_profile(const InvariantSurfaceSpec& spec, double s_end,
                                           double tol,
                                           const std::vector<double>& sample_grid = {}) {
    validate_invariant_spec(spec);
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (!(s_end > spec.s0)) throw ValidationError("s_end must exceed s0");

    // Initial state from the first integral and the sign branch.
    const double ts0 = first_integral_target(spec, spec.rho0);
    if (std::abs(ts0) > 1.0 + 1e-9)
        throw ValidationError("initial state inadmissible: first integral gives |t_s|=" +
                              std::to_string(std::abs(ts0)) + " > 1");
    Eigen::Matrix<double, 4, 1> y0;
    y0[0] = spec.rho0;
    y0[1] = spec.t0;
    y0[3] = std::clamp(ts0, -1.0, 1.0);
    {
        const double ef = std::exp(spec.warp.f_at(spec.t0));
        const double m = profile_mu(spec.cls, spec.rho0);
        y0[2] = spec.branch * std::sqrt(std::max(0.0, 1.0 - y0[3] * y0[3])) / (ef * m);
    }

    // The local tolerance is kept well below the requested invariant-drift
    // budget: the unit-speed and first-integral constraints are exact first
    // integrals of this system, so their numerical drift tracks the
    // accumulated local error.
    OdeOptions opt;
    opt.tol = std::clamp(tol * 1e-3, 1e-14, tol);
    opt.max_step = 0.05;
    detail::ProfileOdeRhs rhs{&spec};
    DormandPrince<4, detail::ProfileOdeRhs> stepper(rhs, spec.s0, y0, opt);

    IntegrationResult result;
    result.nodes.push_back(detail::make_profile_node(spec, spec.s0, y0));

    const double hi_pi = rho_bounded_by_pi(spec) ? kPi - kAxisThreshold : kInf;
    const bool axis_is_axis = spec.cls == IsometryClass::rotational;
    const double warp_lo = std::isfinite(spec.warp.domain.lo)
                               ? spec.warp.domain.lo +
                                     1e-9 * std::max(1.0, std::abs(spec.warp.domain.lo))
                               : -kInf;
    const double warp_hi = std::isfinite(spec.warp.domain.hi)
                               ? spec.warp.domain.hi -
                                     1e-9 * std::max(1.0, std::abs(spec.warp.domain.hi))
                               : kInf;

    auto track_residuals = [&](const ProfileNode& n) {
        const ProfileState st{n.s, n.rho, n.t, n.rho_s, n.t_s};
        result.max_unit_speed_residual =
            std::max(result.max_unit_speed_residual, std::abs(unit_speed_residual(spec, st)));
        result.max_first_integral_residual =
            std::max(result.max_first_integral_residual,
                     std::abs(n.t_s - first_integral_target(spec, n.rho)));
    };
    track_residuals(result.nodes.front());

    std::size_t grid_next = 0;
    const double snap = 1e-12 * std::max(1.0, std::abs(s_end));
    // Skip grid entries at or before s0 (s0 itself is always sampled).
    auto push_sample = [&](const ProfileState& st) {
        if (!result.samples.empty() && !(st.s > result.samples.back().s + 0.0)) return;
        result.samples.push_back(st);
    };
    push_sample({spec.s0, y0[0], y0[1], y0[2], y0[3]});
    while (grid_next < sample_grid.size() && sample_grid[grid_next] <= spec.s0 + snap)
        ++grid_next;

    // Sign of rho_s from the last node where it was meaningfully non-zero.
    int prev_sign = y0[2] > 0.0 ? 1 : (y0[2] < 0.0 ? -1 : 0);
    bool done = false;

    auto finalize_at = [&](double s_stop, Termination why) {
        // Truncate the trajectory at s_stop using the dense interpolant.
        const ProfileState st = result.state_at(std::max(s_stop, result.nodes.front().s));
        while (result.nodes.size() > 1 && result.nodes.back().s > st.s) result.nodes.pop_back();
        if (result.nodes.back().s < st.s - snap) {
            Eigen::Matrix<double, 4, 1> yf;
            yf << st.rho, st.t, st.rho_s, st.t_s;
            ProfileNode tail{};
            try {
                tail = detail::make_profile_node(spec, st.s, yf);
            } catch (const ValidationError&) {
                tail = ProfileNode{st.s, st.rho, st.t, st.rho_s, st.t_s, 0.0, 0.0};
            }
            result.nodes.push_back(tail);
        }
        while (!result.samples.empty() && result.samples.back().s > st.s + snap)
            result.samples.pop_back();
        push_sample(st);
        result.termination = why;
        result.s_final = st.s;
        done = true;
    };

    while (!done) {
        // Serve grid points that coincide with the current position.
        while (grid_next < sample_grid.size() &&
               sample_grid[grid_next] <= stepper.s() + snap) {
            ProfileState st{sample_grid[grid_next], stepper.y()[0], stepper.y()[1],
                            stepper.y()[2], stepper.y()[3]};
            push_sample(st);
            ++grid_next;
        }
        if (stepper.s() >= s_end - snap) {
            result.termination = Termination::reached_end;
            result.s_final = stepper.s();
            break;
        }
        const double s_limit =
            grid_next < sample_grid.size() ? std::min(sample_grid[grid_next], s_end) : s_end;

        auto rec = stepper.step(s_limit);
        if (!rec) {
            finalize_at(stepper.s(), Termination::step_underflow);
            break;
        }

        const ProfileNode node = detail::make_profile_node(spec, rec->s1, rec->y1);
        const ProfileNode prev = result.nodes.back();
        result.nodes.push_back(node);
        track_residuals(node);

        // Dense interpolants over this step for event refinement.
        const QuinticHermite hr{prev.s, node.s, prev.rho, prev.rho_s, prev.rho_ss,
                                node.rho, node.rho_s, node.rho_ss};
        const QuinticHermite ht{prev.s, rec->s1, prev.t, prev.t_s, prev.t_ss,
                                node.t, node.t_s, node.t_ss};

        struct Event {
            double s;
            Termination why;
            bool fold;
        };
        std::vector<Event> events;

        // Turning point: rho_s changes sign across the step.
        const int sign_now = node.rho_s > 0.0 ? 1 : (node.rho_s < 0.0 ? -1 : 0);
        if (prev_sign == 0) {
            prev_sign = sign_now;
        } else if (sign_now != 0 && sign_now != prev_sign) {
            const double s_fold = detail::bisect(
                [&](double s) { return hr.derivative(s); }, prev.s, node.s, kFoldBisectionTol);
            events.push_back({s_fold, Termination::turning_point_limit, true});
            prev_sign = sign_now;
        }
        // Axis / chart-boundary in rho.
        if (node.rho < kAxisThreshold) {
            const double s_hit = detail::bisect(
                [&](double s) { return hr.value(s) - kAxisThreshold; }, prev.s, node.s,
                kFoldBisectionTol);
            events.push_back(
                {s_hit, axis_is_axis ? Termination::axis : Termination::chart_boundary, false});
        }
        if (node.rho > hi_pi) {
            const double s_hit = detail::bisect(
                [&](double s) { return hr.value(s) - hi_pi; }, prev.s, node.s, kFoldBisectionTol);
            events.push_back({s_hit, Termination::chart_boundary, false});
        }
        // Warp-domain boundary in t.
        if (node.t < warp_lo) {
            const double s_hit = detail::bisect([&](double s) { return ht.value(s) - warp_lo; },
                                                prev.s, node.s, kFoldBisectionTol);
            events.push_back({s_hit, Termination::warp_boundary, false});
        }
        if (node.t > warp_hi) {
            const double s_hit = detail::bisect([&](double s) { return ht.value(s) - warp_hi; },
                                                prev.s, node.s, kFoldBisectionTol);
            events.push_back({s_hit, Termination::warp_boundary, false});
        }

        std::sort(events.begin(), events.end(),
                  [](const Event& a, const Event& b) { return a.s < b.s; });
        for (const Event& ev : events) {
            if (ev.fold) {
                if (result.turning_points >= kMaxFoldFlips) {
                    finalize_at(ev.s, Termination::turning_point_limit);
                    break;
                }
                ++result.turning_points;
                result.fold_locations.push_back(ev.s);
            } else {
                finalize_at(ev.s, ev.why);
                break;
            }
        }
        if (done) break;

        // Serve grid points inside the completed step (exact landings only;
        // the stepper is clipped to grid points, so interior hits mean the
        // grid point coincides with the endpoint).
        while (grid_next < sample_grid.size() && sample_grid[grid_next] <= node.s + snap) {
            push_sample(result.state_at(sample_grid[grid_next]));
            ++grid_next;
        }
        if (sample_grid.empty())
            push_sample({node.s, node.rho, node.t, node.rho_s, node.t_s});
    }

    if (result.termination == Termination::reached_end) {
        result.s_final = stepper.s();
        if (sample_grid.empty()) {
            push_sample({stepper.s(), stepper.y()[0], stepper.y()[1], stepper.y()[2],
                         stepper.y()[3]});
        }
    }
    return result;
}

// --------------------------------------------------------------------------
// Closed forms used as references.

enum class ClosedFormKind { k0_rot, k1_rot, plane };

struct ClosedFormExample {
    ClosedFormKind kind = ClosedFormKind::k0_rot;
    // plane-only data:
    double gamma = 0.0;  // angle of the plane against the slice
    WarpingFunction warp;
    double s0 = 0.0, t0 = 0.0, rho0 = 0.0;
};

inline ClosedFormExample closed_form_k0_rot() { return {ClosedFormKind::k0_rot, 0, {}, 0, 0, 0}; }
inline ClosedFormExample closed_form_k1_rot() { return {ClosedFormKind::k1_rot, 0, {}, 0, 0, 0}; }
inline ClosedFormExample closed_form_plane(double gamma, WarpingFunction warp, double s0,
                                           double t0, double rho0) {
    return {ClosedFormKind::plane, gamma, std::move(warp), s0, t0, rho0};
}

namespace detail {

// Adaptive Simpson quadrature.
template <class F>
double simpson_rec(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

// (rho(s), t(s)) of a closed-form profile.
inline std::pair<double, double> closed_form_profile(const ClosedFormExample& ex, double s) {
    if (!std::isfinite(s)) throw ValidationError("closed_form_profile: s must be finite");
    switch (ex.kind) {
        case ClosedFormKind::k0_rot:
            // t = 2 arctan(e^s), rho = sech s; valid for all real s.
            return {1.0 / std::cosh(s), 2.0 * std::atan(std::exp(s))};
        case ClosedFormKind::k1_rot:
            // rho = t = 2 arctan(e^s) on s >= 0; for s > 0 the curve lies in
            // t in (pi/2, pi), where the ln|cot t| warp is defined.
            if (!(s >= 0.0))
                throw ValidationError("closed_form_profile: k1-rot requires s >= 0");
            return {2.0 * std::atan(std::exp(s)), 2.0 * std::atan(std::exp(s))};
        case ClosedFormKind::plane: {
            // Slanted plane: t(s) = t0 + s sin(gamma), rho from quadrature of
            // cos(gamma) e^{-f(t(s))}.
            const double sg = std::sin(ex.gamma), cg = std::cos(ex.gamma);
            const double t = ex.t0 + (s - ex.s0) * sg;
            ex.warp.check_domain(t);
            const double rho =
                ex.rho0 + detail::adaptive_simpson(
                              [&](double u) {
                                  return cg * std::exp(-ex.warp.f_at(ex.t0 + (u - ex.s0) * sg));
                              },
                              ex.s0, s, 1e-13);
            return {rho, t};
        }
    }
    throw ValidationError("closed_form_profile: unknown example");
}

// --------------------------------------------------------------------------
// Ambient geodesics, integrated in frame components: the velocity is
// gamma' = a1 E1 + a2 E2 + a3 E3 and geodesic transport reads
// a' = -connection_in_direction(a, a). nu(s) = a3 is the vertical component.

struct GeodesicState {
    double s = 0.0;
    AmbientPoint p;
    FrameVector a = FrameVector::Zero();
    double nu = 0.0;
};

struct GeodesicResult {
    std::vector<GeodesicState> samples;
    Termination termination = Termination::reached_end;
    double s_final = 0.0;
    double max_unit_norm_residual = 0.0;
};

namespace detail {

struct GeodesicRhs {
    int kappa;
    const WarpingFunction* warp;
    Chart chart;
    void operator()(double, const Eigen::Matrix<double, 6, 1>& y,
                    Eigen::Matrix<double, 6, 1>& dy) const {
        const AmbientPoint p{y[0], y[1], y[2]};
        const FrameVector a{y[3], y[4], y[5]};
        const CoordVector v = frame_to_coord(kappa, *warp, p, a, chart);
        const FrameVector ap = -connection_in_direction(kappa, *warp, p, a, a, chart);
        dy << v.x(), v.y(), v.z(), ap.x(), ap.y(), ap.z();
    }
};

}  // namespace detail

inline GeodesicResult integrate_geodesic(int kappa, const WarpingFunction& warp,
                                         const AmbientPoint& start, const FrameVector& velocity,
                                         double s_end, double tol, int n_samples = 0,
                                         Chart chart = Chart::standard) {
    validate_kappa(kappa);
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (!(s_end > 0.0)) throw ValidationError("s_end must be positive");
    const double vnorm = velocity.norm();
    if (std::abs(vnorm - 1.0) > 1e-9)
        throw ValidationError("initial geodesic velocity must be unit length in the frame");
    chart_lambda(kappa, chart, start.x, start.y);  // validates the chart position
    warp.check_domain(start.t);

    Eigen::Matrix<double, 6, 1> y0;
    y0 << start.x, start.y, start.t, velocity.x() / vnorm, velocity.y() / vnorm,
        velocity.z() / vnorm;

    OdeOptions opt;
    opt.tol = std::clamp(tol * 1e-3, 1e-14, tol);
    opt.max_step = 0.05;
    detail::GeodesicRhs rhs{kappa, &warp, chart};
    DormandPrince<6, detail::GeodesicRhs> stepper(rhs, 0.0, y0, opt);

    GeodesicResult result;
    auto record = [&](double s, const Eigen::Matrix<double, 6, 1>& y) {
        GeodesicState st;
        st.s = s;
        st.p = {y[0], y[1], y[2]};
        st.a = {y[3], y[4], y[5]};
        st.nu = y[5];
        result.samples.push_back(st);
        result.max_unit_norm_residual =
            std::max(result.max_unit_norm_residual, std::abs(st.a.norm() - 1.0));
    };

    std::vector<double> grid;
    if (n_samples > 0) {
        grid.reserve(static_cast<std::size_t>(n_samples));
        for (int i = 1; i <= n_samples; ++i) grid.push_back(s_end * i / n_samples);
    }
    std::size_t grid_next = 0;
    const double snap = 1e-12 * std::max(1.0, s_end);
    record(0.0, y0);

    // Stop thresholds: warp-domain ends in t, disk boundary for kappa=-1
    // standard chart, y -> 0 for the half-plane, coordinate blow-up for the
    // kappa=+1 stereographic chart.
    const double warp_lo = std::isfinite(warp.domain.lo)
                               ? warp.domain.lo + 1e-9 * std::max(1.0, std::abs(warp.domain.lo))
                               : -kInf;
    const double warp_hi = std::isfinite(warp.domain.hi)
                               ? warp.domain.hi - 1e-9 * std::max(1.0, std::abs(warp.domain.hi))
                               : kInf;

    auto chart_violation = [&](const Eigen::Matrix<double, 6, 1>& y) {
        if (chart == Chart::half_plane) return y[1] < kAxisThreshold;
        if (kappa == -1) return y[0] * y[0] + y[1] * y[1] > 1.0 - 1e-9;
        if (kappa == 1) return std::abs(y[0]) > 1e6 || std::abs(y[1]) > 1e6;
        return false;
    };

    while (stepper.s() < s_end - snap) {
        while (grid_next < grid.size() && grid[grid_next] <= stepper.s() + snap) {
            record(grid[grid_next], stepper.y());
            ++grid_next;
        }
        if (stepper.s() >= s_end - snap) break;
        const double s_limit = grid_next < grid.size() ? std::min(grid[grid_next], s_end) : s_end;
        std::optional<OdeStepRecord<6>> rec = stepper.step(s_limit);
        if (!rec) {
            result.termination = Termination::step_underflow;
            result.s_final = stepper.s();
            return result;
        }
        if (rec->y1[2] < warp_lo || rec->y1[2] > warp_hi) {
            record(rec->s1, rec->y1);
            result.termination = Termination::warp_boundary;
            result.s_final = rec->s1;
            return result;
        }
        if (chart_violation(rec->y1)) {
            record(rec->s1, rec->y1);
            result.termination = Termination::chart_boundary;
            result.s_final = rec->s1;
            return result;
        }
        if (n_samples == 0) record(rec->s1, rec->y1);
        while (grid_next < grid.size() && grid[grid_next] <= rec->s1 + snap) {
            record(grid[grid_next], stepper.y());
            ++grid_next;
        }
    }
    while (grid_next < grid.size() && grid[grid_next] <= stepper.s() + snap) {
        record(grid[grid_next], stepper.y());
        ++grid_next;
    }
    if (n_samples == 0 && result.samples.back().s < stepper.s() - snap)
        record(stepper.s(), stepper.y());
    result.termination = Termination::reached_end;
    result.s_final = stepper.s();
    return result;
}

}  // namespace umbilic
