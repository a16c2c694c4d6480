#pragma once

// Ambient geometry of the warped product M(kappa)_f x I: conformal factor,
// metric, orthonormal frame {E1, E2, E3 = xi}, connection coefficients,
// curvature operator, the conformal geodesic-curvature law, and the residual
// of the constant-umbilicity ODE.

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "umbilic/core.hpp"
#include "umbilic/warp.hpp"

namespace umbilic {

// Components in the orthonormal frame {E1, E2, E3}.
using FrameVector = Eigen::Vector3d;
// Components in the coordinate basis {d/dx, d/dy, d/dt}.
using CoordVector = Eigen::Vector3d;

struct AmbientPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

inline void validate_kappa(int kappa) {
    if (kappa != -1 && kappa != 0 && kappa != 1)
        throw ValidationError("kappa must be -1, 0 or +1 (got " + std::to_string(kappa) + ")");
}

// Fiber charts. `standard` is the plane (kappa=0), the stereographic chart
// (kappa=+1), or the Poincare disk (kappa=-1). `half_plane` is the upper
// half-plane model, available for kappa=-1 only; it is the chart in which
// horizontal and hyperbolic translations act by coordinate translations.
enum class Chart { standard, half_plane };

inline constexpr double kDiskBoundaryTol = 1e-12;

// lambda of the fiber metric lambda^2 (dx^2 + dy^2) in the standard chart.
inline double conformal_factor(int kappa, double x, double y) {
    validate_kappa(kappa);
    if (kappa == 0) return 1.0;
    const double r2 = x * x + y * y;
    if (kappa == -1) {
        if (r2 >= 1.0)
            throw ValidationError("point outside the unit disk chart (x^2+y^2 >= 1)");
        if (1.0 - r2 < kDiskBoundaryTol)
            throw ValidationError("conformal factor singular: too close to the disk boundary");
    }
    return 2.0 / (1.0 + kappa * r2);
}

struct LambdaSample {
    double lambda = 1.0;
    double dx = 0.0;  // d lambda / dx
    double dy = 0.0;  // d lambda / dy
};

inline LambdaSample chart_lambda(int kappa, Chart chart, double x, double y) {
    validate_kappa(kappa);
    if (chart == Chart::half_plane) {
        if (kappa != -1)
            throw ValidationError("half-plane chart is only defined for kappa=-1");
        if (y <= 0.0) throw ValidationError("half-plane chart requires y > 0");
        return {1.0 / y, 0.0, -1.0 / (y * y)};
    }
    const double lam = conformal_factor(kappa, x, y);
    // d/dx [2/(1+kappa r^2)] = -kappa x lam^2, and likewise in y.
    return {lam, -kappa * x * lam * lam, -kappa * y * lam * lam};
}

namespace detail {

// Everything point-dependent the frame formulas need: lambda and its
// derivatives, e^f, f', and the two connection scalars
//   c = lambda_y / (lambda^2 e^f),  d = lambda_x / (lambda^2 e^f).
struct FrameContext {
    double lambda = 1.0;
    double ef = 1.0;
    double fp = 0.0;
    double c = 0.0;
    double d = 0.0;
};

inline FrameContext frame_context(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                                  Chart chart) {
    const LambdaSample ls = chart_lambda(kappa, chart, p.x, p.y);
    const WarpSample ws = warp.eval(p.t);
    FrameContext ctx;
    ctx.lambda = ls.lambda;
    ctx.ef = std::exp(ws.f);
    ctx.fp = ws.df;
    const double denom = ls.lambda * ls.lambda * ctx.ef;
    ctx.c = ls.dy / denom;
    ctx.d = ls.dx / denom;
    return ctx;
}

}  // namespace detail

// Metric on coordinate vectors: g = e^{2f} lambda^2 (dx^2 + dy^2) + dt^2.
inline double metric_dot(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                         const CoordVector& v, const CoordVector& w,
                         Chart chart = Chart::standard) {
    const LambdaSample ls = chart_lambda(kappa, chart, p.x, p.y);
    const double ef = std::exp(warp.f_at(p.t));
    const double hf = ef * ef * ls.lambda * ls.lambda;
    return hf * (v.x() * w.x() + v.y() * w.y()) + v.z() * w.z();
}

// Coordinate components of a frame vector: E1 = dx/(lambda e^f), etc.
inline CoordVector frame_to_coord(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                                  const FrameVector& a, Chart chart = Chart::standard) {
    const LambdaSample ls = chart_lambda(kappa, chart, p.x, p.y);
    const double s = 1.0 / (ls.lambda * std::exp(warp.f_at(p.t)));
    return {a.x() * s, a.y() * s, a.z()};
}

inline FrameVector coord_to_frame(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                                  const CoordVector& v, Chart chart = Chart::standard) {
    const LambdaSample ls = chart_lambda(kappa, chart, p.x, p.y);
    const double s = ls.lambda * std::exp(warp.f_at(p.t));
    return {v.x() * s, v.y() * s, v.z()};
}

// E_ij = covariant derivative of E_j along E_i, expressed in the frame.
// Non-zero entries:
//   E11 = -c E2 - f' E3   E12 =  c E1          E21 = d E2
//   E22 = -d E1 - f' E3   E13 = f' E1          E23 = f' E2
// and every E_3j vanishes: the frame is parallel along the flow of xi, as
// antisymmetry of the connection forms requires.
inline FrameVector connection_apply(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                                    int i, int j, Chart chart = Chart::standard) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw ValidationError("frame indices must lie in {1,2,3}");
    const detail::FrameContext ctx = detail::frame_context(kappa, warp, p, chart);
    const double c = ctx.c, d = ctx.d, fp = ctx.fp;
    if (i == 1 && j == 1) return {0.0, -c, -fp};
    if (i == 1 && j == 2) return {c, 0.0, 0.0};
    if (i == 2 && j == 1) return {0.0, d, 0.0};
    if (i == 2 && j == 2) return {-d, 0.0, -fp};
    if (i == 1 && j == 3) return {fp, 0.0, 0.0};
    if (i == 2 && j == 3) return {0.0, fp, 0.0};
    return FrameVector::Zero();  // i == 3
}

// Connection term of a covariant derivative along X of a field with constant
// frame components V: sum_i X_i sum_j V_j E_ij.
inline FrameVector connection_in_direction(int kappa, const WarpingFunction& warp,
                                           const AmbientPoint& p, const FrameVector& X,
                                           const FrameVector& V,
                                           Chart chart = Chart::standard) {
    const detail::FrameContext ctx = detail::frame_context(kappa, warp, p, chart);
    const double c = ctx.c, d = ctx.d, fp = ctx.fp;
    FrameVector out = FrameVector::Zero();
    // i = 1 row.
    out += X.x() * (V.x() * FrameVector{0.0, -c, -fp} + V.y() * FrameVector{c, 0.0, 0.0} +
                    V.z() * FrameVector{fp, 0.0, 0.0});
    // i = 2 row.
    out += X.y() * (V.x() * FrameVector{0.0, d, 0.0} + V.y() * FrameVector{-d, 0.0, -fp} +
                    V.z() * FrameVector{0.0, fp, 0.0});
    // i = 3 row vanishes.
    return out;
}

// Curvature operator R(A,B)C in the frame, with the sign convention in which
// R(xi, E1) xi = -(f'' + f'^2) E1. Closed multilinear form over the
// horizontal/vertical splitting:
//   R = (kappa e^{-2f} - f'^2) [(Ah.Ch) Bh - (Bh.Ch) Ah]
//       + (f'' + f'^2) [b3 c3 Ah - a3 c3 Bh]
//       + (f'' + f'^2) [a3 (Bh.Ch) - b3 (Ah.Ch)] e3.
inline FrameVector curvature_op(int kappa, const WarpingFunction& warp, const AmbientPoint& p,
                                const FrameVector& A, const FrameVector& B,
                                const FrameVector& C) {
    validate_kappa(kappa);
    const WarpSample ws = warp.eval(p.t);
    const double em2f = std::exp(-2.0 * ws.f);
    const double horiz = kappa * em2f - ws.df * ws.df;
    const double vert = ws.ddf + ws.df * ws.df;

    const Eigen::Vector2d Ah{A.x(), A.y()}, Bh{B.x(), B.y()}, Ch{C.x(), C.y()};
    const double a3 = A.z(), b3 = B.z(), c3 = C.z();

    const Eigen::Vector2d Rh = horiz * (Ah.dot(Ch) * Bh - Bh.dot(Ch) * Ah) +
                               vert * (b3 * c3 * Ah - a3 * c3 * Bh);
    const double R3 = vert * (a3 * Bh.dot(Ch) - b3 * Ah.dot(Ch));
    return {Rh.x(), Rh.y(), R3};
}

// Geodesic curvature under a conformal change g -> e^{2 phi} g of a surface
// metric: kappa_new = e^{-phi} (kappa_sigma - dphi/dn), where dphi/dn is the
// derivative of phi along the unit normal of the curve.
inline double conformal_geodesic_curvature(double kappa_sigma, double dphi_dn, double phi) {
    return std::exp(-phi) * (kappa_sigma - dphi_dn);
}

// Residual of the ODE characterizing warps whose umbilical function is
// forced to be constant: f''(t) + kappa e^{-2 f(t)}.
inline double constant_umbilic_residual(const WarpingFunction& warp, int kappa, double t) {
    validate_kappa(kappa);
    const WarpSample ws = warp.eval(t);
    return ws.ddf + kappa * std::exp(-2.0 * ws.f);
}

}  // namespace umbilic
