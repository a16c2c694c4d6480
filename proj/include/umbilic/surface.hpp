#pragma once

// Surface evaluation: analytic principal curvatures of invariant surfaces
// and vertical cylinders, mesh generation, a fully finite-difference shape
// operator as an independent route, and residuals of the structural
// equations (xi-splitting, tangent transport, angle/shape coupling, Gauss,
// Codazzi, and the gradient law of the umbilical function).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "umbilic/core.hpp"
#include "umbilic/geometry.hpp"
#include "umbilic/profile.hpp"
#include "umbilic/warp.hpp"

namespace umbilic {

inline constexpr double kUmbilicRelTol = 1e-6;

struct CurvatureSample {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double H = 0.0;   // (kappa1 + kappa2)/2
    double Ke = 0.0;  // kappa1 * kappa2
    double Ki = 0.0;  // intrinsic curvature
    double nu = 0.0;  // vertical component of the unit normal
    bool is_umbilic = false;
    double varrho = kNaN;  // defined (= kappa1) only when umbilic
};

inline CurvatureSample make_curvature_sample(double kappa1, double kappa2, double Ki, double nu) {
    CurvatureSample cs;
    cs.kappa1 = kappa1;
    cs.kappa2 = kappa2;
    cs.H = 0.5 * (kappa1 + kappa2);
    cs.Ke = kappa1 * kappa2;
    cs.Ki = Ki;
    cs.nu = nu;
    cs.is_umbilic = std::abs(kappa1 - kappa2) <= kUmbilicRelTol * std::max(1.0, std::abs(kappa1));
    cs.varrho = cs.is_umbilic ? kappa1 : kNaN;
    return cs;
}

// --------------------------------------------------------------------------
// Analytic curvatures along profile curves.

// Unit-speed norm D and the vertical normal component b = e^f mu rho_s; the
// profile-plane normal is N = -t_s e_profile + b xi, so nu = b/D.
namespace detail {

struct ProfileGeometry {
    double ef, fp;       // e^{f(t)}, f'(t)
    double mu;           // profile conformal factor
    double D;            // speed (1 for arclength states)
    double b;            // e^f mu rho_s
};

inline ProfileGeometry profile_geometry(const InvariantSurfaceSpec& spec, double rho, double t,
                                        double rho_s, double t_s) {
    validate_rho_chart(spec, rho);
    const WarpSample ws = spec.warp.eval(t);
    ProfileGeometry pg;
    pg.ef = std::exp(ws.f);
    pg.fp = ws.df;
    pg.mu = profile_mu(spec.cls, rho);
    pg.b = pg.ef * pg.mu * rho_s;
    pg.D = std::sqrt(pg.b * pg.b + t_s * t_s);
    return pg;
}

}  // namespace detail

// Principal curvatures (kappa1 along the profile, kappa2 along the orbit)
// with the orientation in which a horizontal slice has kappa1=kappa2=-f'.
inline std::pair<double, double> invariant_surface_curvatures(const InvariantSurfaceSpec& spec,
                                                              double rho, double t, double rho_s,
                                                              double t_s, double rho_ss,
                                                              double t_ss) {
    const detail::ProfileGeometry pg = detail::profile_geometry(spec, rho, t, rho_s, t_s);
    if (!(pg.D > 0.0)) throw ValidationError("invariant_surface_curvatures: zero-speed state");
    const double ef = pg.ef, fp = pg.fp, mu = pg.mu, D = pg.D;
    const double D3 = D * D * D;

    if (spec.cls == IsometryClass::rotational) {
        if (rho < kAxisThreshold)
            throw ValidationError("curvature formulas singular at the rotation axis");
        // c_kappa(rho) = coth rho | 1/rho | cot rho.
        double ck;
        if (spec.kappa == 1) ck = std::cos(rho) / std::sin(rho);
        else if (spec.kappa == -1) ck = std::cosh(rho) / std::sinh(rho);
        else ck = 1.0 / rho;
        const double k1 = ef *
                          (t_ss * rho_s - 2.0 * fp * t_s * t_s * rho_s -
                           ef * ef * fp * rho_s * rho_s * rho_s - t_s * rho_ss) /
                          D3;
        const double k2 = (-ef * fp * rho_s + t_s * ck / ef) / D;
        return {k1, k2};
    }

    // Translation classes. h(rho) is the geodesic curvature factor of the
    // orbit direction: 0 | 1/rho | cot rho.
    double h = 0.0;
    if (spec.cls == IsometryClass::parabolic_translation) h = 1.0 / rho;
    if (spec.cls == IsometryClass::hyperbolic_translation) {
        const double sr = std::sin(rho);
        if (std::abs(sr) < kAxisThreshold)
            throw ValidationError("curvature formulas singular at sin(rho)=0");
        h = std::cos(rho) / sr;
    }
    const double k1 = ef * mu *
                      (t_ss * rho_s - t_s * rho_ss - 2.0 * fp * t_s * t_s * rho_s -
                       ef * ef * fp * mu * mu * rho_s * rho_s * rho_s +
                       t_s * rho_s * rho_s * h) /
                      D3;
    double k2 = 0.0;
    switch (spec.cls) {
        case IsometryClass::euclidean_translation:
            k2 = -ef * fp * rho_s / D;
            break;
        case IsometryClass::parabolic_translation:
            k2 = -(t_s / ef + ef * fp * rho_s / rho) / D;
            break;
        case IsometryClass::hyperbolic_translation:
            k2 = -(t_s * std::cos(rho) / ef + ef * fp * rho_s / std::sin(rho)) / D;
            break;
        default:
            break;
    }
    return {k1, k2};
}

inline std::pair<double, double> invariant_surface_curvatures(const InvariantSurfaceSpec& spec,
                                                              const ProfileNode& n) {
    return invariant_surface_curvatures(spec, n.rho, n.t, n.rho_s, n.t_s, n.rho_ss, n.t_ss);
}

// Intrinsic curvature from the Gauss relation shared by all these surfaces:
// Ki = det S - (f'^2 - kappa e^{-2f}) - (f'' + kappa e^{-2f}) |T|^2.
inline double intrinsic_from_gauss(int kappa, const WarpingFunction& warp, double t,
                                   double detS, double T_norm2) {
    const WarpSample ws = warp.eval(t);
    const double em2f = std::exp(-2.0 * ws.f);
    return detS - (ws.df * ws.df - kappa * em2f) - (ws.ddf + kappa * em2f) * T_norm2;
}

// Full curvature sample at a profile node.
inline CurvatureSample invariant_curvature_sample(const InvariantSurfaceSpec& spec,
                                                  const ProfileNode& n) {
    const auto [k1, k2] = invariant_surface_curvatures(spec, n);
    const detail::ProfileGeometry pg =
        detail::profile_geometry(spec, n.rho, n.t, n.rho_s, n.t_s);
    const double nu = pg.b / pg.D;
    const double Ki =
        intrinsic_from_gauss(spec.kappa, spec.warp, n.t, k1 * k2, 1.0 - nu * nu);
    return make_curvature_sample(k1, k2, Ki, nu);
}

// Vertical cylinder over a base curve of geodesic curvature kappa_g2 in the
// fiber: kappa1 = -e^{-f} kappa_g2 (along the base), kappa2 = 0 (vertical
// rulings), Ki = -(f')^2 - f''.
inline CurvatureSample cylinder_curvatures(double kappa_g2, const WarpingFunction& warp,
                                           double t) {
    const WarpSample ws = warp.eval(t);
    const double k1 = -std::exp(-ws.f) * kappa_g2;
    return make_curvature_sample(k1, 0.0, -ws.df * ws.df - ws.ddf, 0.0);
}

// --------------------------------------------------------------------------
// Mesh generation.

struct MeshVertex {
    AmbientPoint p;
    FrameVector normal = FrameVector::Zero();  // frame components, unit
    CurvatureSample curv;
};

struct SurfaceMesh {
    IsometryClass cls = IsometryClass::rotational;
    int kappa = 0;
    Chart chart = Chart::standard;
    std::vector<double> s_values;
    std::vector<double> omega_values;
    bool omega_closed = false;  // full rotational turn: last column adjoins first
    std::vector<MeshVertex> vertices;  // row-major: index = i_s * n_omega + j_omega

    const MeshVertex& at(std::size_t i, std::size_t j) const {
        return vertices[i * omega_values.size() + j];
    }
};

// Chart radius of the rotational orbit through profile coordinate rho.
inline double rotational_chart_radius(int kappa, double rho) {
    if (kappa == 1) return std::tan(0.5 * rho);
    if (kappa == -1) return std::tanh(0.5 * rho);
    return rho;
}

// Ambient position of the invariant-surface point at profile state (rho, t)
// and group parameter omega.
inline AmbientPoint invariant_surface_point(const InvariantSurfaceSpec& spec, double rho,
                                            double t, double omega) {
    switch (spec.cls) {
        case IsometryClass::rotational: {
            const double r = rotational_chart_radius(spec.kappa, rho);
            return {r * std::cos(omega), r * std::sin(omega), t};
        }
        case IsometryClass::euclidean_translation:
            return {rho, omega, t};
        case IsometryClass::parabolic_translation:
            return {omega, rho, t};
        case IsometryClass::hyperbolic_translation:
            return {omega * std::cos(rho), omega * std::sin(rho), t};
    }
    throw ValidationError("invariant_surface_point: unknown class");
}

// Chart in which the class's mesh lives.
inline Chart invariant_surface_chart(IsometryClass cls) {
    return (cls == IsometryClass::parabolic_translation ||
            cls == IsometryClass::hyperbolic_translation)
               ? Chart::half_plane
               : Chart::standard;
}

// Unit normal (frame components) at profile state and group parameter.
inline FrameVector invariant_surface_normal(const InvariantSurfaceSpec& spec, double rho,
                                            double t, double rho_s, double t_s, double omega) {
    const detail::ProfileGeometry pg = detail::profile_geometry(spec, rho, t, rho_s, t_s);
    const double b = pg.b / pg.D, ts = t_s / pg.D;
    switch (spec.cls) {
        case IsometryClass::rotational:
            return {-ts * std::cos(omega), -ts * std::sin(omega), b};
        case IsometryClass::euclidean_translation:
            return {-ts, 0.0, b};
        case IsometryClass::parabolic_translation:
            return {0.0, -ts, b};
        case IsometryClass::hyperbolic_translation:
            return {ts * std::sin(rho), -ts * std::cos(rho), b};
    }
    throw ValidationError("invariant_surface_normal: unknown class");
}

// Parametric sampler (s, omega) -> AmbientPoint backed by the dense
// integration result.
inline std::function<AmbientPoint(double, double)> mesh_sampler(const InvariantSurfaceSpec& spec,
                                                                const IntegrationResult& curve) {
    return [spec, &curve](double s, double omega) {
        const ProfileState st = curve.state_at(s);
        return invariant_surface_point(spec, st.rho, st.t, omega);
    };
}

inline SurfaceMesh generate_mesh(const InvariantSurfaceSpec& spec, const IntegrationResult& curve,
                                 double omega_lo, double omega_hi, int omega_steps) {
    validate_invariant_spec(spec);
    if (curve.samples.empty()) throw ValidationError("generate_mesh: empty profile curve");
    if (omega_steps < 2) throw ValidationError("generate_mesh: omega_steps must be >= 2");
    if (!(omega_hi > omega_lo)) throw ValidationError("generate_mesh: empty omega range");
    if (spec.cls == IsometryClass::hyperbolic_translation && !(omega_lo > 0.0))
        throw ValidationError("generate_mesh: hyperbolic orbits require omega > 0");

    SurfaceMesh mesh;
    mesh.cls = spec.cls;
    mesh.kappa = spec.kappa;
    mesh.chart = invariant_surface_chart(spec.cls);
    mesh.omega_closed = spec.cls == IsometryClass::rotational &&
                        std::abs((omega_hi - omega_lo) - 2.0 * kPi) < 1e-12;
    mesh.omega_values.reserve(static_cast<std::size_t>(omega_steps));
    for (int j = 0; j < omega_steps; ++j) {
        const double denom = mesh.omega_closed ? omega_steps : omega_steps - 1;
        mesh.omega_values.push_back(omega_lo + (omega_hi - omega_lo) * j / denom);
    }
    mesh.s_values.reserve(curve.samples.size());
    for (const ProfileState& st : curve.samples) mesh.s_values.push_back(st.s);

    mesh.vertices.reserve(curve.samples.size() * mesh.omega_values.size());
    for (const ProfileState& st : curve.samples) {
        // Second derivatives for the curvature formulas.
        Eigen::Matrix<double, 4, 1> y;
        y << st.rho, st.t, st.rho_s, st.t_s;
        const ProfileNode node = detail::make_profile_node(spec, st.s, y);
        const CurvatureSample cs = invariant_curvature_sample(spec, node);
        for (double omega : mesh.omega_values) {
            MeshVertex v;
            v.p = invariant_surface_point(spec, st.rho, st.t, omega);
            v.normal = invariant_surface_normal(spec, st.rho, st.t, st.rho_s, st.t_s, omega);
            v.curv = cs;
            mesh.vertices.push_back(v);
        }
    }
    return mesh;
}

// --------------------------------------------------------------------------
// Finite-difference shape operator.

struct SurfaceFrameSample {
    AmbientPoint p;
    CoordVector Xs = CoordVector::Zero();  // d psi / d s   (coordinates)
    CoordVector Xw = CoordVector::Zero();  // d psi / d omega
    FrameVector N = FrameVector::Zero();   // unit normal, frame components
    Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
    Eigen::Vector2d T = Eigen::Vector2d::Zero();  // tangential part of xi
    double nu = 0.0;
};

using SurfaceSampler = std::function<AmbientPoint(double, double)>;

namespace detail {

inline CoordVector coord_delta(const AmbientPoint& a, const AmbientPoint& b, double inv2h) {
    return {(a.x - b.x) * inv2h, (a.y - b.y) * inv2h, (a.t - b.t) * inv2h};
}

// Tangents and unit normal at (s, w) by central differences of the sampler.
struct TangentData {
    AmbientPoint p;
    CoordVector Xs, Xw;
    FrameVector Xs_f, Xw_f, N;
};

inline TangentData tangent_data(const SurfaceSampler& psi, int kappa,
                                const WarpingFunction& warp, Chart chart, double s, double w,
                                double h) {
    TangentData td;
    td.p = psi(s, w);
    const double inv2h = 0.5 / h;
    td.Xs = coord_delta(psi(s + h, w), psi(s - h, w), inv2h);
    td.Xw = coord_delta(psi(s, w + h), psi(s, w - h), inv2h);
    td.Xs_f = coord_to_frame(kappa, warp, td.p, td.Xs, chart);
    td.Xw_f = coord_to_frame(kappa, warp, td.p, td.Xw, chart);
    // The frame is orthonormal, so the metric cross product is the Euclidean
    // one on frame components.
    FrameVector n = td.Xs_f.cross(td.Xw_f);
    const double nn = n.norm();
    if (nn < 1e-14) throw NumericError("numeric_shape_operator: degenerate tangent basis");
    td.N = n / nn;
    return td;
}

}  // namespace detail

// Shape operator, metric, and xi-splitting at one parameter point, computed
// entirely by finite differences of the immersion.
inline SurfaceFrameSample numeric_shape_operator(const SurfaceSampler& psi, int kappa,
                                                 const WarpingFunction& warp, double s, double w,
                                                 double h, Chart chart = Chart::standard) {
    if (!(h > 0.0)) throw ValidationError("numeric_shape_operator: h must be positive");
    const detail::TangentData c = detail::tangent_data(psi, kappa, warp, chart, s, w, h);

    SurfaceFrameSample out;
    out.p = c.p;
    out.Xs = c.Xs;
    out.Xw = c.Xw;
    out.N = c.N;
    out.g(0, 0) = c.Xs_f.dot(c.Xs_f);
    out.g(0, 1) = out.g(1, 0) = c.Xs_f.dot(c.Xw_f);
    out.g(1, 1) = c.Xw_f.dot(c.Xw_f);
    const double detg = out.g.determinant();
    if (!(detg > 1e-12 * std::max(1.0, out.g(0, 0) * out.g(1, 1))))
        throw NumericError("numeric_shape_operator: near-singular induced metric");

    // Normal field on the four-point stencil, then dN/ds, dN/dw of the frame
    // components plus the connection correction.
    const FrameVector Nsp = detail::tangent_data(psi, kappa, warp, chart, s + h, w, h).N;
    const FrameVector Nsm = detail::tangent_data(psi, kappa, warp, chart, s - h, w, h).N;
    const FrameVector Nwp = detail::tangent_data(psi, kappa, warp, chart, s, w + h, h).N;
    const FrameVector Nwm = detail::tangent_data(psi, kappa, warp, chart, s, w - h, h).N;
    const FrameVector dN_ds = (Nsp - Nsm) / (2.0 * h);
    const FrameVector dN_dw = (Nwp - Nwm) / (2.0 * h);

    const FrameVector covN_s =
        dN_ds + connection_in_direction(kappa, warp, c.p, c.Xs_f, c.N, chart);
    const FrameVector covN_w =
        dN_dw + connection_in_direction(kappa, warp, c.p, c.Xw_f, c.N, chart);

    // II(a,b) = -g(cov_a N, X_b); symmetrized against finite-difference noise.
    Eigen::Matrix2d II;
    II(0, 0) = -covN_s.dot(c.Xs_f);
    II(0, 1) = -covN_s.dot(c.Xw_f);
    II(1, 0) = -covN_w.dot(c.Xs_f);
    II(1, 1) = -covN_w.dot(c.Xw_f);
    II = 0.5 * (II + II.transpose()).eval();
    out.S = out.g.inverse() * II;

    // xi = T + nu N: T components in the tangent basis, nu from the normal.
    const Eigen::Vector2d xi_proj{c.Xs_f.z(), c.Xw_f.z()};  // g(xi, X_a)
    out.T = out.g.inverse() * xi_proj;
    out.nu = c.N.z();
    return out;
}

// --------------------------------------------------------------------------
// Umbilicity reports.

struct UmbilicityReport {
    double analytic_max = 0.0;  // max |kappa1 - kappa2| over curve samples
    double numeric_max = 0.0;   // max Frobenius norm of S - (trS/2) I
};

inline UmbilicityReport umbilicity_residual(const InvariantSurfaceSpec& spec,
                                            const IntegrationResult& curve, double omega_probe,
                                            double h, int n_probe = 7) {
    UmbilicityReport rep;
    for (const ProfileState& st : curve.samples) {
        Eigen::Matrix<double, 4, 1> y;
        y << st.rho, st.t, st.rho_s, st.t_s;
        const ProfileNode node = detail::make_profile_node(spec, st.s, y);
        const auto [k1, k2] = invariant_surface_curvatures(spec, node);
        rep.analytic_max = std::max(rep.analytic_max, std::abs(k1 - k2));
    }
    const Chart chart = invariant_surface_chart(spec.cls);
    const SurfaceSampler psi = mesh_sampler(spec, curve);
    const double s_lo = curve.nodes.front().s, s_hi = curve.nodes.back().s;
    const double pad = std::max(4.0 * h, 1e-3 * (s_hi - s_lo));
    for (int i = 0; i < n_probe; ++i) {
        const double s = (s_lo + pad) + (s_hi - s_lo - 2.0 * pad) * i / std::max(1, n_probe - 1);
        const SurfaceFrameSample fs =
            numeric_shape_operator(psi, spec.kappa, spec.warp, s, omega_probe, h, chart);
        const Eigen::Matrix2d dev =
            fs.S - 0.5 * fs.S.trace() * Eigen::Matrix2d::Identity();
        rep.numeric_max = std::max(rep.numeric_max, dev.norm());
    }
    return rep;
}

// --------------------------------------------------------------------------
// Structural-equation residuals on a finite-difference sample grid.

struct FrameGrid {
    std::vector<double> s_values;
    std::vector<double> w_values;
    std::vector<SurfaceFrameSample> samples;  // row-major in (s, w)
    const SurfaceFrameSample& at(std::size_t i, std::size_t j) const {
        return samples[i * w_values.size() + j];
    }
};

inline FrameGrid build_frame_grid(const SurfaceSampler& psi, int kappa,
                                  const WarpingFunction& warp, Chart chart,
                                  const std::vector<double>& s_values,
                                  const std::vector<double>& w_values, double h) {
    if (s_values.size() < 3 || w_values.size() < 3)
        throw ValidationError("build_frame_grid: need at least a 3x3 grid");
    FrameGrid grid;
    grid.s_values = s_values;
    grid.w_values = w_values;
    grid.samples.reserve(s_values.size() * w_values.size());
    for (double s : s_values)
        for (double w : w_values)
            grid.samples.push_back(numeric_shape_operator(psi, kappa, warp, s, w, h, chart));
    return grid;
}

struct CompatibilityReport {
    double xi_split = 0.0;          // | |T|^2 + nu^2 - 1 |
    double tangent_transport = 0.0; // cov_X T - nu S X - f'(X - g(X,T) T)
    double angle_shape = 0.0;       // g(SX, T) + dnu(X) + f' nu g(X,T)
    double gauss = 0.0;             // Gauss equation with the ambient terms
    double codazzi = 0.0;           // Codazzi with the prescribed right side
    double umbilic_gradient = 0.0;  // grad(trS/2) + (f''+kappa e^{-2f}) nu T
};

namespace detail {

// Central difference with order-2 one-sided stencils at the first/last index.
template <class Get>
double grid_d1(Get&& value, std::size_t i, std::size_t n, double step) {
    if (i == 0) return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * step);
    if (i + 1 == n)
        return (3.0 * value(n - 1) - 4.0 * value(n - 2) + value(n - 3)) / (2.0 * step);
    return (value(i + 1) - value(i - 1)) / (2.0 * step);
}

}  // namespace detail

inline CompatibilityReport compatibility_residuals(const FrameGrid& grid, int kappa,
                                                   const WarpingFunction& warp) {
    const std::size_t ns = grid.s_values.size(), nw = grid.w_values.size();
    if (ns < 3 || nw < 3) throw ValidationError("compatibility_residuals: grid too small");
    const double hs = grid.s_values[1] - grid.s_values[0];
    const double hw = grid.w_values[1] - grid.w_values[0];

    CompatibilityReport rep;

    // Helper lattices of derived quantities.
    auto gval = [&](std::size_t i, std::size_t j) { return grid.at(i, j).g; };
    auto Tval = [&](std::size_t i, std::size_t j) { return grid.at(i, j).T; };
    auto Sval = [&](std::size_t i, std::size_t j) { return grid.at(i, j).S; };
    auto nuval = [&](std::size_t i, std::size_t j) { return grid.at(i, j).nu; };

    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nw; ++j) {
            const SurfaceFrameSample& c = grid.at(i, j);
            const WarpSample ws = warp.eval(c.p.t);
            const double em2f = std::exp(-2.0 * ws.f);
            const double phi = ws.ddf + kappa * em2f;

            // (1) xi decomposition: |T|^2 + nu^2 = 1.
            const double Tn2 = (c.T.transpose() * c.g * c.T)(0, 0);
            rep.xi_split = std::max(rep.xi_split, std::abs(Tn2 + c.nu * c.nu - 1.0));

            // Metric derivatives and Christoffel symbols from the grid.
            Eigen::Matrix2d dg[2];
            for (int a = 0; a < 2; ++a) {
                auto comp = [&](int r, int cidx) {
                    return detail::grid_d1(
                        [&](std::size_t k) {
                            return a == 0 ? gval(k, j)(r, cidx) : gval(i, k)(r, cidx);
                        },
                        a == 0 ? i : j, a == 0 ? ns : nw, a == 0 ? hs : hw);
                };
                dg[a] << comp(0, 0), comp(0, 1), comp(1, 0), comp(1, 1);
            }
            const Eigen::Matrix2d ginv = c.g.inverse();
            double Gamma[2][2][2];  // Gamma[c][a][b]
            for (int cc = 0; cc < 2; ++cc)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        double acc = 0.0;
                        for (int d = 0; d < 2; ++d)
                            acc += ginv(cc, d) *
                                   (dg[a](b, d) + dg[b](a, d) - dg[d](a, b));
                        Gamma[cc][a][b] = 0.5 * acc;
                    }

            // Parameter derivatives of T (components), S (matrix), nu, and
            // the umbilical function trS/2.
            Eigen::Vector2d dT[2];
            Eigen::Matrix2d dS[2];
            double dnu[2], dvarrho[2];
            for (int a = 0; a < 2; ++a) {
                auto d1 = [&](auto&& field) {
                    return detail::grid_d1(
                        [&](std::size_t k) { return a == 0 ? field(k, j) : field(i, k); },
                        a == 0 ? i : j, a == 0 ? ns : nw, a == 0 ? hs : hw);
                };
                dT[a][0] = d1([&](std::size_t u, std::size_t v) { return Tval(u, v)[0]; });
                dT[a][1] = d1([&](std::size_t u, std::size_t v) { return Tval(u, v)[1]; });
                for (int r = 0; r < 2; ++r)
                    for (int q = 0; q < 2; ++q)
                        dS[a](r, q) = d1(
                            [&](std::size_t u, std::size_t v) { return Sval(u, v)(r, q); });
                dnu[a] = d1([&](std::size_t u, std::size_t v) { return nuval(u, v); });
                dvarrho[a] = d1(
                    [&](std::size_t u, std::size_t v) { return 0.5 * Sval(u, v).trace(); });
            }

            // cov_a T^c = d_a T^c + Gamma^c_{a b} T^b.
            Eigen::Matrix2d covT;  // covT(a, c)
            for (int a = 0; a < 2; ++a)
                for (int cc = 0; cc < 2; ++cc) {
                    double acc = dT[a][cc];
                    for (int b = 0; b < 2; ++b) acc += Gamma[cc][a][b] * c.T[b];
                    covT(a, cc) = acc;
                }

            auto g_norm = [&](const Eigen::Vector2d& v) {
                return std::sqrt(std::max(0.0, (v.transpose() * c.g * v)(0, 0)));
            };

            // (2) tangent transport: cov_X T = nu S X + f'(X - g(X,T) T),
            // with X = the coordinate fields.
            for (int a = 0; a < 2; ++a) {
                Eigen::Vector2d X = Eigen::Vector2d::Zero();
                X[a] = 1.0;
                const Eigen::Vector2d gXT_T = (c.g * c.T)[a] * c.T;
                const Eigen::Vector2d res = covT.row(a).transpose() -
                                            c.nu * c.S * X - ws.df * (X - gXT_T);
                rep.tangent_transport = std::max(rep.tangent_transport, g_norm(res));
            }

            // (3) angle/shape coupling: g(SX, T) + dnu(X) + f' nu g(X, T) = 0.
            for (int a = 0; a < 2; ++a) {
                Eigen::Vector2d X = Eigen::Vector2d::Zero();
                X[a] = 1.0;
                const double gSXT = (c.S * X).transpose() * c.g * c.T;
                const double gXT = (c.g * c.T)[a];
                rep.angle_shape =
                    std::max(rep.angle_shape, std::abs(gSXT + dnu[a] + ws.df * c.nu * gXT));
            }

            // (4) Gauss equation via the Brioschi intrinsic curvature.
            if (i > 0 && i + 1 < ns && j > 0 && j + 1 < nw) {
                auto E = [&](std::size_t u, std::size_t v) { return gval(u, v)(0, 0); };
                auto F = [&](std::size_t u, std::size_t v) { return gval(u, v)(0, 1); };
                auto G = [&](std::size_t u, std::size_t v) { return gval(u, v)(1, 1); };
                const double Eu = (E(i + 1, j) - E(i - 1, j)) / (2 * hs);
                const double Ev = (E(i, j + 1) - E(i, j - 1)) / (2 * hw);
                const double Gu = (G(i + 1, j) - G(i - 1, j)) / (2 * hs);
                const double Gv = (G(i, j + 1) - G(i, j - 1)) / (2 * hw);
                const double Fu = (F(i + 1, j) - F(i - 1, j)) / (2 * hs);
                const double Fv = (F(i, j + 1) - F(i, j - 1)) / (2 * hw);
                const double Evv = (E(i, j + 1) - 2 * E(i, j) + E(i, j - 1)) / (hw * hw);
                const double Guu = (G(i + 1, j) - 2 * G(i, j) + G(i - 1, j)) / (hs * hs);
                const double Fuv = (F(i + 1, j + 1) - F(i + 1, j - 1) - F(i - 1, j + 1) +
                                    F(i - 1, j - 1)) /
                                   (4 * hs * hw);
                Eigen::Matrix3d M1, M2;
                M1 << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
                      Fv - 0.5 * Gu, E(i, j), F(i, j),
                      0.5 * Gv, F(i, j), G(i, j);
                M2 << 0.0, 0.5 * Ev, 0.5 * Gu,
                      0.5 * Ev, E(i, j), F(i, j),
                      0.5 * Gu, F(i, j), G(i, j);
                const double detg = c.g.determinant();
                const double K = (M1.determinant() - M2.determinant()) / (detg * detg);

                const Eigen::Matrix2d II = c.g * c.S;
                const Eigen::Vector2d tau = c.g * c.T;  // tau_a = g(d_a, T)
                const double bracket = c.g(0, 0) * tau[1] * tau[1] -
                                       2.0 * c.g(0, 1) * tau[0] * tau[1] +
                                       c.g(1, 1) * tau[0] * tau[0];
                const double lhs = -(ws.df * ws.df - kappa * em2f) * detg - phi * bracket;
                const double rhs = K * detg - II.determinant();
                rep.gauss = std::max(rep.gauss, std::abs(lhs - rhs) / std::max(1.0, detg));
            }

            // (5) Codazzi: cov_s (S d_w) - cov_w (S d_s) =
            //     -nu phi [g(d_s,T) d_w - g(d_w,T) d_s].
            {
                // cov_a (S X_b)^c = d_a S^c_b + Gamma^c_{a d} S^d_b
                //                   - S^c_d Gamma^d_{a b}.
                auto covS = [&](int a, int b) {
                    Eigen::Vector2d out;
                    for (int cc = 0; cc < 2; ++cc) {
                        double acc = dS[a](cc, b);
                        for (int d = 0; d < 2; ++d)
                            acc += Gamma[cc][a][d] * c.S(d, b) - c.S(cc, d) * Gamma[d][a][b];
                        out[cc] = acc;
                    }
                    return out;
                };
                const Eigen::Vector2d tau = c.g * c.T;
                Eigen::Vector2d expect;
                expect[0] = -c.nu * phi * (-tau[1]);  // coefficient of d_s
                expect[1] = -c.nu * phi * (tau[0]);   // coefficient of d_w
                const Eigen::Vector2d lhs = covS(0, 1) - covS(1, 0);
                const Eigen::Vector2d res{lhs[0] - expect[0], lhs[1] - expect[1]};
                rep.codazzi = std::max(rep.codazzi, g_norm(res));
            }

            // (6) gradient of the umbilical function:
            //     grad(trS/2) + phi nu T = 0 (surface-metric gradient).
            {
                const Eigen::Vector2d dver{dvarrho[0], dvarrho[1]};
                const Eigen::Vector2d grad = ginv * dver;
                const Eigen::Vector2d res = grad + phi * c.nu * c.T;
                rep.umbilic_gradient = std::max(rep.umbilic_gradient, g_norm(res));
            }
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// Curvature-line check along group orbits.

struct CurvatureLineReport {
    double max_angle = 0.0;  // radians, between S T and T
    int checked = 0;
    int skipped = 0;  // |T| below threshold (slices)
};

inline CurvatureLineReport curvature_line_check(const InvariantSurfaceSpec& spec,
                                                const IntegrationResult& curve,
                                                const std::vector<double>& omegas, double h) {
    CurvatureLineReport rep;
    const Chart chart = invariant_surface_chart(spec.cls);
    const SurfaceSampler psi = mesh_sampler(spec, curve);
    const double s_lo = curve.nodes.front().s, s_hi = curve.nodes.back().s;
    const double pad = std::max(4.0 * h, 1e-3 * (s_hi - s_lo));
    for (int i = 0; i < 5; ++i) {
        const double s = (s_lo + pad) + (s_hi - s_lo - 2.0 * pad) * i / 4.0;
        for (double w : omegas) {
            const SurfaceFrameSample fs =
                numeric_shape_operator(psi, spec.kappa, spec.warp, s, w, h, chart);
            const double Tn = std::sqrt(
                std::max(0.0, (fs.T.transpose() * fs.g * fs.T)(0, 0)));
            if (Tn < 1e-8) {
                ++rep.skipped;
                continue;
            }
            const Eigen::Vector2d ST = fs.S * fs.T;
            const double STn = std::sqrt(std::max(0.0, (ST.transpose() * fs.g * ST)(0, 0)));
            ++rep.checked;
            if (STn < 1e-12) continue;  // T in the kernel: still an eigenvector
            const double cosang =
                std::clamp(std::abs((ST.transpose() * fs.g * fs.T)(0, 0)) / (STn * Tn), 0.0, 1.0);
            rep.max_angle = std::max(rep.max_angle, std::acos(cosang));
        }
    }
    return rep;
}

}  // namespace umbilic
