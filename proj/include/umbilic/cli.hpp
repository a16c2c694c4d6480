#pragma once

// Command-line front end: generate | verify | mesh | geodesic | sweep |
// cylinder.  Exit codes: 0 success, 2 validation error, 3 numerical failure.
// Every subcommand accepts --config FILE with a flat JSON object mirroring
// the flags; explicit flags override file values; unknown keys are errors.

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "umbilic/core.hpp"
#include "umbilic/geometry.hpp"
#include "umbilic/io.hpp"
#include "umbilic/profile.hpp"
#include "umbilic/report.hpp"
#include "umbilic/surface.hpp"
#include "umbilic/warp.hpp"

namespace umbilic {

namespace detail {

// ---- JSON config files -----------------------------------------------------
//
// Each subcommand accepts --config FILE with a flat JSON object whose keys
// are the long flag names.  CLI11 only processes config files attached to
// the top-level application, so the file is merged here before parsing:
// every key becomes an injected flag unless the same flag was given
// explicitly (explicit flags override the file).  Unknown keys are errors.

inline void attach_config(CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--config", [](const std::string&) {},
        "JSON file mirroring the flags; flags override it");
}

inline void merge_config_args(CLI::App& app, std::vector<std::string>& args) {
    if (args.empty()) return;
    CLI::App* sub = app.get_subcommand_no_throw(args.front());
    if (sub == nullptr) return;  // let the parser report the unknown command

    std::string path;
    std::vector<std::string> cleaned;
    cleaned.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ValidationError("--config requires a file path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            cleaned.push_back(args[i]);
        }
    }
    if (path.empty()) return;
    args = std::move(cleaned);

    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config file: top level must be a JSON object");

    auto given_explicitly = [&args](const std::string& flag) {
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const nlohmann::json& v = it.value();
        if (key == "command") {  // optional redundancy check in run manifests
            if (!v.is_string() || v.get<std::string>() != sub->get_name())
                throw ValidationError("config file: command " + v.dump() +
                                      " does not match '" + sub->get_name() + "'");
            continue;
        }
        if (key == "config")
            throw ValidationError("config file: 'config' cannot be set from a config file");
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr)
            throw ValidationError("config file: unknown key '" + key + "'");
        if (given_explicitly(flag)) continue;
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back(flag);
        } else if (v.is_string()) {
            args.push_back(flag);
            args.push_back(v.get<std::string>());
        } else if (v.is_number_integer()) {
            args.push_back(flag);
            args.push_back(std::to_string(v.get<long long>()));
        } else if (v.is_number()) {
            args.push_back(flag);
            args.push_back(format_double17(v.get<double>()));
        } else {
            throw ValidationError("config file: key '" + key +
                                  "' must be a number, string, or boolean");
        }
    }
}

// ---- flag parsing helpers -------------------------------------------------

inline std::vector<double> parse_number_list(const std::string& text, const std::string& what,
                                             std::size_t expected) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string field =
            text.substr(start, comma == std::string::npos ? comma : comma - start);
        const char* b = field.c_str();
        char* e = nullptr;
        const double v = std::strtod(b, &e);
        if (e == b || *e != '\0')
            throw ValidationError(what + ": '" + field + "' is not a number");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != expected)
        throw ValidationError(what + ": expected " + std::to_string(expected) +
                              " comma-separated parameters, got " + std::to_string(out.size()));
    return out;
}

}  // namespace detail

inline IsometryClass isometry_class_from_name(const std::string& name) {
    if (name == "rotational") return IsometryClass::rotational;
    if (name == "euclidean") return IsometryClass::euclidean_translation;
    if (name == "parabolic") return IsometryClass::parabolic_translation;
    if (name == "hyperbolic") return IsometryClass::hyperbolic_translation;
    throw ValidationError("unknown class '" + name +
                          "' (expected rotational, euclidean, parabolic, or hyperbolic)");
}

// Resolve a --warp value: either "name" / "name:p1,p2,..." from the catalog
// below, or an expression in t.
//   constant:c | linear:a,b | log-inv-sin | cos-over-sqrt-sin |
//   ln-abs-cot[:lo,hi] | exp-pair:A,B,c0 | exp-pair-first:c0,c,kappa |
//   exp-pair-second:c0,c,kappa
inline WarpingFunction resolve_warp(const std::string& text, double t_lo = -kInf,
                                    double t_hi = kInf) {
    const Interval dom{t_lo, t_hi};
    std::string head = text, args;
    if (const std::size_t colon = text.find(':'); colon != std::string::npos) {
        head = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    const bool has_args = head.size() != text.size();
    auto params = [&](std::size_t n) {
        return detail::parse_number_list(args, "--warp " + head, n);
    };
    if (head == "constant") {
        const auto p = params(1);
        return warp_constant(p[0]);
    }
    if (head == "linear") {
        const auto p = params(2);
        return warp_linear(p[0], p[1]);
    }
    if (head == "log-inv-sin" && !has_args) return warp_log_inv_sin();
    if (head == "cos-over-sqrt-sin" && !has_args) return warp_cos_over_sqrt_sin();
    if (head == "ln-abs-cot") {
        if (!has_args) return warp_ln_abs_cot();
        const auto p = params(2);
        return warp_ln_abs_cot(p[0], p[1]);
    }
    if (head == "exp-pair") {
        const auto p = params(3);
        return warp_ln_exp_pair(p[0], p[1], p[2], dom);
    }
    if (head == "exp-pair-first" || head == "exp-pair-second") {
        const auto p = params(3);
        const int kappa = static_cast<int>(std::llround(p[2]));
        validate_kappa(kappa);
        return head == "exp-pair-first" ? warp_ln_F1(p[0], p[1], kappa, dom)
                                        : warp_ln_F2(p[0], p[1], kappa, dom);
    }
    return warp_from_expression(text, dom);
}

namespace detail {

// Shared flags of the commands that build an invariant surface.
struct SurfaceCliOptions {
    int kappa = 0;
    std::string cls = "rotational";
    std::string warp;
    double c0 = 1.0;
    double rho0 = 1.0;
    double t0 = 0.0;
    int branch = 1;
    double s0 = 0.0;
    double s_end = 1.0;
    double tol = 1e-10;
    int samples = 201;
    double t_lo = -kInf;
    double t_hi = kInf;
    bool allow_partial = false;
};

inline void add_surface_options(CLI::App* sub, SurfaceCliOptions& o, bool with_c0 = true) {
    sub->add_option("--kappa", o.kappa, "fiber curvature: -1, 0, or 1")->required();
    sub->add_option("--class", o.cls,
                    "isometry class: rotational | euclidean | parabolic | hyperbolic");
    sub->add_option("--warp", o.warp, "warp: catalog name[:params] or expression in t")
        ->required();
    if (with_c0) sub->add_option("--c0", o.c0, "first-integral constant (> 0)");
    sub->add_option("--rho0", o.rho0, "initial profile coordinate rho");
    sub->add_option("--t0", o.t0, "initial vertical coordinate t");
    sub->add_option("--branch", o.branch, "initial sign of rho_s: +1 or -1");
    sub->add_option("--s0", o.s0, "initial arclength parameter");
    sub->add_option("--s-end", o.s_end, "final arclength parameter")->required();
    sub->add_option("--tol", o.tol, "integration tolerance");
    sub->add_option("--samples", o.samples, "number of output samples");
    sub->add_option("--t-lo", o.t_lo, "lower warp domain bound (expression warps)");
    sub->add_option("--t-hi", o.t_hi, "upper warp domain bound (expression warps)");
    sub->add_flag("--allow-partial", o.allow_partial,
                  "accept early termination and keep the partial result");
    attach_config(sub);
}

inline InvariantSurfaceSpec make_surface_spec(const SurfaceCliOptions& o) {
    InvariantSurfaceSpec spec;
    spec.cls = isometry_class_from_name(o.cls);
    spec.kappa = o.kappa;
    spec.warp = resolve_warp(o.warp, o.t_lo, o.t_hi);
    spec.c0 = o.c0;
    spec.s0 = o.s0;
    spec.rho0 = o.rho0;
    spec.t0 = o.t0;
    spec.branch = o.branch;
    validate_invariant_spec(spec);
    return spec;
}

inline std::vector<double> sample_grid(const SurfaceCliOptions& o) {
    if (o.samples < 2) throw ValidationError("--samples must be at least 2");
    if (!(o.s_end > o.s0)) throw ValidationError("--s-end must exceed --s0");
    std::vector<double> grid(static_cast<std::size_t>(o.samples));
    for (int i = 0; i < o.samples; ++i)
        grid[static_cast<std::size_t>(i)] = o.s0 + (o.s_end - o.s0) * i / (o.samples - 1);
    return grid;
}

// Curvature columns for one profile state; throws where the formulas are
// singular (chart boundary rows).
inline CurveRow evaluate_curve_row(const InvariantSurfaceSpec& spec, const ProfileState& st) {
    Eigen::Matrix<double, 4, 1> y;
    y << st.rho, st.t, st.rho_s, st.t_s;
    const ProfileNode node = make_profile_node(spec, st.s, y);
    const auto [k1, k2] = invariant_surface_curvatures(spec, node);
    const ProfileGeometry pg = profile_geometry(spec, st.rho, st.t, st.rho_s, st.t_s);
    CurveRow r;
    r.s = st.s;
    r.rho = st.rho;
    r.t = st.t;
    r.rho_s = st.rho_s;
    r.t_s = st.t_s;
    r.kappa1 = k1;
    r.kappa2 = k2;
    r.nu = pg.b / pg.D;
    r.residual_unit_speed = std::abs(unit_speed_residual(spec, st));
    r.residual_umbilic = std::abs(k1 - k2);
    return r;
}

inline std::vector<CurveRow> curve_rows(const InvariantSurfaceSpec& spec,
                                        const IntegrationResult& res, std::size_t* dropped) {
    std::vector<CurveRow> rows;
    rows.reserve(res.samples.size());
    for (const ProfileState& st : res.samples) {
        try {
            rows.push_back(evaluate_curve_row(spec, st));
        } catch (const ValidationError&) {
            if (dropped) ++*dropped;  // boundary sample where curvatures blow up
        }
    }
    return rows;
}

inline void require_complete(const IntegrationResult& res, bool allow_partial) {
    if (res.termination == Termination::reached_end || allow_partial) return;
    throw NumericError(std::string("integration stopped early (") +
                       termination_name(res.termination) + ") at s=" +
                       format_double17(res.s_final));
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"invariant totally umbilical surfaces in warped products"};
    app.require_subcommand(1);

    // ---- generate ----------------------------------------------------------
    auto gen = std::make_shared<detail::SurfaceCliOptions>();
    auto gen_out = std::make_shared<std::string>();
    CLI::App* generate = app.add_subcommand("generate", "integrate a profile curve to CSV");
    detail::add_surface_options(generate, *gen);
    generate->add_option("--out", *gen_out, "output CSV path")->required();
    generate->callback([gen, gen_out] {
        const InvariantSurfaceSpec spec = detail::make_surface_spec(*gen);
        const IntegrationResult res =
            integrate_profile(spec, gen->s_end, gen->tol, detail::sample_grid(*gen));
        detail::require_complete(res, gen->allow_partial);
        std::size_t dropped = 0;
        const std::vector<CurveRow> rows = detail::curve_rows(spec, res, &dropped);
        if (rows.empty()) throw NumericError("no usable samples (all at chart boundary)");
        write_curve_csv(*gen_out, rows);
        std::cout << "generate: wrote " << rows.size() << " samples to " << *gen_out
                  << " (termination " << termination_name(res.termination);
        if (dropped > 0) std::cout << ", dropped " << dropped << " boundary rows";
        std::cout << ")\n";
    });

    // ---- verify ------------------------------------------------------------
    auto ver = std::make_shared<detail::SurfaceCliOptions>();
    auto ver_in = std::make_shared<std::string>();
    auto ver_max_umb = std::make_shared<double>(1e-6);
    auto ver_max_us = std::make_shared<double>(1e-6);
    auto ver_fd = std::make_shared<double>(1e-4);
    auto ver_known = std::make_shared<bool>(false);
    CLI::App* verify = app.add_subcommand("verify", "re-check a stored profile curve");
    verify->add_option("--input", *ver_in, "curve CSV to verify");
    verify->add_option("--kappa", ver->kappa, "fiber curvature: -1, 0, or 1");
    verify->add_option("--class", ver->cls, "isometry class");
    verify->add_option("--warp", ver->warp, "warp used to generate the curve");
    verify->add_option("--c0", ver->c0, "first-integral constant");
    verify->add_option("--t-lo", ver->t_lo, "lower warp domain bound");
    verify->add_option("--t-hi", ver->t_hi, "upper warp domain bound");
    verify->add_option("--max-umbilic", *ver_max_umb, "umbilicity residual threshold");
    verify->add_option("--max-unit-speed", *ver_max_us, "unit-speed residual threshold");
    verify->add_option("--fd-step", *ver_fd,
                       "step for the finite-difference shape-operator cross-check");
    verify->add_flag("--known-issues", *ver_known,
                     "print the numbered report of quoted-vs-shipped closed forms");
    detail::attach_config(verify);
    verify->callback([ver, ver_in, ver_max_umb, ver_max_us, ver_fd, ver_known] {
        if (*ver_known) {
            std::cout << format_discrepancy_report(discrepancy_report());
            if (ver_in->empty()) return;
        }
        if (ver_in->empty()) throw ValidationError("verify: --input is required");
        if (ver->warp.empty())
            throw ValidationError("verify: --kappa, --class, --warp, --c0 are required");
        InvariantSurfaceSpec spec;
        spec.cls = isometry_class_from_name(ver->cls);
        spec.kappa = ver->kappa;
        spec.warp = resolve_warp(ver->warp, ver->t_lo, ver->t_hi);
        spec.c0 = ver->c0;
        const std::vector<CurveRow> rows = read_curve_csv(*ver_in);
        if (rows.empty()) throw ValidationError("verify: no data rows in " + *ver_in);
        double max_us = 0.0, max_fi = 0.0, max_umb = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const CurveRow& row = rows[i];
            if (i > 0 && !(row.s > rows[i - 1].s))
                throw ValidationError("verify: s column must be strictly increasing");
            ProfileState st{row.s, row.rho, row.t, row.rho_s, row.t_s};
            const CurveRow re = detail::evaluate_curve_row(spec, st);
            max_us = std::max(max_us, re.residual_unit_speed);
            max_umb = std::max(max_umb, re.residual_umbilic);
            max_fi = std::max(max_fi,
                              std::abs(row.t_s - first_integral_target(spec, row.rho)));
        }
        // Independent finite-difference track: rebuild a dense curve from the
        // stored states and probe the numeric shape operator along it.
        double numeric_max = kNaN;
        if (rows.size() >= 2 && rows.back().s - rows.front().s > 20.0 * *ver_fd) {
            IntegrationResult curve;
            for (const CurveRow& row : rows) {
                Eigen::Matrix<double, 4, 1> y;
                y << row.rho, row.t, row.rho_s, row.t_s;
                curve.nodes.push_back(detail::make_profile_node(spec, row.s, y));
                curve.samples.push_back({row.s, row.rho, row.t, row.rho_s, row.t_s});
            }
            numeric_max = umbilicity_residual(spec, curve, 1.0, *ver_fd).numeric_max;
        }
        std::cout << "verify: rows=" << rows.size() << " max-unit-speed=" << max_us
                  << " max-first-integral=" << max_fi << " max-umbilicity=" << max_umb
                  << " max-umbilicity-numeric=";
        if (std::isnan(numeric_max))
            std::cout << "skipped";
        else
            std::cout << numeric_max;
        std::cout << "\n";
        if (max_umb > *ver_max_umb)
            throw NumericError("umbilicity residual " + format_double17(max_umb) +
                               " exceeds threshold " + format_double17(*ver_max_umb));
        if (max_us > *ver_max_us)
            throw NumericError("unit-speed residual " + format_double17(max_us) +
                               " exceeds threshold " + format_double17(*ver_max_us));
    });

    // ---- mesh ----------------------------------------------------------------
    auto msh = std::make_shared<detail::SurfaceCliOptions>();
    auto msh_out = std::make_shared<std::string>();
    auto msh_lo = std::make_shared<double>(0.0);
    auto msh_hi = std::make_shared<double>(2.0 * kPi);
    auto msh_steps = std::make_shared<int>(128);
    auto msh_format = std::make_shared<std::string>("obj");
    CLI::App* meshcmd = app.add_subcommand("mesh", "sweep a profile curve into a surface mesh");
    detail::add_surface_options(meshcmd, *msh);
    meshcmd->add_option("--out", *msh_out, "output path")->required();
    meshcmd->add_option("--omega-lo", *msh_lo, "group parameter start");
    meshcmd->add_option("--omega-hi", *msh_hi, "group parameter end");
    meshcmd->add_option("--omega-steps", *msh_steps, "group parameter steps");
    meshcmd->add_option("--format", *msh_format, "obj (mesh) or csv (profile columns)")
        ->check(CLI::IsMember({"obj", "csv"}));
    meshcmd->callback([msh, msh_out, msh_lo, msh_hi, msh_steps, msh_format] {
        const InvariantSurfaceSpec spec = detail::make_surface_spec(*msh);
        const IntegrationResult res =
            integrate_profile(spec, msh->s_end, msh->tol, detail::sample_grid(*msh));
        detail::require_complete(res, msh->allow_partial);
        if (*msh_format == "csv") {
            std::size_t dropped = 0;
            const std::vector<CurveRow> rows = detail::curve_rows(spec, res, &dropped);
            if (rows.empty()) throw NumericError("no usable samples (all at chart boundary)");
            write_curve_csv(*msh_out, rows);
            std::cout << "mesh: wrote " << rows.size() << " profile samples to " << *msh_out
                      << "\n";
            return;
        }
        const SurfaceMesh mesh = generate_mesh(spec, res, *msh_lo, *msh_hi, *msh_steps);
        write_mesh_obj(*msh_out, mesh);
        std::cout << "mesh: wrote " << mesh.s_values.size() << "x" << mesh.omega_values.size()
                  << " vertices to " << *msh_out
                  << (mesh.omega_closed ? " (closed seam)" : "") << "\n";
    });

    // ---- geodesic --------------------------------------------------------------
    struct GeoOptions {
        int kappa = 0;
        std::string warp;
        double x0 = 0.0, y0 = 0.0, t0 = 0.0;
        double a1 = 1.0, a2 = 0.0, a3 = 0.0;
        double s_end = 1.0, tol = 1e-10;
        int samples = 201;
        double t_lo = -kInf, t_hi = kInf;
        std::string chart = "standard";
        bool allow_partial = false;
    };
    auto geo = std::make_shared<GeoOptions>();
    auto geo_out = std::make_shared<std::string>();
    CLI::App* geod = app.add_subcommand("geodesic", "integrate an ambient geodesic to CSV");
    geod->add_option("--kappa", geo->kappa, "fiber curvature: -1, 0, or 1")->required();
    geod->add_option("--warp", geo->warp, "warp: catalog name[:params] or expression in t")
        ->required();
    geod->add_option("--x0", geo->x0, "initial x");
    geod->add_option("--y0", geo->y0, "initial y");
    geod->add_option("--t0", geo->t0, "initial t");
    geod->add_option("--a1", geo->a1, "initial frame velocity component 1");
    geod->add_option("--a2", geo->a2, "initial frame velocity component 2");
    geod->add_option("--a3", geo->a3, "initial frame velocity component 3");
    geod->add_option("--s-end", geo->s_end, "final arclength")->required();
    geod->add_option("--tol", geo->tol, "integration tolerance");
    geod->add_option("--samples", geo->samples, "number of output samples");
    geod->add_option("--t-lo", geo->t_lo, "lower warp domain bound");
    geod->add_option("--t-hi", geo->t_hi, "upper warp domain bound");
    geod->add_option("--chart", geo->chart, "standard or half-plane")
        ->check(CLI::IsMember({"standard", "half-plane"}));
    geod->add_flag("--allow-partial", geo->allow_partial, "accept early termination");
    geod->add_option("--out", *geo_out, "output CSV path")->required();
    detail::attach_config(geod);
    geod->callback([geo, geo_out] {
        const WarpingFunction warp = resolve_warp(geo->warp, geo->t_lo, geo->t_hi);
        const Chart chart =
            geo->chart == "half-plane" ? Chart::half_plane : Chart::standard;
        if (geo->samples < 2) throw ValidationError("--samples must be at least 2");
        // integrate_geodesic counts grid points after s=0, so request one
        // fewer to make --samples the total number of output rows.
        const GeodesicResult res = integrate_geodesic(
            geo->kappa, warp, AmbientPoint{geo->x0, geo->y0, geo->t0},
            FrameVector{geo->a1, geo->a2, geo->a3}, geo->s_end, geo->tol, geo->samples - 1,
            chart);
        if (res.termination != Termination::reached_end && !geo->allow_partial)
            throw NumericError(std::string("integration stopped early (") +
                               termination_name(res.termination) + ") at s=" +
                               format_double17(res.s_final));
        write_geodesic_csv(*geo_out, res.samples);
        std::cout << "geodesic: wrote " << res.samples.size() << " samples to " << *geo_out
                  << " (termination " << termination_name(res.termination)
                  << ", max unit-norm drift " << res.max_unit_norm_residual << ")\n";
    });

    // ---- sweep -----------------------------------------------------------------
    auto swp = std::make_shared<detail::SurfaceCliOptions>();
    auto swp_out = std::make_shared<std::string>();
    auto swp_min = std::make_shared<double>(0.5);
    auto swp_max = std::make_shared<double>(2.0);
    auto swp_count = std::make_shared<int>(4);
    CLI::App* sweep = app.add_subcommand("sweep", "run a c0 grid concurrently, merge a summary");
    detail::add_surface_options(sweep, *swp, /*with_c0=*/false);
    sweep->add_option("--c0-min", *swp_min, "first c0 value");
    sweep->add_option("--c0-max", *swp_max, "last c0 value");
    sweep->add_option("--c0-count", *swp_count, "number of c0 values");
    sweep->add_option("--out", *swp_out, "summary CSV path")->required();
    sweep->callback([swp, swp_out, swp_min, swp_max, swp_count] {
        if (*swp_count < 1) throw ValidationError("--c0-count must be at least 1");
        if (!(*swp_min > 0.0)) throw ValidationError("c0 must be positive");
        if (*swp_count > 1 && !(*swp_max >= *swp_min))
            throw ValidationError("--c0-max must be >= --c0-min");
        struct SweepRow {
            double c0 = 0.0, s_final = 0.0;
            std::string termination;
            double max_us = 0.0, max_fi = 0.0, max_umb = 0.0;
            std::string error;
        };
        std::vector<std::future<SweepRow>> futures;
        for (int i = 0; i < *swp_count; ++i) {
            const double c0 =
                *swp_count == 1 ? *swp_min
                                : *swp_min + (*swp_max - *swp_min) * i / (*swp_count - 1);
            detail::SurfaceCliOptions run = *swp;
            run.c0 = c0;
            futures.push_back(std::async(std::launch::async, [run, c0] {
                SweepRow row;
                row.c0 = c0;
                try {
                    const InvariantSurfaceSpec spec = detail::make_surface_spec(run);
                    const IntegrationResult res =
                        integrate_profile(spec, run.s_end, run.tol, detail::sample_grid(run));
                    row.s_final = res.s_final;
                    row.termination = termination_name(res.termination);
                    row.max_us = res.max_unit_speed_residual;
                    row.max_fi = res.max_first_integral_residual;
                    std::size_t dropped = 0;
                    for (const CurveRow& r : detail::curve_rows(spec, res, &dropped))
                        row.max_umb = std::max(row.max_umb, r.residual_umbilic);
                } catch (const Error& e) {
                    row.error = e.what();
                }
                return row;
            }));
        }
        std::vector<SweepRow> rows;
        rows.reserve(futures.size());
        for (auto& f : futures) rows.push_back(f.get());

        std::ofstream out = detail::open_output(*swp_out);
        out << kSweepCsvHeader << "\n";
        bool all_ok = true;
        for (const SweepRow& r : rows) {
            const std::string status = r.error.empty() ? r.termination : "error";
            out << format_double17(r.c0) << ',' << format_double17(r.s_final) << ',' << status
                << ',' << format_double17(r.max_us) << ',' << format_double17(r.max_fi) << ','
                << format_double17(r.max_umb) << "\n";
            if (!r.error.empty() || r.termination != "reached-end") all_ok = false;
        }
        if (!out) throw ValidationError("write failed for '" + *swp_out + "'");
        std::cout << "sweep: " << rows.size() << " runs merged into " << *swp_out << "\n";
        if (!all_ok && !swp->allow_partial)
            throw NumericError("one or more sweep runs did not reach s-end");
    });

    // ---- cylinder ----------------------------------------------------------------
    struct CylOptions {
        double kappa_g2 = 0.0;
        std::string warp;
        double t = 0.0;
        double t_lo = -kInf, t_hi = kInf;
    };
    auto cyl = std::make_shared<CylOptions>();
    auto cyl_out = std::make_shared<std::string>();
    CLI::App* cylinder =
        app.add_subcommand("cylinder", "curvatures of a vertical cylinder over a base curve");
    cylinder->add_option("--kappa-g2", cyl->kappa_g2, "geodesic curvature of the base curve")
        ->required();
    cylinder->add_option("--warp", cyl->warp, "warp: catalog name[:params] or expression in t")
        ->required();
    cylinder->add_option("--t", cyl->t, "height at which to evaluate")->required();
    cylinder->add_option("--t-lo", cyl->t_lo, "lower warp domain bound");
    cylinder->add_option("--t-hi", cyl->t_hi, "upper warp domain bound");
    cylinder->add_option("--out", *cyl_out, "optional one-row CSV path");
    detail::attach_config(cylinder);
    cylinder->callback([cyl, cyl_out] {
        const WarpingFunction warp = resolve_warp(cyl->warp, cyl->t_lo, cyl->t_hi);
        const CurvatureSample cs = cylinder_curvatures(cyl->kappa_g2, warp, cyl->t);
        std::cout << "cylinder: kappa1=" << format_double17(cs.kappa1)
                  << " kappa2=" << format_double17(cs.kappa2) << " H=" << format_double17(cs.H)
                  << " Ke=" << format_double17(cs.Ke) << " Ki=" << format_double17(cs.Ki)
                  << "\n";
        if (!cyl_out->empty()) {
            std::ofstream out = detail::open_output(*cyl_out);
            out << kCylinderCsvHeader << "\n"
                << format_double17(cyl->t) << ',' << format_double17(cs.kappa1) << ','
                << format_double17(cs.kappa2) << ',' << format_double17(cs.H) << ','
                << format_double17(cs.Ke) << ',' << format_double17(cs.Ki) << ','
                << format_double17(cs.nu) << "\n";
            if (!out) throw ValidationError("write failed for '" + *cyl_out + "'");
        }
    });

    try {
        detail::merge_config_args(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace umbilic
