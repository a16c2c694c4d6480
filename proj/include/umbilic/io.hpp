#pragma once

// File formats: curve/geodesic CSV (17-significant-digit decimals, LF line
// endings, fixed headers) and OBJ surface meshes with welded rotational
// seams.  Readers validate headers and field counts and round-trip doubles
// bit-identically.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "umbilic/core.hpp"
#include "umbilic/surface.hpp"

namespace umbilic {

inline constexpr const char* kCurveCsvHeader =
    "s,rho,t,rho_s,t_s,kappa1,kappa2,nu,residual_unit_speed,residual_umbilic";
inline constexpr const char* kGeodesicCsvHeader = "s,x,y,t,a1,a2,a3,nu";
inline constexpr const char* kCylinderCsvHeader = "t,kappa1,kappa2,H,Ke,Ki,nu";
inline constexpr const char* kSweepCsvHeader =
    "c0,s_final,termination,max_unit_speed,max_first_integral,max_umbilic";

struct CurveRow {
    double s = 0.0, rho = 0.0, t = 0.0, rho_s = 0.0, t_s = 0.0;
    double kappa1 = 0.0, kappa2 = 0.0, nu = 0.0;
    double residual_unit_speed = 0.0, residual_umbilic = 0.0;
};

// Shortest decimal form that still round-trips the double exactly.
inline std::string format_double17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_csv_double(const std::string& field, std::size_t row, std::size_t col) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ValidationError("CSV row " + std::to_string(row) + ", column " +
                              std::to_string(col + 1) + ": not a number: '" + field + "'");
    return v;
}

}  // namespace detail

inline void write_curve_csv(const std::string& path, const std::vector<CurveRow>& rows) {
    std::ofstream out = detail::open_output(path);
    out << kCurveCsvHeader << "\n";
    for (const CurveRow& r : rows) {
        out << format_double17(r.s) << ',' << format_double17(r.rho) << ','
            << format_double17(r.t) << ',' << format_double17(r.rho_s) << ','
            << format_double17(r.t_s) << ',' << format_double17(r.kappa1) << ','
            << format_double17(r.kappa2) << ',' << format_double17(r.nu) << ','
            << format_double17(r.residual_unit_speed) << ','
            << format_double17(r.residual_umbilic) << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

inline std::vector<CurveRow> read_curve_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCurveCsvHeader)
        throw ValidationError("'" + path + "': unexpected CSV header '" + line + "'");
    std::vector<CurveRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() != 10)
            throw ValidationError("CSV row " + std::to_string(lineno) + ": expected 10 fields, got " +
                                  std::to_string(f.size()));
        CurveRow r;
        double* slots[10] = {&r.s,      &r.rho,    &r.t,  &r.rho_s,
                             &r.t_s,    &r.kappa1, &r.kappa2, &r.nu,
                             &r.residual_unit_speed, &r.residual_umbilic};
        for (std::size_t c = 0; c < 10; ++c) *slots[c] = detail::parse_csv_double(f[c], lineno, c);
        rows.push_back(r);
    }
    return rows;
}

inline void write_geodesic_csv(const std::string& path, const std::vector<GeodesicState>& states) {
    std::ofstream out = detail::open_output(path);
    out << kGeodesicCsvHeader << "\n";
    for (const GeodesicState& g : states) {
        out << format_double17(g.s) << ',' << format_double17(g.p.x) << ','
            << format_double17(g.p.y) << ',' << format_double17(g.p.t) << ','
            << format_double17(g.a.x()) << ',' << format_double17(g.a.y()) << ','
            << format_double17(g.a.z()) << ',' << format_double17(g.nu) << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

// Wavefront OBJ: vertices in chart coordinates, quad faces between adjacent
// profile rows; a full rotational sweep closes the omega seam by indexing
// back into the first column instead of duplicating it.
inline void write_mesh_obj(const std::string& path, const SurfaceMesh& mesh,
                           const std::string& object_name = "surface") {
    const std::size_t ns = mesh.s_values.size(), nw = mesh.omega_values.size();
    if (ns == 0 || nw == 0) throw ValidationError("write_mesh_obj: empty mesh");
    std::ofstream out = detail::open_output(path);
    out << "o " << object_name << "\n";
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nw; ++j) {
            const AmbientPoint& p = mesh.at(i, j).p;
            out << "v " << format_double17(p.x) << ' ' << format_double17(p.y) << ' '
                << format_double17(p.t) << "\n";
        }
    auto vid = [nw](std::size_t i, std::size_t j) { return i * nw + j + 1; };  // 1-based
    const std::size_t j_count = mesh.omega_closed ? nw : nw - 1;
    for (std::size_t i = 0; i + 1 < ns; ++i)
        for (std::size_t j = 0; j < j_count; ++j) {
            const std::size_t j2 = (j + 1) % nw;
            out << "f " << vid(i, j) << ' ' << vid(i, j2) << ' ' << vid(i + 1, j2) << ' '
                << vid(i + 1, j) << "\n";
        }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace umbilic
