#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bvortex/boundary_solver.hpp"
#include "bvortex/diagnostics.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/layer.hpp"
#include "bvortex/renormalized_energy.hpp"

namespace bvortex::io {

using nlohmann::json;

// 64-bit FNV-1a
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Round-trip decimal form used in every CSV cell.
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// NaN and infinities have no JSON literal; they are written as null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

struct Meta {
    std::string tool = "bvortex";
    std::string version;
    std::string config_hash;

    json to_json() const { return {{"tool", tool}, {"version", version}, {"config_hash", config_hash}}; }
    std::string csv_comment() const { return "# " + tool + " " + version + " config_hash=" + config_hash + "\n"; }
};

inline json critical_point(const CriticalPoint& c) {
    return {{"t_p", c.p.t},
            {"t_q", c.q.t},
            {"W", c.W_value},
            {"hess", {{c.hessian[0][0], c.hessian[0][1]}, {c.hessian[1][0], c.hessian[1][1]}}},
            {"class", to_string(c.classification)}};
}

inline json energy(const Energy& e) {
    return {{"dirichlet", e.dirichlet}, {"potential", e.potential}, {"total", e.total}};
}

inline json solution_record(const SolutionRecord& r) {
    json transition = json::array();
    for (const auto& iv : r.transition) transition.push_back({iv.lo, iv.hi});
    return {{"eps", r.eps},
            {"n_modes", r.trace.n_modes},
            {"trace", numbers(r.trace.values)},
            {"weight", numbers(r.trace.weight)},
            {"residual_norm", r.residual_norm},
            {"residual_history", numbers(r.residual_history)},
            {"energy", energy(r.energy)},
            {"spectrum_head", numbers(r.spectrum_head)},
            {"lambda_min", number(r.lambda_min())},
            {"vortices", numbers(r.vortices)},
            {"transition", transition},
            {"stable", r.stable},
            {"max_principle_ok", r.max_principle_ok},
            {"iterations", r.iterations}};
}

inline json expansion_fit(const ExpansionFit& f) {
    return {{"abscissa", numbers(f.abscissa)},
            {"ordinate", numbers(f.ordinate)},
            {"fitted_slope", f.fitted_slope},
            {"fitted_intercept", f.fitted_intercept},
            {"target_slope", f.target_slope},
            {"target_intercept", f.target_intercept},
            {"model", f.model},
            {"correction", f.correction},
            {"plain_slope", f.plain_slope},
            {"plain_intercept", f.plain_intercept},
            {"slope_error", f.slope_error()},
            {"intercept_gap", f.intercept_gap()},
            {"slope_ok", f.slope_ok()},
            {"intercept_ok", f.intercept_ok()}};
}

inline json cf_fit(const CfFit& fit, const Nonlinearity& f) {
    json j = {{"nonlinearity", f.label()},
              {"R_list", numbers(fit.R_list)},
              {"I_values", numbers(fit.I_values)},
              {"offsets", numbers(fit.offsets)},
              {"cf_estimate", fit.cf_estimate},
              {"raw_last", fit.raw_last},
              {"slope", fit.slope}};
    if (f.a) j["a"] = *f.a;
    if (!fit.warning.empty()) j["warning"] = fit.warning;
    return j;
}

inline std::string landscape_csv(const EnergyLandscape& land, const Meta& meta) {
    std::string out = meta.csv_comment() + "t_p,t_q,W\n";
    for (std::size_t i = 0; i < land.tp.size(); ++i)
        for (std::size_t j = 0; j < land.tq.size(); ++j)
            if (land.retained(i, j)) out += num(land.tp[i]) + "," + num(land.tq[j]) + "," + num(land.at(i, j)) + "\n";
    return out;
}

inline std::string profile_csv(const LayerProfile& p, const Meta& meta) {
    std::string out = meta.csv_comment() + "x,v\n";
    for (std::size_t k = 0; k < p.x.size(); ++k) out += num(p.x[k]) + "," + num(p.v[k]) + "\n";
    return out;
}

inline std::string branch_csv(const std::vector<SolutionRecord>& records, const Meta& meta) {
    std::string out = meta.csv_comment() + "eps,energy_total,lambda_min,vortex1,vortex2,stable\n";
    for (const auto& r : records) {
        const double v1 = r.vortices.size() > 0 ? r.vortices[0] : NAN;
        const double v2 = r.vortices.size() > 1 ? r.vortices[1] : NAN;
        out += num(r.eps) + "," + num(r.energy.total) + "," + num(r.lambda_min()) + "," + num(v1) + "," + num(v2) + "," +
               (r.stable ? "1" : "0") + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::parameter, "cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw Error(ErrorKind::numerical, "write to '" + path + "' failed");
}

inline void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

}  // namespace bvortex::io
