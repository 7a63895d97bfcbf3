#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bvortex/bvortex.hpp"
#include "bvortex/io.hpp"

namespace bvortex::workbench {

using nlohmann::json;

enum ExitCode : int { pass = 0, config_error = 2, solver_failure = 3, verification_failure = 4 };

inline const std::vector<std::string>& all_suites() {
    static const std::vector<std::string> s{"disk_w",       "rectangle_min", "t0_root",   "cf_sine",
                                            "layer_sine",   "square_stable", "gamma_fit", "polygon_count"};
    return s;
}

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"landscape", "solve", "branch", "verify", "layer", "cf"};
    return c;
}

struct NonlinearitySpec {
    std::string name = "cubic";
    std::optional<double> a;
    Nonlinearity build() const { return Nonlinearity::builtin(name, a); }
};

struct LandscapeConfig {
    int grid_n = 128;
    double delta_diag = -1.0;  // negative selects 0.05 of the parameter period
    double tol = 1e-10;
};

struct SolveConfig {
    double eps = 0.1;
    int n_modes = 512;
    std::optional<double> t_p, t_q;  // domain parameters of the two jump points
    double tol = 1e-8;
    int max_iter = 60;
    int k_spectrum = 6;
    double rho = 0.0;
    double layer_X = 100.0;
    int layer_n = 512;
    bool energy_descent = false;
};

struct BranchConfig {
    double eps_start = 0.2;
    double eps_end = 0.05;
    int n_steps = 8;
    int refine_flips = 0;  // bisection steps per detected flip
};

struct VerifyConfig {
    std::vector<std::string> suites = all_suites();
    int n_modes = 1024;
    double r = 0.995;
    double slope_tolerance = 0.03;
    double intercept_tolerance = 0.1;
};

struct LayerConfig {
    double X = 100.0;
    int n = 512;
    double tol = 1e-10;
};

struct CfConfig {
    std::vector<double> R_list{20, 40, 80, 160, 320};
    int n = 512;
    double slope_threshold = 1e-2;
};

struct RunConfig {
    std::optional<DomainSpec> domain;
    NonlinearitySpec nonlinearity;
    LandscapeConfig landscape;
    SolveConfig solve;
    BranchConfig branch;
    VerifyConfig verify;
    LayerConfig layer;
    CfConfig cf;
    std::string output_dir = ".";
};

// ---------------------------------------------------------------------------
// Strict parsing

namespace detail {

class Block {
public:
    Block(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        require(j.is_object(), ErrorKind::parameter, where_ + " must be a JSON object");
    }

    template <class T>
    void get(const char* key, T& out) {
        known_.insert(key);
        if (!j_.contains(key)) return;
        try {
            check_type<T>(j_.at(key), key);
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parameter, where_ + "." + key + ": " + e.what());
        }
    }

    template <class T>
    void get(const char* key, std::optional<T>& out) {
        T v{};
        known_.insert(key);
        if (!j_.contains(key)) return;
        get(key, v);
        out = v;
    }

    bool has(const char* key) {
        known_.insert(key);
        return j_.contains(key);
    }

    const json& at(const char* key) const { return j_.at(key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            require(known_.count(it.key()) > 0, ErrorKind::parameter, "unknown field '" + it.key() + "' in " + where_);
    }

private:
    template <class T>
    void check_type(const json& v, const char* key) const {
        bool ok = true;
        if constexpr (std::is_same_v<T, int>) ok = v.is_number_integer();
        else if constexpr (std::is_same_v<T, double>) ok = v.is_number();
        else if constexpr (std::is_same_v<T, bool>) ok = v.is_boolean();
        else if constexpr (std::is_same_v<T, std::string>) ok = v.is_string();
        else ok = v.is_array();
        require(ok, ErrorKind::parameter, where_ + "." + key + " has the wrong type");
    }

    const json& j_;
    std::string where_;
    std::set<std::string> known_;
};

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    RunConfig c;
    detail::Block top(j, "config");
    if (top.has("domain")) {
        DomainSpec d;
        from_json(top.at("domain"), d);
        c.domain = d;
    }
    if (top.has("nonlinearity")) {
        detail::Block b(top.at("nonlinearity"), "nonlinearity");
        b.get("name", c.nonlinearity.name);
        b.get("a", c.nonlinearity.a);
        b.finish();
        c.nonlinearity.build();  // validates name and parameter
    }
    if (top.has("landscape")) {
        detail::Block b(top.at("landscape"), "landscape");
        b.get("grid_n", c.landscape.grid_n);
        b.get("delta_diag", c.landscape.delta_diag);
        b.get("tol", c.landscape.tol);
        b.finish();
        require(c.landscape.grid_n >= 64, ErrorKind::parameter, "landscape.grid_n must be >= 64");
    }
    if (top.has("solve")) {
        detail::Block b(top.at("solve"), "solve");
        b.get("eps", c.solve.eps);
        b.get("n_modes", c.solve.n_modes);
        b.get("t_p", c.solve.t_p);
        b.get("t_q", c.solve.t_q);
        b.get("tol", c.solve.tol);
        b.get("max_iter", c.solve.max_iter);
        b.get("k_spectrum", c.solve.k_spectrum);
        b.get("rho", c.solve.rho);
        b.get("layer_X", c.solve.layer_X);
        b.get("layer_n", c.solve.layer_n);
        b.get("energy_descent", c.solve.energy_descent);
        b.finish();
        require(c.solve.eps > 0, ErrorKind::parameter, "solve.eps must be positive");
        require(c.solve.n_modes >= 8 && c.solve.n_modes % 2 == 0, ErrorKind::parameter, "solve.n_modes must be even");
    }
    if (top.has("branch")) {
        detail::Block b(top.at("branch"), "branch");
        b.get("eps_start", c.branch.eps_start);
        b.get("eps_end", c.branch.eps_end);
        b.get("n_steps", c.branch.n_steps);
        b.get("refine_flips", c.branch.refine_flips);
        b.finish();
        require(c.branch.eps_start > 0 && c.branch.eps_end > 0 && c.branch.n_steps >= 1, ErrorKind::parameter,
                "branch needs positive eps_start, eps_end and n_steps");
    }
    if (top.has("verify")) {
        detail::Block b(top.at("verify"), "verify");
        b.get("suites", c.verify.suites);
        b.get("n_modes", c.verify.n_modes);
        b.get("r", c.verify.r);
        b.get("slope_tolerance", c.verify.slope_tolerance);
        b.get("intercept_tolerance", c.verify.intercept_tolerance);
        b.finish();
        for (const auto& s : c.verify.suites)
            require(std::find(all_suites().begin(), all_suites().end(), s) != all_suites().end(), ErrorKind::parameter,
                    "unknown verify suite '" + s + "'");
    }
    if (top.has("layer")) {
        detail::Block b(top.at("layer"), "layer");
        b.get("X", c.layer.X);
        b.get("n", c.layer.n);
        b.get("tol", c.layer.tol);
        b.finish();
    }
    if (top.has("cf")) {
        detail::Block b(top.at("cf"), "cf");
        b.get("R_list", c.cf.R_list);
        b.get("n", c.cf.n);
        b.get("slope_threshold", c.cf.slope_threshold);
        b.finish();
    }
    top.get("output_dir", c.output_dir);
    top.finish();
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parameter, std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::parameter, "cannot read config '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

// Canonical form with defaults filled in; output_dir is excluded.
inline json canonical(const RunConfig& c) {
    json j;
    if (c.domain) j["domain"] = *c.domain;
    j["nonlinearity"] = {{"name", c.nonlinearity.name}};
    if (c.nonlinearity.a) j["nonlinearity"]["a"] = *c.nonlinearity.a;
    j["landscape"] = {{"grid_n", c.landscape.grid_n}, {"delta_diag", c.landscape.delta_diag}, {"tol", c.landscape.tol}};
    j["solve"] = {{"eps", c.solve.eps},           {"n_modes", c.solve.n_modes}, {"tol", c.solve.tol},
                  {"max_iter", c.solve.max_iter}, {"k_spectrum", c.solve.k_spectrum}, {"rho", c.solve.rho},
                  {"layer_X", c.solve.layer_X},   {"layer_n", c.solve.layer_n}, {"energy_descent", c.solve.energy_descent}};
    if (c.solve.t_p) j["solve"]["t_p"] = *c.solve.t_p;
    if (c.solve.t_q) j["solve"]["t_q"] = *c.solve.t_q;
    j["branch"] = {{"eps_start", c.branch.eps_start},
                   {"eps_end", c.branch.eps_end},
                   {"n_steps", c.branch.n_steps},
                   {"refine_flips", c.branch.refine_flips}};
    j["verify"] = {{"suites", c.verify.suites},
                   {"n_modes", c.verify.n_modes},
                   {"r", c.verify.r},
                   {"slope_tolerance", c.verify.slope_tolerance},
                   {"intercept_tolerance", c.verify.intercept_tolerance}};
    j["layer"] = {{"X", c.layer.X}, {"n", c.layer.n}, {"tol", c.layer.tol}};
    j["cf"] = {{"R_list", c.cf.R_list}, {"n", c.cf.n}, {"slope_threshold", c.cf.slope_threshold}};
    return j;
}

inline std::string config_hash(const RunConfig& c) { return io::hex64(io::fnv1a64(canonical(c).dump())); }

// ---------------------------------------------------------------------------
// Commands

enum class Level { debug, info, warn, error };

struct Options {
    std::string out_dir;  // empty selects the config's output_dir
    int threads = 1;
    std::function<void(Level, const std::string&)> log;
};

namespace detail {

struct Context {
    const RunConfig& cfg;
    std::filesystem::path dir;
    io::Meta meta;
    int threads = 1;
    std::function<void(Level, const std::string&)> log;

    void say(Level l, const std::string& s) const {
        if (log) log(l, s);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    json with_meta(json j) const {
        j["meta"] = meta.to_json();
        return j;
    }
};

// Solver failures that carry a residual history.
struct SolverFailure {
    std::string what;
    std::vector<double> history;
    double achieved = 0.0;
};

inline const DomainSpec& need_domain(const RunConfig& c, const std::string& cmd) {
    if (!c.domain) throw Error(ErrorKind::parameter, cmd + " needs a 'domain' block");
    return *c.domain;
}

// Default jump points: antipodes on the disk, opposite mid-edges on regular polygons.
inline std::pair<double, double> jump_points(const RunConfig& c, const DomainSpec& d) {
    if (c.solve.t_p && c.solve.t_q) return {*c.solve.t_p, *c.solve.t_q};
    if (d.as<UnitDisk>()) return {0.0, pi};
    if (auto* rp = d.as<RegularPolygonDisk>()) {
        const double mid = pi / rp->N;
        return {mid, mid + 2 * pi * (rp->N / 2) / rp->N};
    }
    throw Error(ErrorKind::parameter, "solve.t_p and solve.t_q are required for domain kind " + d.kind_name());
}

inline SolverOptions solver_options(const SolveConfig& s) {
    SolverOptions o;
    o.tol = s.tol;
    o.max_iter = s.max_iter;
    o.k_spectrum = s.k_spectrum;
    o.energy_descent = s.energy_descent;
    return o;
}

inline SolutionRecord solve_at(const Context& ctx, const CircleModel& model, const Nonlinearity& f, double eps,
                               const LayerProfile& profile) {
    const auto [tp, tq] = jump_points(ctx.cfg, model.domain);
    GuessOptions go;
    go.rho = ctx.cfg.solve.rho;
    const auto guess = initial_guess(model, model.circle_angle(tp), model.circle_angle(tq), eps, profile, go);
    return newton_solve(guess, f, eps, solver_options(ctx.cfg.solve));
}

inline json record_summary(const SolutionRecord& r) {
    json transition = json::array();
    for (const auto& iv : r.transition) transition.push_back({iv.lo, iv.hi});
    return {{"eps", r.eps},
            {"energy", io::energy(r.energy)},
            {"lambda_min", io::number(r.lambda_min())},
            {"spectrum_head", io::numbers(r.spectrum_head)},
            {"vortices", io::numbers(r.vortices)},
            {"transition", transition},
            {"stable", r.stable},
            {"residual_norm", r.residual_norm},
            {"max_principle_ok", r.max_principle_ok},
            {"iterations", r.iterations}};
}

inline int cmd_landscape(const Context& ctx) {
    const auto& d = need_domain(ctx.cfg, "landscape");
    for (const auto& w : d.warnings()) ctx.say(Level::warn, w);
    const auto& lc = ctx.cfg.landscape;
    const auto land = compute_landscape(d, lc.grid_n, lc.delta_diag, ctx.threads);
    io::write_file(ctx.path("landscape.csv"), io::landscape_csv(land, ctx.meta));
    const auto search = find_local_minima(d, lc.grid_n, lc.delta_diag, lc.tol, ctx.threads);
    for (const auto& l : search.log) ctx.say(Level::debug, l);
    json minima = json::array();
    for (const auto& cp : search.minima) minima.push_back(io::critical_point(cp));
    io::write_json(ctx.path("minima.json"), ctx.with_meta({{"domain", d},
                                                           {"excluded_band", land.excluded_band},
                                                           {"minima", minima},
                                                           {"log", search.log}}));
    ctx.say(Level::info, "landscape: " + std::to_string(search.minima.size()) + " isolated minima");
    return pass;
}

inline int cmd_solve(const Context& ctx) {
    const auto& d = need_domain(ctx.cfg, "solve");
    const auto f = ctx.cfg.nonlinearity.build();
    const auto& sc = ctx.cfg.solve;
    const auto model = make_circle_model(d, sc.n_modes);
    const auto profile = solve_layer(f, sc.layer_X, sc.layer_n);
    const auto rec = solve_at(ctx, model, f, sc.eps, profile);
    const auto [tp, tq] = jump_points(ctx.cfg, d);
    json j = io::solution_record(rec);
    j["domain"] = d;
    j["nonlinearity"] = f.label();
    j["t_p"] = tp;
    j["t_q"] = tq;
    io::write_json(ctx.path("solution.json"), ctx.with_meta(j));
    ctx.say(Level::info, "solve: eps " + io::num(rec.eps) + ", lambda_min " + io::num(rec.lambda_min()) +
                             (rec.stable ? " (stable)" : " (unstable)"));
    return pass;
}

inline int cmd_branch(const Context& ctx) {
    const auto& d = need_domain(ctx.cfg, "branch");
    const auto f = ctx.cfg.nonlinearity.build();
    const auto& bc = ctx.cfg.branch;
    const auto model = make_circle_model(d, ctx.cfg.solve.n_modes);
    const auto profile = solve_layer(f, ctx.cfg.solve.layer_X, ctx.cfg.solve.layer_n);
    const auto seed = solve_at(ctx, model, f, bc.eps_start, profile);
    const auto br = continuation(f, seed, bc.eps_end, bc.n_steps, solver_options(ctx.cfg.solve));
    for (const auto& l : br.log) ctx.say(Level::warn, l);
    json records = json::array(), flips = json::array(), refined = json::array();
    for (const auto& r : br.records) records.push_back(record_summary(r));
    for (const auto& [a, b] : br.flips) {
        flips.push_back({a, b});
        if (bc.refine_flips > 0) {
            const auto it = std::find_if(br.records.begin(), br.records.end(), [&](const SolutionRecord& r) { return r.eps == a; });
            const auto [lo, hi] = refine_flip(f, *it, b, bc.refine_flips, solver_options(ctx.cfg.solve));
            refined.push_back({lo, hi});
        }
    }
    io::write_file(ctx.path("branch.csv"), io::branch_csv(br.records, ctx.meta));
    io::write_json(ctx.path("branch.json"), ctx.with_meta({{"domain", d},
                                                           {"nonlinearity", f.label()},
                                                           {"records", records},
                                                           {"flips", flips},
                                                           {"refined_flips", refined},
                                                           {"log", br.log}}));
    ctx.say(Level::info, "branch: " + std::to_string(br.records.size()) + " records, " + std::to_string(br.flips.size()) +
                             " stability flips");
    return pass;
}

inline int cmd_layer(const Context& ctx) {
    const auto f = ctx.cfg.nonlinearity.build();
    const auto& lc = ctx.cfg.layer;
    const auto p = solve_layer(f, lc.X, lc.n, lc.tol);
    io::write_file(ctx.path("profile.csv"), io::profile_csv(p, ctx.meta));
    json j = {{"nonlinearity", f.label()},
              {"X", p.X},
              {"L", p.L},
              {"n", p.n},
              {"residual", p.residual},
              {"iterations", p.iterations},
              {"tail_coeff_minus", p.tail_coeff_minus},
              {"tail_coeff_plus", p.tail_coeff_plus}};
    if (f.name == "sine") {
        double err = 0;
        for (std::size_t k = 0; k < p.x.size(); ++k) err = std::max(err, std::abs(p.v[k] - layer_explicit_sine(*f.a, p.x[k])));
        j["sup_error_vs_closed_form"] = err;
    }
    io::write_json(ctx.path("layer.json"), ctx.with_meta(j));
    ctx.say(Level::info, "layer: residual " + io::num(p.residual));
    return pass;
}

inline int cmd_cf(const Context& ctx) {
    const auto f = ctx.cfg.nonlinearity.build();
    CfOptions o;
    o.n = ctx.cfg.cf.n;
    o.slope_threshold = ctx.cfg.cf.slope_threshold;
    o.threads = ctx.threads;
    const auto fit = compute_cf(f, ctx.cfg.cf.R_list, o);
    if (!fit.warning.empty()) ctx.say(Level::warn, fit.warning);
    json j = io::cf_fit(fit, f);
    if (f.name == "sine") j["closed_form"] = cf_closed_form(*f.a);
    io::write_json(ctx.path("cf.json"), ctx.with_meta(j));
    ctx.say(Level::info, "cf: " + io::num(fit.cf_estimate));
    return pass;
}

// ---------------------------------------------------------------------------
// Verification suites

inline double circular_gap(double a, double b) { return bvortex::detail::circular_distance(a, b, 2 * pi); }

struct SuiteResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

inline SuiteResult suite_disk_w() {
    SuiteResult s{"disk_w"};
    const auto d = DomainSpec::unit_disk();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const double a = u(rng), b = u(rng);
        if (circular_gap(a, b) < 1e-3) continue;
        const auto p = boundary_point(d, a), q = boundary_point(d, b);
        const double ref = (4.0 / pi) * std::log(std::abs(p.z - q.z));
        for (double w : {renorm_w_conformal(d, p, q), renorm_w_green(d, p, q), renorm_w_neumann(d, p, q)})
            worst = std::max(worst, std::abs(w - ref));
    }
    s.value = worst;
    s.bound = 1e-9;
    s.passed = worst <= s.bound;
    s.detail = "max deviation from (4/pi) log|p-q| over 50 pairs";
    return s;
}

inline SuiteResult suite_rectangle_min(const RunConfig& c) {
    SuiteResult s{"rectangle_min"};
    double L = 1, H = 1;
    if (c.domain)
        if (auto* rc = c.domain->as<Rectangle>()) {
            L = rc->L;
            H = rc->H;
        }
    const auto mh = rectangle_hessian_at_midpoint(L, H);
    const auto search = find_local_minima(DomainSpec::rectangle(L, H), 64);
    double best = 1e300;
    for (const auto& m : search.minima)
        best = std::min(best, std::max(std::abs(m.p.t - 0.5 * L), std::abs(m.q.t - (L + H + 0.5 * L))));
    s.value = best;
    s.bound = 1e-6;
    s.passed = mh.negative_definite && best <= s.bound;
    s.detail = std::string("midpoint Hessian ") + (mh.negative_definite ? "negative definite" : "NOT negative definite") +
               "; parameter distance of the nearest minimizer to the midpoint pair";
    return s;
}

inline SuiteResult suite_t0_root() {
    SuiteResult s{"t0_root"};
    const double t0 = three_tanh_root();
    s.value = std::abs(t0 - 2.9847);
    s.bound = 1e-3;
    s.passed = s.value <= s.bound && std::abs(t0 - 3 * std::tanh(t0)) <= 1e-12;
    s.detail = "t0 = " + io::num(t0);
    return s;
}

inline SuiteResult suite_cf_sine(const RunConfig& c, int threads) {
    SuiteResult s{"cf_sine"};
    const double a = c.nonlinearity.name == "sine" && c.nonlinearity.a ? *c.nonlinearity.a : 1.0;
    CfOptions o;
    o.threads = threads;
    const auto fit = compute_cf(Nonlinearity::sine(a), {20, 40, 80, 160, 320}, o);
    s.value = std::abs(fit.cf_estimate - cf_closed_form(a));
    s.bound = 2e-3;
    s.passed = s.value <= s.bound;
    s.detail = "a = " + io::num(a) + ", C_f = " + io::num(fit.cf_estimate) + ", closed form " + io::num(cf_closed_form(a));
    return s;
}

inline SuiteResult suite_layer_sine() {
    SuiteResult s{"layer_sine"};
    const auto p = solve_layer(Nonlinearity::sine(1.0), 62.5, 512);
    double err = 0;
    for (int k = 0; k <= 4000; ++k) {
        const double x = -50.0 + 100.0 * k / 4000;
        err = std::max(err, std::abs(p(x) - layer_explicit_sine(1.0, x)));
    }
    s.value = err;
    s.bound = 1e-4;
    s.passed = err <= s.bound;
    s.detail = "sup |v - (2/pi) arctan x| on [-50, 50]";
    return s;
}

inline SuiteResult suite_square_stable(const RunConfig& c) {
    SuiteResult s{"square_stable"};
    const auto f = Nonlinearity::cubic();
    const auto model = make_circle_model(DomainSpec::regular_polygon_disk(4, c.verify.r), c.verify.n_modes);
    const auto profile = solve_layer(f, 100, 512);
    const auto seed = newton_solve(initial_guess(model, pi / 4, 5 * pi / 4, 0.05, profile), f, 0.05);
    const auto br = continuation(f, seed, 0.25, 8);
    bool all = true;
    double worst = 1e300, drift = 0;
    for (const auto& r : br.records) {
        all = all && r.stable && r.vortices.size() == 2;
        worst = std::min(worst, r.lambda_min() * r.eps);
        for (double v : r.vortices)
            drift = std::max(drift, std::min(circular_gap(v, pi / 4), circular_gap(v, 5 * pi / 4)));
    }
    s.value = worst;
    s.bound = -1e-8;
    s.passed = all && drift <= 0.05 * 2 * pi;
    s.detail = "min eps*lambda_min over eps in [0.05, 0.25]; vortex drift from mid-edges " + io::num(drift);
    return s;
}

inline SuiteResult suite_gamma_fit(const RunConfig& c, int threads) {
    SuiteResult s{"gamma_fit"};
    const auto f = Nonlinearity::cubic();
    const auto dom = DomainSpec::regular_polygon_disk(4, c.verify.r);
    const auto model = make_circle_model(dom, c.verify.n_modes);
    const auto profile = solve_layer(f, 100, 512);
    std::vector<SolutionRecord> branch;
    for (double eps : {0.2, 0.1, 0.05, 0.025})
        branch.push_back(newton_solve(initial_guess(model, pi / 4, 5 * pi / 4, eps, profile), f, eps));
    CfOptions o;
    o.threads = threads;
    const double cf = compute_cf(f, {20, 40, 80, 160, 320}, o).cf_estimate;
    FitOptions fo;
    fo.slope_tolerance = c.verify.slope_tolerance;
    fo.intercept_tolerance = c.verify.intercept_tolerance;
    const auto fit = gamma_expansion_check(branch, renorm_w(dom, pi / 4, 5 * pi / 4), cf, fo);
    s.value = fit.slope_error();
    s.bound = fit.slope_tolerance;
    s.passed = fit.slope_ok() && fit.intercept_ok();
    s.detail = "slope " + io::num(fit.fitted_slope) + " (" + fit.model + "), intercept gap " + io::num(fit.intercept_gap()) +
               " (bound " + io::num(fit.intercept_tolerance) + "), two-term slope " + io::num(fit.plain_slope);
    return s;
}

inline SuiteResult suite_polygon_count(int threads) {
    SuiteResult s{"polygon_count"};
    const int N = 6;
    const double b = 0.5 * polygon_certificate_threshold(N, 1.0 / N - 2.0);
    int certified = 0;
    std::vector<std::pair<int, int>> cells;
    for (int A = 1; A <= N; ++A)
        for (int B = A + 2; B + 1 <= N; ++B) {
            cells.emplace_back(A, B);
            if (polygon_minima_certificate(N, b, A, B).certified) ++certified;
        }
    const auto search = find_local_minima(DomainSpec::equiangular_polygon(N, b), 64, -1.0, 1e-10, threads);
    int found = 0;
    for (auto [A, B] : cells) {
        for (const auto& m : search.minima)
            if (m.p.t > A && m.p.t < A + 1 && m.q.t > B && m.q.t < B + 1 && m.p.t < m.q.t) {
                ++found;
                break;
            }
    }
    s.value = found;
    s.bound = (N - 2) * (N - 3) / 2;
    s.passed = certified == static_cast<int>(cells.size()) && found >= s.bound;
    s.detail = "b = " + io::num(b) + ", certified cells " + std::to_string(certified) + "/" + std::to_string(cells.size()) +
               ", minimizers located in certified cells";
    return s;
}

inline int cmd_verify(const Context& ctx) {
    std::vector<SuiteResult> results;
    for (const auto& name : ctx.cfg.verify.suites) {
        ctx.say(Level::info, "verify: running " + name);
        if (name == "disk_w") results.push_back(suite_disk_w());
        else if (name == "rectangle_min") results.push_back(suite_rectangle_min(ctx.cfg));
        else if (name == "t0_root") results.push_back(suite_t0_root());
        else if (name == "cf_sine") results.push_back(suite_cf_sine(ctx.cfg, ctx.threads));
        else if (name == "layer_sine") results.push_back(suite_layer_sine());
        else if (name == "square_stable") results.push_back(suite_square_stable(ctx.cfg));
        else if (name == "gamma_fit") results.push_back(suite_gamma_fit(ctx.cfg, ctx.threads));
        else if (name == "polygon_count") results.push_back(suite_polygon_count(ctx.threads));
    }
    bool all = true;
    std::string report = ctx.meta.csv_comment();
    json suites = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        report += std::string(r.passed ? "PASS " : "FAIL ") + r.name + "  value=" + io::num(r.value) +
                  " bound=" + io::num(r.bound) + "  " + r.detail + "\n";
        suites.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"bound", r.bound}, {"detail", r.detail}});
    }
    io::write_file(ctx.path("report.txt"), report);
    io::write_json(ctx.path("verify.json"), ctx.with_meta({{"suites", suites}, {"passed", all}}));
    for (const auto& r : results)
        ctx.say(r.passed ? Level::info : Level::error, std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail);
    return all ? pass : verification_failure;
}

}  // namespace detail

// Runs one subcommand and maps failures onto exit codes. Solver failures leave
// residual_history.json in the output directory.
inline int run_command(const std::string& command, const RunConfig& cfg, const Options& opt = {}) {
    const std::filesystem::path dir = opt.out_dir.empty() ? cfg.output_dir : opt.out_dir;
    detail::Context ctx{cfg, dir, {"bvortex", version, config_hash(cfg)}, std::max(1, opt.threads), opt.log};
    try {
        std::filesystem::create_directories(dir);
        if (command == "landscape") return detail::cmd_landscape(ctx);
        if (command == "solve") return detail::cmd_solve(ctx);
        if (command == "branch") return detail::cmd_branch(ctx);
        if (command == "verify") return detail::cmd_verify(ctx);
        if (command == "layer") return detail::cmd_layer(ctx);
        if (command == "cf") return detail::cmd_cf(ctx);
        ctx.say(Level::error, "unknown command '" + command + "'");
        return config_error;
    } catch (const ConvergenceError& e) {
        ctx.say(Level::error, e.what());
        io::write_json(ctx.path("residual_history.json"),
                       ctx.with_meta({{"error", e.what()}, {"residual_history", io::numbers(e.history())}, {"achieved", io::number(e.achieved())}}));
        return solver_failure;
    } catch (const Error& e) {
        ctx.say(Level::error, e.what());
        switch (e.kind()) {
        case ErrorKind::rank:
        case ErrorKind::numerical:
        case ErrorKind::truncation:
            io::write_json(ctx.path("residual_history.json"),
                           ctx.with_meta({{"error", e.what()}, {"residual_history", json::array()}, {"achieved", nullptr}}));
            return solver_failure;
        default: return config_error;
        }
    } catch (const std::filesystem::filesystem_error& e) {
        ctx.say(Level::error, e.what());
        return config_error;
    }
}

}  // namespace bvortex::workbench
