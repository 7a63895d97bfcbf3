// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "bvortex/bvortex.hpp"
#include "bvortex/workbench.hpp"

using namespace bvortex;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

std::vector<SolutionRecord> converged;  // traces collected for the maximum-principle check

const Nonlinearity& cubic() {
    static const Nonlinearity f = Nonlinearity::cubic();
    return f;
}

const LayerProfile& cubic_profile() {
    static const LayerProfile p = solve_layer(cubic(), 100, 512);
    return p;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome disk_oracle() {
    const auto d = DomainSpec::unit_disk();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    double worst = 0;
    int pairs = 0;
    while (pairs < 50) {
        const double a = u(rng), b = u(rng);
        if (detail::circular_distance(a, b, 2 * pi) < 1e-3) continue;
        const auto p = boundary_point(d, a), q = boundary_point(d, b);
        const double c = renorm_w_conformal(d, p, q), g = renorm_w_green(d, p, q), l = 4 / pi * std::log(std::abs(p.z - q.z));
        worst = std::max({worst, std::abs(c - g), std::abs(c - l), std::abs(g - l)});
        ++pairs;
    }
    return {worst <= 1e-9, "max pairwise gap " + fmt("%.2e", worst)};
}

Outcome rectangle_midpoint() {
    bool ok = true;
    std::string detail;
    for (auto [L, H] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.8, 1.0}}) {
        const auto mh = rectangle_hessian_at_midpoint(L, H);
        double best = 1e300;
        for (const auto& m : find_local_minima(DomainSpec::rectangle(L, H), 64).minima)
            best = std::min(best, std::max(std::abs(m.p.t - 0.5 * L), std::abs(m.q.t - (1.5 * L + H))));
        ok = ok && mh.negative_definite && best <= 1e-6;
        detail += fmt("(%g,", L) + fmt("%g): ", H) + (mh.negative_definite ? "neg-def, " : "NOT neg-def, ") + fmt("dist %.1e; ", best);
    }
    return {ok, detail};
}

Outcome t0_root() {
    const double t0 = three_tanh_root();
    return {std::abs(t0 - 2.9847) <= 1e-3, fmt("t0 = %.6f", t0)};
}

Outcome cf_oracle() {
    bool ok = true;
    std::string detail;
    for (double a : {0.5, 1.0, 2.0}) {
        const double target = 2 / pi * (1 - std::log(a) - a * std::log(2.0));
        const double cf = compute_cf(Nonlinearity::sine(a)).cf_estimate;
        ok = ok && std::abs(cf - target) <= 2e-3;
        detail += fmt("a=%g: ", a) + fmt("%.6f vs ", cf) + fmt("%.6f; ", target);
    }
    return {ok, detail};
}

Outcome layer_oracle() {
    // default start plus two arctan starts of the wrong width
    double worst = 0;
    int iterations = 0;
    for (double s0 : {0.0, 0.4, 3.0}) {
        LayerOptions o;
        o.start_scale = s0;
        const auto p = solve_layer(Nonlinearity::sine(1.0), 62.5, 512, 1e-10, o);
        iterations = std::max(iterations, p.iterations);
        for (int k = 0; k <= 10000; ++k) {
            const double x = -50.0 + 100.0 * k / 10000;
            worst = std::max(worst, std::abs(p(x) - 2 / pi * std::atan(x)));
        }
    }
    return {worst <= 1e-4, "sup error " + fmt("%.2e", worst) + " over three starts (up to " + std::to_string(iterations) + " Newton steps)"};
}

Outcome square_stability() {
    const auto m = make_circle_model(DomainSpec::regular_polygon_disk(4, 0.995), 1024);
    const auto seed = newton_solve(initial_guess(m, pi / 4, 5 * pi / 4, 0.05, cubic_profile()), cubic(), 0.05);
    const auto br = continuation(cubic(), seed, 0.45, 30);
    bool stable_low = true;
    for (const auto& r : br.records) {
        converged.push_back(r);
        if (r.eps <= 0.25 + 1e-12) stable_low = stable_low && r.lambda_min() >= -r.spec_tol();
    }
    std::string detail = std::string("stable on [0.05, 0.25]: ") + (stable_low ? "yes" : "no") + "; flips:";
    bool bracketed = false;
    for (auto [a, b] : br.flips) {
        const auto it = std::find_if(br.records.begin(), br.records.end(), [&](const SolutionRecord& r) { return r.eps == a; });
        const auto [lo, hi] = refine_flip(cubic(), *it, b, 6);
        detail += fmt(" [%.4f,", std::min(lo, hi)) + fmt(" %.4f]", std::max(lo, hi));
        if (std::min(a, b) >= 0.30 && std::max(a, b) <= 0.40) bracketed = true;
    }
    if (br.flips.empty()) detail += " none";
    return {stable_low && bracketed, detail};
}

Outcome disk_nonexistence() {
    const auto m = make_circle_model(DomainSpec::unit_disk(), 512);
    int nonconstant = 0, unstable = 0;
    double worst = -1e300;
    for (double eps : {0.2, 0.1, 0.05})
        for (auto [a, b] : {std::pair{0.0, pi}, std::pair{0.0, 0.5 * pi}, std::pair{0.3, 2.0}, std::pair{1.0, 5.0}}) {
            try {
                const auto r = newton_solve(initial_guess(m, a, b, eps, cubic_profile()), cubic(), eps);
                converged.push_back(r);
                if (!r.nonconstant()) continue;
                ++nonconstant;
                if (r.lambda_min() < 0) ++unstable;
                worst = std::max(worst, r.lambda_min());
            } catch (const ConvergenceError&) {
            }
        }
    return {nonconstant > 0 && unstable == nonconstant,
            std::to_string(unstable) + "/" + std::to_string(nonconstant) + " nonconstant solutions unstable, largest lambda_min " +
                fmt("%.4f", worst)};
}

Outcome gamma_expansion() {
    const auto d = DomainSpec::regular_polygon_disk(4, 0.995);
    const auto m = make_circle_model(d, 1024);
    std::vector<SolutionRecord> branch;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        branch.push_back(newton_solve(initial_guess(m, pi / 4, 5 * pi / 4, eps, cubic_profile()), cubic(), eps));
        converged.push_back(branch.back());
    }
    const double cf = compute_cf(cubic()).cf_estimate;
    const auto fit = gamma_expansion_check(branch, renorm_w(d, pi / 4, 5 * pi / 4), cf);
    return {fit.slope_ok() && fit.intercept_ok(), "slope " + fmt("%.5f", fit.fitted_slope) + " (" + fit.model + fmt(", %+.2f%%)", 100 * fit.slope_error()) +
                                                      ", intercept gap " + fmt("%.4f", fit.intercept_gap()) + ", two-term slope " +
                                                      fmt("%.5f", fit.plain_slope)};
}

Outcome truncated_expansion() {
    const auto d = DomainSpec::unit_disk();
    bool ok = true;
    double worst_slope = 0, worst_gap = 0;
    for (auto [a, b] : {std::pair{0.3, 0.3 + pi}, std::pair{1.0, 2.5}, std::pair{4.0, 5.2}}) {
        const auto p = boundary_point(d, a), q = boundary_point(d, b);
        const auto fit = truncated_energy_fit(d, p, q, {0.02, 0.01, 0.005}, 4 / pi * std::log(std::abs(p.z - q.z))).fit;
        ok = ok && std::abs(fit.slope_error()) <= 0.01 && std::abs(fit.intercept_gap()) <= 0.05;
        worst_slope = std::max(worst_slope, std::abs(fit.slope_error()));
        worst_gap = std::max(worst_gap, std::abs(fit.intercept_gap()));
    }
    return {ok, "worst slope error " + fmt("%.3f%%", 100 * worst_slope) + ", worst intercept gap " + fmt("%.4f", worst_gap)};
}

Outcome polygon_count() {
    const int N = 6;
    const double b = 0.5 * polygon_certificate_threshold(N, 1.0 / N - 2.0);
    const auto minima = find_local_minima(DomainSpec::equiangular_polygon(N, b), 64).minima;
    int certified = 0;
    std::vector<std::pair<int, int>> cells;
    for (const auto& m : minima) {
        if (!(m.p.t < m.q.t)) continue;
        const int A = static_cast<int>(std::floor(m.p.t)), B = static_cast<int>(std::floor(m.q.t));
        if (A < 1 || B < A + 2 || B + 1 > N) continue;
        if (!polygon_minima_certificate(N, b, A, B).certified) continue;
        if (std::find(cells.begin(), cells.end(), std::pair{A, B}) != cells.end()) continue;
        cells.emplace_back(A, B);
        ++certified;
    }
    const int expected = (N - 2) * (N - 3) / 2;
    return {certified >= 6 && certified == expected,
            fmt("b = %.3e: ", b) + std::to_string(certified) + " certified minimizers in distinct cells, expected " + std::to_string(expected)};
}

Outcome homoclinic() {
    bool ok = true;
    std::string detail;
    for (const auto& f : {Nonlinearity::cubic(), Nonlinearity::sine(1.0)})
        for (double h : {0.5, 1.0, 1.5}) {
            const auto v = homoclinic_probe(f, h);
            ok = ok && v.verdict == "collapsed_to_constant";
            if (v.verdict != "collapsed_to_constant") detail += f.label() + fmt(" h=%g: ", h) + v.verdict + "; ";
        }
    return {ok, detail.empty() ? "6/6 collapsed" : detail};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome properties() {
    std::string detail;
    // Jacobian against central differences
    const auto m = make_circle_model(DomainSpec::regular_polygon_disk(4, 0.995), 256);
    const auto rec = newton_solve(initial_guess(m, pi / 4, 5 * pi / 4, 0.1, cubic_profile()), cubic(), 0.1);
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    const Eigen::MatrixXd J = jacobian(rec.trace, cubic(), 0.1);
    double jac = 0;
    for (int k = 0; k < 5; ++k) {
        Eigen::VectorXd v(m.n);
        for (int j = 0; j < m.n; ++j) v(j) = g(rng);
        BoundaryField up = rec.trace, dn = rec.trace;
        for (int j = 0; j < m.n; ++j) {
            up.values[j] += 1e-6 * v(j);
            dn.values[j] -= 1e-6 * v(j);
        }
        const auto ru = residual(up, cubic(), 0.1), rd = residual(dn, cubic(), 0.1);
        Eigen::VectorXd fd(m.n);
        for (int j = 0; j < m.n; ++j) fd(j) = (ru[j] - rd[j]) / 2e-6;
        jac = std::max(jac, (fd - J * v).norm() / (J * v).norm());
    }
    // DtN multiplier on single modes
    double dtn = 0;
    const int n = 64;
    for (int k = 0; k <= n / 2; ++k) {
        std::vector<double> c(n), s(n);
        for (int j = 0; j < n; ++j) {
            c[j] = std::cos(k * 2 * pi * j / n);
            s[j] = std::sin(k * 2 * pi * j / n);
        }
        const auto lc = dtn_apply(c), ls = dtn_apply(s);
        for (int j = 0; j < n; ++j) dtn = std::max({dtn, std::abs(lc[j] - k * c[j]), std::abs(ls[j] - k * s[j])});
    }
    // byte-identical reruns
    namespace wb = bvortex::workbench;
    const auto base = std::filesystem::temp_directory_path() / ("bvortex_acceptance_" + std::to_string(::getpid()));
    const auto cfg = wb::parse_config_text(R"({"domain": {"kind": "regular_polygon_disk", "N": 4, "r": 0.95},
        "landscape": {"grid_n": 64}, "solve": {"n_modes": 256}, "branch": {"eps_start": 0.2, "eps_end": 0.1, "n_steps": 2}})");
    bool same = true;
    for (const char* cmd : {"landscape", "solve", "branch"}) {
        for (const char* run : {"a", "b"}) {
            wb::Options o;
            o.out_dir = (base / run).string();
            o.threads = run[0] == 'a' ? 1 : 2;
            same = same && wb::run_command(cmd, cfg, o) == wb::pass;
        }
    }
    for (const char* f : {"landscape.csv", "minima.json", "solution.json", "branch.csv", "branch.json"})
        same = same && slurp(base / "a" / f) == slurp(base / "b" / f);
    std::filesystem::remove_all(base);
    // maximum principle on every converged trace of this run
    converged.push_back(rec);
    int violations = 0;
    for (const auto& r : converged)
        for (double v : r.trace.values)
            if (v < -1 - 1e-9 || v > 1 + 1e-9) {
                ++violations;
                break;
            }
    detail = "jacobian " + fmt("%.1e", jac) + ", dtn " + fmt("%.1e", dtn) + ", reruns " + (same ? "identical" : "DIFFER") + ", " +
             std::to_string(violations) + "/" + std::to_string(converged.size()) + " traces outside [-1,1]";
    return {jac <= 1e-6 && dtn <= 1e-12 && same && violations == 0, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    // criterion 12 runs last so it sees every converged trace
    const std::vector<Criterion> criteria{
        {"disk oracle equivalence", 1, disk_oracle},
        {"rectangle midpoint minimizer", 10, rectangle_midpoint},
        {"t0 root", 1, t0_root},
        {"C_f closed form for sine(a)", 120, cf_oracle},
        {"sine layer profile", 30, layer_oracle},
        {"square branch stability", 600, square_stability},
        {"disk nonconstant solutions unstable", 300, disk_nonexistence},
        {"energy expansion on the smoothed square", 900, gamma_expansion},
        {"truncated u0 energy expansion", 60, truncated_expansion},
        {"hexagon minimizer count", 600, polygon_count},
        {"homoclinic collapse", 300, homoclinic},
        {"property suites", 600, properties},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool ok = o.passed && secs <= c.budget_s;
        if (!ok) ++failed;
        std::printf("%s %2d %s: %s [%.2f s, budget %g s]\n", ok ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
