#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvortex/conformal.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/fourier.hpp"
#include "bvortex/nonlinearity.hpp"
#include "bvortex/parallel.hpp"
#include "bvortex/quadrature.hpp"

namespace bvortex {

// (2/pi) arctan(x/a)
inline double layer_explicit_sine(double a, double x) {
    require(a > 0, ErrorKind::parameter, "layer_explicit_sine needs a > 0");
    return (2.0 / pi) * std::atan(x / a);
}

// Layer v(x) = (2/pi) arctan(x/L) + w(theta), x = L tan(theta/2). The
// correction w is periodic and smooth on the compactified circle, with
// w(pi) = 0 (limits +-1) and w(0) = 0 (v(0) = 0).
struct LayerProfile {
    Nonlinearity nonlinearity;
    double X = 50.0;
    double L = 1.0;
    int n = 0;
    std::vector<double> theta;
    std::vector<double> w;
    std::vector<cplx> coeff;
    std::vector<double> x;  // symmetric nodes spanning [-X, X]
    std::vector<double> v;
    double tail_coeff_minus = 0.0;  // v ~ -1 + c/|x| as x -> -inf
    double tail_coeff_plus = 0.0;   // v ~ 1 - c/x as x -> +inf
    double residual = 0.0;
    double dropped_residual = 0.0;  // residual of the equation at x = 0
    int iterations = 0;

    double theta_of(double xx) const { return 2.0 * std::atan(xx / L); }

    double operator()(double xx) const {
        const double th = theta_of(xx);
        return th / pi + trig_extension(coeff, std::polar(1.0, th)).real();
    }

    // Harmonic extension U(x, y), y >= 0.
    double harmonic(double xx, double y) const {
        const cplx z(xx, y);
        const cplx zeta = (cplx(0, L) - z) / (cplx(0, L) + z);
        return (2.0 / pi) * std::atan2(xx, y + L) + trig_extension(coeff, zeta).real();
    }

    // U_x + i U_y at (x, y), y >= 0.
    cplx gradient(double xx, double y) const {
        const cplx z(xx, y);
        const cplx den = cplx(0, L) + z;
        const cplx zeta = (cplx(0, L) - z) / den;
        const cplx dzeta = cplx(0, -2 * L) / (den * den);
        const double r2 = xx * xx + (y + L) * (y + L);
        const cplx saw = (2.0 / pi) * cplx((y + L) / r2, -xx / r2);
        return std::conj(trig_extension_derivative(coeff, zeta) * dzeta) + saw;
    }
};

struct LayerOptions {
    double L = 0.0;  // compactification length; 0 selects 4x the layer scale
    int max_iter = 60;
    int max_damping = 10;
    double start_scale = 0.0;  // width of the arctan starting profile; 0 selects the layer scale
};

namespace detail {

inline bool increasing(const std::vector<double>& v, std::size_t from, std::size_t to) {
    for (std::size_t j = from + 1; j < to; ++j)
        if (!(v[j] > v[j - 1])) return false;
    return true;
}

}  // namespace detail

inline LayerProfile solve_layer(const Nonlinearity& f, double X, int n, double tol = 1e-10, LayerOptions opt = {}) {
    require(n >= 16 && n % 2 == 0, ErrorKind::parameter, "solve_layer needs an even node count");
    require(X >= 50, ErrorKind::parameter, "solve_layer needs X >= 50");
    LayerProfile p;
    p.nonlinearity = f;
    p.X = X;
    p.n = n;
    const double a0 = f.layer_scale();
    p.L = opt.L > 0 ? opt.L : 4.0 * a0;
    const double L = p.L;
    p.theta.resize(n);
    std::vector<double> xs(n), md(n), saw(n), forcing(n);
    for (int j = 0; j < n; ++j) {
        p.theta[j] = -pi + 2 * pi * j / n;
        const double c = std::cos(0.5 * p.theta[j]);
        md[j] = L / (2 * c * c);
        xs[j] = j == 0 ? 0.0 : L * std::tan(0.5 * p.theta[j]);
        saw[j] = p.theta[j] / pi;
        forcing[j] = j == 0 ? 0.0 : (2.0 / pi) * xs[j] / (L * L + xs[j] * xs[j]);
    }
    // unknowns: all nodes except theta = -pi (x = inf) and theta = 0 (x = 0)
    std::vector<int> idx;
    for (int j = 1; j < n; ++j)
        if (j != n / 2) idx.push_back(j);
    const int m = static_cast<int>(idx.size());

    std::vector<double> w(n, 0.0);
    const double s0 = opt.start_scale > 0 ? opt.start_scale : a0;
    for (int j = 1; j < n; ++j) w[j] = (2.0 / pi) * std::atan(xs[j] / s0) - saw[j];
    w[n / 2] = 0.0;

    const Eigen::MatrixXd lam = dtn_matrix(n);
    auto full_residual = [&](const std::vector<double>& ww) {
        const auto lw = dtn_apply(ww);
        std::vector<double> r(n, 0.0);
        for (int j = 1; j < n; ++j) r[j] = lw[j] / md[j] + forcing[j] - f.f(saw[j] + ww[j]);
        return r;
    };
    auto sup_norm = [&](const std::vector<double>& r) {
        double s = 0;
        for (int k : idx) s = std::max(s, std::abs(r[k]));
        return s;
    };
    auto values = [&](const std::vector<double>& ww) {
        std::vector<double> v(n);
        for (int j = 0; j < n; ++j) v[j] = saw[j] + ww[j];
        return v;
    };

    std::vector<double> r = full_residual(w);
    double rn = sup_norm(r);
    std::vector<double> history{rn};
    int it = 0;
    while (rn > tol) {
        if (it >= opt.max_iter) throw ConvergenceError("solve_layer: Newton stagnated", history, rn);
        Eigen::MatrixXd J(m, m);
        Eigen::VectorXd rhs(m);
        for (int a = 0; a < m; ++a) {
            const int j = idx[a];
            for (int b = 0; b < m; ++b) J(a, b) = lam(j, idx[b]) / md[j];
            J(a, a) -= f.fprime(saw[j] + w[j]);
            rhs(a) = -r[j];
        }
        const Eigen::VectorXd delta = J.partialPivLu().solve(rhs);
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k <= opt.max_damping; ++k) {
            std::vector<double> trial = w;
            for (int a = 0; a < m; ++a) trial[idx[a]] += lambda * delta(a);
            const auto tv = values(trial);
            if (detail::increasing(tv, 1, n)) {
                auto tr = full_residual(trial);
                const double tn = sup_norm(tr);
                if (tn < rn || tn <= tol) {
                    w = std::move(trial);
                    r = std::move(tr);
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        ++it;
        history.push_back(rn);
        if (!accepted)
            throw ConvergenceError("solve_layer: no monotone descent step after damping", history, rn);
    }
    p.w = w;
    p.residual = rn;
    p.dropped_residual = std::abs(dtn_apply(w)[n / 2] / md[n / 2] - f.f(0.0));
    p.iterations = it;
    p.coeff = trig_coefficients(w, -pi);

    // export nodes inside [-X, X] plus the two endpoints
    p.x.push_back(-X);
    p.v.push_back(p(-X));
    for (int j = 1; j < n; ++j) {
        if (std::abs(xs[j]) < X) {
            p.x.push_back(xs[j]);
            p.v.push_back(saw[j] + w[j]);
        }
    }
    p.x.push_back(X);
    p.v.push_back(p(X));

    // least-squares tail fits over [X/4, X]
    double sp = 0, sm = 0, s2p = 0, s2m = 0;
    for (std::size_t k = 0; k < p.x.size(); ++k) {
        const double ax = std::abs(p.x[k]);
        if (ax < 0.25 * X) continue;
        if (p.x[k] > 0) {
            sp += (1.0 - p.v[k]) / ax;
            s2p += 1.0 / (ax * ax);
        } else {
            sm += (p.v[k] + 1.0) / ax;
            s2m += 1.0 / (ax * ax);
        }
    }
    p.tail_coeff_plus = s2p > 0 ? sp / s2p : 0.0;
    p.tail_coeff_minus = s2m > 0 ? sm / s2m : 0.0;
    return p;
}

// Cross-check discretization: odd, antiperiodic extension of period 4X on a
// uniform grid, with the periodic half-Laplacian symbol. Returns the profile
// on the m/2 positive cell centres of [0, X].
struct TruncatedLayer {
    std::vector<double> x;
    std::vector<double> v;
    double residual = 0.0;
};

inline TruncatedLayer solve_layer_truncated(const Nonlinearity& f, double X, int m, double tol = 1e-10) {
    require(f.odd(), ErrorKind::capability, "truncated layer route needs an odd nonlinearity");
    require(m >= 16 && m % 2 == 0, ErrorKind::parameter, "truncated layer route needs an even node count");
    const int n2 = 2 * m, half = m / 2;
    const double h = 2 * X / m;
    std::vector<cplx> symbol(n2);
    for (int k = 0; k < n2; ++k) symbol[k] = std::abs(wavenumber(k, n2)) * (2 * pi / (4 * X));
    const auto row = fft_inverse(symbol);  // circulant column
    // extended index i <-> x_i = -X + (i + 1/2) h on [-X, 3X)
    auto fold = [&](int i, int& unknown) {
        double xi = -X + (i + 0.5) * h;
        double sign = 1.0;
        if (xi > X) {
            xi -= 2 * X;
            sign = -1.0;
        }
        if (xi < 0) {
            xi = -xi;
            sign = -sign;
        }
        unknown = static_cast<int>(std::lround(xi / h - 0.5));
        return sign;
    };
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(half, half);
    for (int a = 0; a < half; ++a) {
        const int ia = m / 2 + a;  // x = (a + 1/2) h
        for (int i = 0; i < n2; ++i) {
            int u;
            const double s = fold(i, u);
            A(a, u) += s * row[((ia - i) % n2 + n2) % n2];
        }
    }
    TruncatedLayer out;
    Eigen::VectorXd v(half);
    const double a0 = f.layer_scale();
    for (int a = 0; a < half; ++a) {
        out.x.push_back((a + 0.5) * h);
        v(a) = (2.0 / pi) * std::atan(out.x[a] / a0);
    }
    std::vector<double> history;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd r = A * v;
        for (int a = 0; a < half; ++a) r(a) -= f.f(v(a));
        const double rn = r.lpNorm<Eigen::Infinity>();
        history.push_back(rn);
        if (rn <= tol) {
            out.residual = rn;
            out.v.assign(v.data(), v.data() + half);
            return out;
        }
        Eigen::MatrixXd J = A;
        for (int a = 0; a < half; ++a) J(a, a) -= f.fprime(v(a));
        v -= J.partialPivLu().solve(r);
    }
    throw ConvergenceError("solve_layer_truncated: Newton stagnated", history, history.back());
}

// ---------------------------------------------------------------------------
// Truncated energy I(eps, rho) = 1/2 int_{B_rho^+} |grad U_eps|^2 + (1/eps) int_{-rho}^{rho} G(U_eps),
// U_eps(x, y) = U(x/eps, y/eps). Quadrature runs in physical coordinates.

struct LayerEnergy {
    double dirichlet = 0.0;
    double potential = 0.0;
    double total() const { return dirichlet + potential; }
};

inline LayerEnergy layer_energy(const LayerProfile& p, double eps, double rho) {
    require(eps > 0 && rho > 0, ErrorKind::parameter, "layer_energy needs eps, rho > 0");
    if (rho / eps > 0.8 * p.X) throw Error(ErrorKind::truncation, "layer_energy: radius too close to the truncation X");
    const double Ls = p.L * eps;  // feature scale in physical units
    std::vector<double> redges{0.0};
    for (double e : {0.25 * Ls, 0.5 * Ls, Ls})
        if (e < rho) redges.push_back(e);
    for (double e = 1.5 * redges.back(); e < rho; e *= 1.5) redges.push_back(e);
    redges.push_back(rho);
    const auto rrule = quad::gauss_panels(redges);
    const auto arule = quad::gauss_panels(quad::graded_edges(0.0, pi, std::min(0.5, 0.25 * Ls / rho)));

    LayerEnergy e;
    for (std::size_t i = 0; i < rrule.nodes.size(); ++i) {
        const double r = rrule.nodes[i];
        double ring = 0.0;
        for (std::size_t k = 0; k < arule.nodes.size(); ++k) {
            const double phi = arule.nodes[k];
            const cplx g = p.gradient(r * std::cos(phi) / eps, r * std::sin(phi) / eps) / eps;
            ring += arule.weights[k] * std::norm(g);
        }
        e.dirichlet += 0.5 * rrule.weights[i] * r * ring;
    }
    // potential: int_{-R}^{R} G(U(s)) ds with s = L tan(theta/2)
    const double R = rho / eps;
    const double tr = 2.0 * std::atan(R / p.L);
    std::vector<double> tedges;
    for (int k = 0; k <= 64; ++k) tedges.push_back(-tr + 2 * tr * k / 64);
    const auto trule = quad::gauss_panels(tedges);
    for (std::size_t k = 0; k < trule.nodes.size(); ++k) {
        const double th = trule.nodes[k];
        const double c = std::cos(0.5 * th);
        const double v = th / pi + trig_extension(p.coeff, std::polar(1.0, th)).real();
        e.potential += trule.weights[k] * p.nonlinearity.G(v) * p.L / (2 * c * c);
    }
    return e;
}

inline double layer_energy_truncated(const LayerProfile& p, double R) { return layer_energy(p, 1.0, R).total(); }

struct CfFit {
    std::vector<double> R_list;
    std::vector<double> I_values;
    std::vector<double> offsets;  // I(1,R) - (2/pi) log R
    double cf_estimate = 0.0;
    double raw_last = 0.0;  // offset at the largest radius, before extrapolation
    double slope = 0.0;     // d offset / d log R over the last two radii
    std::string warning;
};

struct CfOptions {
    int n = 512;
    double slope_threshold = 1e-2;
    int threads = 1;
};

inline CfFit compute_cf(const Nonlinearity& f, std::vector<double> R_list = {20, 40, 80, 160, 320}, CfOptions opt = {}) {
    require(R_list.size() >= 2, ErrorKind::parameter, "compute_cf needs at least two radii");
    for (std::size_t k = 1; k < R_list.size(); ++k)
        require(R_list[k] > R_list[k - 1], ErrorKind::parameter, "compute_cf radii must increase");
    require(R_list.front() > 0 && R_list.back() >= 10 * R_list.front(), ErrorKind::parameter,
            "compute_cf radii must span at least one decade");
    const double X = std::max(50.0, R_list.back() / 0.8);
    const auto profile = solve_layer(f, X, opt.n);
    CfFit fit;
    fit.R_list = R_list;
    fit.I_values.resize(R_list.size());
    parallel_for(R_list.size(), opt.threads, [&](std::size_t k) { fit.I_values[k] = layer_energy_truncated(profile, R_list[k]); });
    for (std::size_t k = 0; k < R_list.size(); ++k) fit.offsets.push_back(fit.I_values[k] - (2.0 / pi) * std::log(R_list[k]));
    const std::size_t K = R_list.size();
    fit.raw_last = fit.offsets.back();
    fit.slope = (fit.offsets[K - 1] - fit.offsets[K - 2]) / std::log(R_list[K - 1] / R_list[K - 2]);
    // least squares offset = C + d/R over the last (up to) three radii
    const std::size_t from = K >= 3 ? K - 3 : 0;
    Eigen::MatrixXd A(K - from, 2);
    Eigen::VectorXd b(K - from);
    for (std::size_t k = from; k < K; ++k) {
        A(k - from, 0) = 1.0;
        A(k - from, 1) = 1.0 / R_list[k];
        b(k - from) = fit.offsets[k];
    }
    fit.cf_estimate = A.colPivHouseholderQr().solve(b)(0);
    if (std::abs(fit.slope) > opt.slope_threshold)
        fit.warning = "offset I(1,R) - (2/pi) log R not flat over the last radii (slope " + std::to_string(fit.slope) + ")";
    return fit;
}

// (2/pi)(1 - log a - a log 2)
inline double cf_closed_form(double a) {
    require(a > 0, ErrorKind::parameter, "cf_closed_form needs a > 0");
    return (2.0 / pi) * (1.0 - std::log(a) - a * std::log(2.0));
}

// ---------------------------------------------------------------------------
// Relaxation of -1 plus a bump under the semi-implicit gradient flow
// v_t = -(-Delta)^{1/2} v + f(v) on the periodic grid of [-X, X).

struct HomoclinicVerdict {
    std::string verdict;  // collapsed_to_constant | stationary_nonconstant | inconclusive
    int iterations = 0;
    double oscillation = 0.0;
    double level = 0.0;  // mean of the final iterate
};

struct HomoclinicOptions {
    int nodes = 1024;
    double dt = 0.25;
    int max_iter = 200000;
    double bump_width = 0.0;  // 0 selects X/10
};

inline HomoclinicVerdict homoclinic_probe(const Nonlinearity& f, double bump_height, double X = 50.0, double tol = 1e-8,
                                          HomoclinicOptions opt = {}) {
    require(bump_height >= 0 && bump_height < 2, ErrorKind::parameter, "bump height must lie in [0, 2)");
    require(X > 0 && tol > 0, ErrorKind::parameter, "homoclinic_probe needs X, tol > 0");
    const int m = opt.nodes;
    const double width = opt.bump_width > 0 ? opt.bump_width : X / 10;
    require(bump_height * std::exp(-(X / width) * (X / width)) < 1e-12, ErrorKind::parameter,
            "bump does not return to -1 at +-X");
    std::vector<double> v(m);
    for (int j = 0; j < m; ++j) {
        const double x = -X + 2 * X * j / m;
        v[j] = -1.0 + bump_height * std::exp(-(x / width) * (x / width));
    }
    std::vector<double> denom(m);
    for (int k = 0; k < m; ++k) denom[k] = 1.0 + opt.dt * std::abs(wavenumber(k, m)) * (pi / X);
    auto osc = [](const std::vector<double>& u) {
        auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        return *hi - *lo;
    };
    HomoclinicVerdict out;
    for (int it = 0;; ++it) {
        out.oscillation = osc(v);
        out.iterations = it;
        if (out.oscillation < tol) {
            out.verdict = "collapsed_to_constant";
            break;
        }
        if (it >= opt.max_iter) {
            out.verdict = "inconclusive";
            break;
        }
        std::vector<double> rhs(m);
        for (int j = 0; j < m; ++j) rhs[j] = v[j] + opt.dt * f.f(v[j]);
        auto c = fft_forward(rhs);
        for (int k = 0; k < m; ++k) c[k] /= denom[k];
        auto next = fft_inverse(c);
        double change = 0;
        for (int j = 0; j < m; ++j) change = std::max(change, std::abs(next[j] - v[j]));
        v = std::move(next);
        if (change / opt.dt < 1e-13) {
            out.oscillation = osc(v);
            out.iterations = it + 1;
            out.verdict = out.oscillation < tol ? "collapsed_to_constant" : "stationary_nonconstant";
            break;
        }
    }
    double s = 0;
    for (double u : v) s += u;
    out.level = s / m;
    return out;
}

}  // namespace bvortex
