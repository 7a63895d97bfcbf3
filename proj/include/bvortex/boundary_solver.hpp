#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvortex/conformal.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/fourier.hpp"
#include "bvortex/layer.hpp"
#include "bvortex/nonlinearity.hpp"

namespace bvortex {

// Trace samples u(theta_j), theta_j = 2 pi j/n, on the circle model, with the
// conformal weight |d z/d theta| at the same nodes.
struct BoundaryField {
    int n_modes = 0;
    std::vector<double> values;
    std::vector<double> weight;

    double theta(int j) const { return 2 * pi * j / n_modes; }
};

// Circle model of a domain: the weight is the boundary stretch of the map
// from the unit disk.
struct CircleModel {
    DomainSpec domain;
    int n = 0;
    std::vector<double> weight;
    // sc_polygon only: theta -> P = center + half_width tan(theta/2)
    double center = 0.0;
    double half_width = 1.0;

    double theta(int j) const { return 2 * pi * j / n; }

    // Parameter of the underlying domain for a circle angle.
    double domain_parameter(double th) const {
        if (domain.as<ScPolygon>()) return center + half_width * std::tan(0.5 * th);
        return th;
    }
    double circle_angle(double t) const {
        if (domain.as<ScPolygon>()) return 2.0 * std::atan((t - center) / half_width);
        return t;
    }

    BoundaryField field(std::vector<double> values) const {
        require(static_cast<int>(values.size()) == n, ErrorKind::parameter, "trace size does not match the model");
        return {n, std::move(values), weight};
    }
    BoundaryField constant(double c) const { return field(std::vector<double>(n, c)); }
};

inline CircleModel make_circle_model(const DomainSpec& d, int n) {
    require(n >= 8 && n % 2 == 0, ErrorKind::parameter, "n_modes must be even");
    CircleModel m;
    m.domain = d;
    m.n = n;
    m.weight.resize(n);
    if (d.as<Rectangle>())
        throw Error(ErrorKind::capability, "boundary solver: rectangle has no conformal map (domain kind rectangle)");
    if (auto* rp = d.as<RegularPolygonDisk>()) {
        if (rp->r >= 1.0)
            throw Error(ErrorKind::capability, "boundary solver: exact polygon corners are singular; use r < 1");
    }
    if (auto* sc = d.as<ScPolygon>()) {
        m.center = 0.5 * (sc->prevertices.front() + sc->prevertices.back());
        m.half_width = std::max(0.5 * (sc->prevertices.back() - sc->prevertices.front()), 1.0);
        for (int j = 0; j < n; ++j) {
            const double h = 0.5 * m.theta(j), s = std::sin(h), c = std::cos(h);
            double logsum = 0.0;
            for (std::size_t k = 0; k < sc->prevertices.size(); ++k) {
                const cplx term = m.half_width * s + cplx(m.center - sc->prevertices[k], sc->b) * c;
                logsum -= sc->angles[k] * std::log(std::abs(term));
            }
            m.weight[j] = 0.5 * m.half_width * std::exp(logsum);
        }
        return m;
    }
    for (int j = 0; j < n; ++j) m.weight[j] = map_deriv(d, m.theta(j));
    for (double w : m.weight)
        require(std::isfinite(w) && w > 0, ErrorKind::capability, "boundary solver: corner-singular weight");
    return m;
}

// ---------------------------------------------------------------------------

struct Energy {
    double dirichlet = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

// Dirichlet part pi sum_k |k| |u_k|^2 with u_k = DFT/n (equal to 1/2 int |grad u|^2
// of the harmonic extension), potential part (2 pi/n) sum_j weight_j G(u_j)/eps.
inline Energy discrete_energy(const BoundaryField& u, const Nonlinearity& f, double eps) {
    const int n = u.n_modes;
    const auto c = fft_forward(u.values);
    Energy e;
    for (int k = 0; k < n; ++k) e.dirichlet += std::abs(wavenumber(k, n)) * std::norm(c[k]);
    e.dirichlet *= pi / (static_cast<double>(n) * n);
    if (!u.weight.empty()) {
        for (int j = 0; j < n; ++j) e.potential += u.weight[j] * f.G(u.values[j]);
        e.potential *= 2 * pi / (n * eps);
    }
    e.total = e.dirichlet + e.potential;
    return e;
}

inline std::vector<double> residual(const BoundaryField& u, const Nonlinearity& f, double eps) {
    for (double w : u.weight)
        require(std::isfinite(w), ErrorKind::capability, "residual: corner-singular weight");
    auto r = dtn_apply(u.values);
    for (int j = 0; j < u.n_modes; ++j) r[j] -= u.weight[j] / eps * f.f(u.values[j]);
    return r;
}

inline Eigen::MatrixXd jacobian(const BoundaryField& u, const Nonlinearity& f, double eps) {
    Eigen::MatrixXd J = dtn_matrix(u.n_modes);
    for (int j = 0; j < u.n_modes; ++j) J(j, j) -= u.weight[j] / eps * f.fprime(u.values[j]);
    return J;
}

// Sign changes of the trace by linear interpolation, as circle angles.
inline std::vector<double> extract_vortices(const BoundaryField& u) {
    std::vector<double> out;
    const int n = u.n_modes;
    const double h = 2 * pi / n;
    for (int j = 0; j < n; ++j) {
        const double a = u.values[j], b = u.values[(j + 1) % n];
        if ((a < 0 && b >= 0) || (a >= 0 && b < 0)) {
            if (a == 0.0) {
                out.push_back(j * h);
                continue;
            }
            out.push_back(j * h + h * a / (a - b));
        }
    }
    return out;
}

// Interval [lo, hi] of circle angles; hi may exceed 2 pi when it wraps.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double t) const {
        for (double s : {t, t + 2 * pi, t - 2 * pi})
            if (s >= lo && s <= hi) return true;
        return false;
    }
};

inline std::vector<Interval> transition_set(const BoundaryField& u, double t_star) {
    const int n = u.n_modes;
    const double h = 2 * pi / n;
    std::vector<Interval> out;
    auto inside = [&](int j) { return std::abs(u.values[((j % n) + n) % n]) <= t_star; };
    int start = -1;
    for (int j = 0; j < n; ++j)
        if (!inside(j)) {
            start = j;
            break;
        }
    if (start < 0) return {{0.0, 2 * pi}};
    // crossing position between nodes j (outside) and j+1 (inside) or the reverse
    auto cross = [&](int j) {
        const double a = std::abs(u.values[((j % n) + n) % n]), b = std::abs(u.values[(((j + 1) % n) + n) % n]);
        return (j + (a - t_star) / (a - b)) * h;
    };
    for (int k = 0; k < n; ++k) {
        const int j = start + k;
        if (!inside(j) && inside(j + 1)) {
            int e = j + 1;
            while (inside(e + 1)) ++e;
            out.push_back({cross(j), cross(e)});
        }
    }
    for (auto& iv : out) {
        while (iv.lo >= 2 * pi) {
            iv.lo -= 2 * pi;
            iv.hi -= 2 * pi;
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

// ---------------------------------------------------------------------------

struct SolutionRecord {
    double eps = 0.0;
    BoundaryField trace;
    double residual_norm = 0.0;
    std::vector<double> residual_history;
    std::vector<double> energy_history;
    Energy energy;
    std::vector<double> spectrum_head;
    std::vector<double> vortices;
    std::vector<Interval> transition;
    bool stable = false;
    bool max_principle_ok = true;
    int iterations = 0;

    double spec_tol() const { return 1e-8 / eps; }
    double lambda_min() const {
        return spectrum_head.empty() ? std::numeric_limits<double>::quiet_NaN() : spectrum_head.front();
    }
    bool nonconstant(double threshold = 1e-6) const {
        auto [lo, hi] = std::minmax_element(trace.values.begin(), trace.values.end());
        return *hi - *lo > threshold;
    }
};

struct SolverOptions {
    double tol = 1e-8;
    int max_iter = 60;
    double clamp = 1.2;
    bool energy_descent = false;  // line search on the energy instead of the residual
    int max_backtracks = 20;
    int k_spectrum = 6;
    bool compute_spectrum = true;
};

inline std::vector<double> stability_spectrum(const SolutionRecord& rec, const Nonlinearity& f, int k) {
    const Eigen::MatrixXd J = jacobian(rec.trace, f, rec.eps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "stability_spectrum: eigensolver failed (matrix norm " + std::to_string(J.norm()) + ")");
    const auto& ev = es.eigenvalues();
    std::vector<double> out;
    for (int i = 0; i < std::min<int>(k, static_cast<int>(ev.size())); ++i) out.push_back(ev(i));
    return out;
}

inline void finalize_record(SolutionRecord& rec, const Nonlinearity& f, const SolverOptions& opt) {
    rec.energy = discrete_energy(rec.trace, f, rec.eps);
    rec.vortices = extract_vortices(rec.trace);
    rec.transition = transition_set(rec.trace, f.t_star);
    rec.max_principle_ok = true;
    for (double v : rec.trace.values)
        if (v < -1 - 1e-9 || v > 1 + 1e-9) rec.max_principle_ok = false;
    if (opt.compute_spectrum) {
        rec.spectrum_head = stability_spectrum(rec, f, opt.k_spectrum);
        rec.stable = rec.lambda_min() >= -rec.spec_tol();
    }
}

inline SolutionRecord newton_solve(const BoundaryField& initial, const Nonlinearity& f, double eps, SolverOptions opt = {}) {
    require(eps > 0, ErrorKind::parameter, "newton_solve needs eps > 0");
    const int n = initial.n_modes;
    require(static_cast<int>(initial.values.size()) == n && static_cast<int>(initial.weight.size()) == n,
            ErrorKind::parameter, "newton_solve: malformed field");
    for (double v : initial.values)
        require(v >= -1 - 1e-12 && v <= 1 + 1e-12, ErrorKind::parameter, "newton_solve: initial trace outside [-1,1]");
    SolutionRecord rec;
    rec.eps = eps;
    rec.trace = initial;
    auto& u = rec.trace.values;
    const Eigen::MatrixXd lam = dtn_matrix(n);
    const double quad_w = 2 * pi / n;

    auto r = residual(rec.trace, f, eps);
    auto sup = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };
    auto l2 = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    rec.residual_history.push_back(sup(r));
    rec.energy_history.push_back(discrete_energy(rec.trace, f, eps).total);

    int it = 0;
    while (rec.residual_history.back() > opt.tol) {
        if (it >= opt.max_iter)
            throw ConvergenceError("newton_solve: max_iter reached", rec.residual_history, rec.residual_history.back());
        Eigen::MatrixXd J = lam;
        Eigen::VectorXd rhs(n);
        for (int j = 0; j < n; ++j) {
            J(j, j) -= rec.trace.weight[j] / eps * f.fprime(u[j]);
            rhs(j) = -r[j];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-15))
            throw Error(ErrorKind::rank, "newton_solve: singular Jacobian at eps " + std::to_string(eps));
        Eigen::VectorXd delta = lu.solve(rhs);

        double slope = 0.0;  // directional derivative of the energy along delta
        if (opt.energy_descent) {
            slope = quad_w * (-rhs).dot(delta);
            if (slope >= 0) {
                // not a descent direction: precondition the gradient with an SPD operator
                Eigen::MatrixXd M = lam;
                for (int j = 0; j < n; ++j)
                    M(j, j) += rec.trace.weight[j] / eps * std::max(std::abs(f.fprime(u[j])), 0.1);
                delta = M.llt().solve(rhs);
                slope = quad_w * (-rhs).dot(delta);
            }
        }

        const double e0 = rec.energy_history.back();
        const double r0 = l2(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k <= opt.max_backtracks; ++k) {
            BoundaryField trial = rec.trace;
            for (int j = 0; j < n; ++j)
                trial.values[j] = std::clamp(u[j] + lambda * delta(j), -opt.clamp, opt.clamp);
            auto tr = residual(trial, f, eps);
            bool ok;
            double te = 0.0;
            if (opt.energy_descent) {
                te = discrete_energy(trial, f, eps).total;
                ok = te <= e0 + 1e-4 * lambda * slope || (sup(tr) <= opt.tol && te <= e0);
            } else {
                ok = l2(tr) <= (1 - 1e-4 * lambda) * r0 || sup(tr) <= opt.tol;
            }
            if (ok) {
                rec.trace = std::move(trial);
                r = std::move(tr);
                if (!opt.energy_descent) te = discrete_energy(rec.trace, f, eps).total;
                rec.energy_history.push_back(te);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        ++it;
        rec.residual_history.push_back(sup(r));
        if (!accepted)
            throw ConvergenceError("newton_solve: line search failed", rec.residual_history, rec.residual_history.back());
    }
    rec.residual_norm = rec.residual_history.back();
    rec.iterations = it;
    finalize_record(rec, f, opt);
    return rec;
}

// ---------------------------------------------------------------------------
// Initial guess from rescaled layer profiles glued into chi^{p,q}

namespace detail {

// Cumulative arc length S(theta) = int_0^theta weight, from the trigonometric interpolant.
struct ArcLength {
    std::vector<cplx> c;
    int n = 0;
    double operator()(double th) const {
        double s = c[0].real() * th;
        for (int k = 1; k <= n / 2; ++k) {
            const double fac = k == n / 2 ? 1.0 : 2.0;
            s += fac * (c[k] * std::polar(1.0, k * th) / cplx(0, k)).real();
        }
        return s - offset;
    }
    double offset = 0.0;
    double total() const { return c[0].real() * 2 * pi; }
};

inline ArcLength arc_length(const std::vector<double>& weight) {
    ArcLength a;
    a.n = static_cast<int>(weight.size());
    a.c = trig_coefficients(weight);
    a.offset = 0.0;
    a.offset = a(0.0);
    return a;
}

}  // namespace detail

struct GuessOptions {
    double rho = 0.0;  // window half-width in arc length; 0 selects a fifth of the shorter arc
};

// chi^{p,q}: -1 on the counter-clockwise arc from p to q, +1 elsewhere.
inline BoundaryField chi_pq(const CircleModel& m, double theta_p, double theta_q) {
    std::vector<double> v(m.n);
    for (int j = 0; j < m.n; ++j) {
        const double a = detail::wrap(m.theta(j) - theta_p, 2 * pi), b = detail::wrap(theta_q - theta_p, 2 * pi);
        v[j] = a < b ? -1.0 : 1.0;
    }
    return m.field(std::move(v));
}

inline BoundaryField initial_guess(const CircleModel& m, double theta_p, double theta_q, double eps, const LayerProfile& profile,
                                   GuessOptions opt = {}) {
    require(eps > 0, ErrorKind::parameter, "initial_guess needs eps > 0");
    const double gap = detail::circular_distance(theta_p, theta_q, 2 * pi);
    if (gap < 1e-12) throw Error(ErrorKind::diagonal, "initial_guess: p = q");
    const auto S = detail::arc_length(m.weight);
    const double P = S.total();
    auto arc = [&](double from, double to) {  // ccw arc length from -> to
        double d = S(to) - S(from);
        while (d < 0) d += P;
        while (d >= P) d -= P;
        return d;
    };
    const double a1 = arc(theta_p, theta_q), a2 = P - a1;
    const double rho = opt.rho > 0 ? opt.rho : 0.2 * std::min(a1, a2);
    if (4 * rho >= std::min(a1, a2)) throw Error(ErrorKind::geometry, "initial_guess: layer windows overlap");
    auto cutoff = [&](double s) {
        const double a = std::abs(s);
        if (a <= rho) return 1.0;
        if (a >= 2 * rho) return 0.0;
        const double c = std::cos(0.5 * pi * (a - rho) / rho);
        return c * c;
    };
    auto chi = chi_pq(m, theta_p, theta_q);
    std::vector<double> v = chi.values;
    for (int j = 0; j < m.n; ++j) {
        const double th = m.theta(j);
        double sp = arc(theta_p, th);  // signed arc length from p in (-P/2, P/2]
        if (sp > 0.5 * P) sp -= P;
        double sq = arc(theta_q, th);
        if (sq > 0.5 * P) sq -= P;
        if (std::abs(sp) < 2 * rho) v[j] += cutoff(sp) * (profile(-sp / eps) - v[j]);
        else if (std::abs(sq) < 2 * rho) v[j] += cutoff(sq) * (profile(sq / eps) - v[j]);
        v[j] = std::clamp(v[j], -1.0, 1.0);
    }
    return m.field(std::move(v));
}

// ---------------------------------------------------------------------------
// Continuation in eps

struct Branch {
    std::vector<SolutionRecord> records;
    std::vector<std::pair<double, double>> flips;  // consecutive eps with differing stability
    std::vector<std::string> log;
};

inline Branch continuation(const Nonlinearity& f, const SolutionRecord& seed, double eps_end, int n_steps, SolverOptions opt = {}) {
    require(eps_end > 0 && n_steps >= 1, ErrorKind::parameter, "continuation needs eps_end > 0, n_steps >= 1");
    Branch br;
    br.records.push_back(seed);
    const double eps_start = seed.eps;
    const double ratio = std::pow(eps_end / eps_start, 1.0 / n_steps);
    for (int k = 1; k <= n_steps; ++k) {
        const double target = k == n_steps ? eps_end : eps_start * std::pow(ratio, k);
        // reach target, halving the logarithmic step on failure
        int halvings = 0;
        while (true) {
            const double from = br.records.back().eps;
            const double step = std::log(target / from);
            const double next = from * std::exp(step / std::pow(2.0, halvings));
            try {
                auto guess = br.records.back().trace;
                for (double& v : guess.values) v = std::clamp(v, -1.0, 1.0);
                br.records.push_back(newton_solve(guess, f, next, opt));
                if (next == target || std::abs(next / target - 1) < 1e-14) break;
                halvings = std::max(0, halvings - 1);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::convergence && e.kind() != ErrorKind::rank) throw;
                ++halvings;
                br.log.push_back("step to eps " + std::to_string(next) + " failed (" + e.what() + "); halving");
                if (halvings > 6) throw ConvergenceError("continuation: step failed after 6 halvings", {}, next);
            }
        }
    }
    for (std::size_t k = 1; k < br.records.size(); ++k)
        if (br.records[k].stable != br.records[k - 1].stable) br.flips.emplace_back(br.records[k - 1].eps, br.records[k].eps);
    return br;
}

// Bisection of a stability flip between a record and a second eps.
inline std::pair<double, double> refine_flip(const Nonlinearity& f, const SolutionRecord& a, double eps_b, int iterations,
                                             SolverOptions opt = {}) {
    SolutionRecord lo = a;
    double hi = eps_b;
    for (int i = 0; i < iterations; ++i) {
        const double mid = std::sqrt(lo.eps * hi);
        auto rec = newton_solve(lo.trace, f, mid, opt);
        if (rec.stable == a.stable) lo = rec;
        else hi = mid;
    }
    return {lo.eps, hi};
}

}  // namespace bvortex
