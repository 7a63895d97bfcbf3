#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "bvortex/boundary_solver.hpp"
#include "bvortex/conformal.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/quadrature.hpp"
#include "bvortex/renormalized_energy.hpp"

namespace bvortex {

inline Energy total_energy(const SolutionRecord& rec, const Nonlinearity& f) { return discrete_energy(rec.trace, f, rec.eps); }
inline Energy total_energy(const BoundaryField& u, const Nonlinearity& f, double eps) { return discrete_energy(u, f, eps); }

// ---------------------------------------------------------------------------
// Truncated Dirichlet energy of the +-1 harmonic extension u0^{p,q}.
//
// In strip coordinates w = log((zeta - zeta_p)/(zeta - zeta_q)) of the
// canonical model, u0 is affine in Im w and the level lines Im w = eta run
// from p to q. The energy of u0 outside the two physical balls is therefore
// (2/pi^2) times the area of the strip portion left after excision, i.e.
// (2/pi^2) int (tau_q(eta) - tau_p(eta)) d eta, where tau_p, tau_q are the
// exit/entry values of Re w on the ball boundaries.

namespace detail {

struct StripModel {
    cplx zp, zq;        // model points
    cplx p, q;          // physical points
    double mdp, mdq;    // map stretch at p, q
    double eta_lo = 0;  // interior is eta_lo < Im w < eta_lo + pi
    std::function<cplx(cplx)> physical;
};

inline StripModel strip_model(const DomainSpec& d, const BoundaryPoint& bp, const BoundaryPoint& bq) {
    StripModel m;
    cplx interior, boundary;
    if (d.circle_model()) {
        m.zp = std::polar(1.0, bp.t);
        m.zq = std::polar(1.0, bq.t);
        const double gap = wrap(bq.t - bp.t, 2 * pi);
        boundary = std::polar(1.0, bp.t + 0.5 * gap);
        interior = 0.0;
        if (auto* rp = d.as<RegularPolygonDisk>()) {
            const int N = rp->N;
            const double r = rp->r, s = regular_polygon_scale(N);
            m.physical = [N, r, s](cplx z) { return s * regular_polygon_map(N, r * z); };
        } else {
            m.physical = [](cplx z) { return z; };
        }
    } else if (auto* sc = d.as<ScPolygon>()) {
        m.zp = cplx(bp.t, sc->b);
        m.zq = cplx(bq.t, sc->b);
        boundary = cplx(0.5 * (bp.t + bq.t), sc->b);
        interior = cplx(0.5 * (bp.t + bq.t), sc->b + 0.5 * std::abs(bq.t - bp.t));
        ScPolygon copy = *sc;
        m.physical = [copy](cplx z) { return sc_map(copy, z); };
    } else {
        throw Error(ErrorKind::capability, "truncated_u0_energy: no conformal map for domain kind " + d.kind_name());
    }
    m.p = bp.z;
    m.q = bq.z;
    m.mdp = bp.map_deriv;
    m.mdq = bq.map_deriv;
    auto eta = [&](cplx z) { return std::arg((z - m.zp) / (z - m.zq)); };
    const double eb = eta(boundary), ec = eta(interior);
    const double delta = wrap(ec - eb, 2 * pi);
    m.eta_lo = delta < pi ? eb : eb - pi;
    return m;
}

inline cplx strip_inverse(const StripModel& m, cplx w) {
    const cplx e = std::exp(w);
    return (m.zp - m.zq * e) / (1.0 - e);
}

// Solve |physical(zeta(tau + i eta)) - centre| = rho near the given end.
inline double excision_tau(const StripModel& m, double eta, double rho, bool at_p) {
    const double chord = std::abs(m.zp - m.zq);
    auto g = [&](double tau) {
        const cplx z = strip_inverse(m, cplx(tau, eta));
        return std::abs(m.physical(z) - (at_p ? m.p : m.q)) - rho;
    };
    // sign convention: g < 0 inside the ball
    double guess = at_p ? std::log(rho / (m.mdp * chord)) : -std::log(rho / (m.mdq * chord));
    double inner = at_p ? guess - 2.0 : guess + 2.0, outer = at_p ? guess + 2.0 : guess - 2.0;
    for (int k = 0; k < 40 && g(inner) >= 0; ++k) inner += at_p ? -2.0 : 2.0;
    for (int k = 0; k < 40 && g(outer) <= 0; ++k) outer += at_p ? 2.0 : -2.0;
    double a = std::min(inner, outer), b = std::max(inner, outer);
    boost::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (res.first + res.second);
}

}  // namespace detail

inline double truncated_u0_energy(const DomainSpec& d, const BoundaryPoint& p, const BoundaryPoint& q, double rho,
                                  double tol = 1e-10) {
    require(rho > 0, ErrorKind::parameter, "truncated_u0_energy needs rho > 0");
    if (std::abs(p.z - q.z) <= 2 * rho) throw Error(ErrorKind::geometry, "truncated_u0_energy: excision balls overlap");
    const auto m = detail::strip_model(d, p, q);
    auto width = [&](double eta) {
        return detail::excision_tau(m, eta, rho, false) - detail::excision_tau(m, eta, rho, true);
    };
    const double area = quad::integrate(width, m.eta_lo, m.eta_lo + pi, tol).value;
    return 2.0 / (pi * pi) * area;
}

// ---------------------------------------------------------------------------
// Expansion fits

struct ExpansionFit {
    std::vector<double> abscissa;  // log(1/eps) or log(1/rho)
    std::vector<double> ordinate;
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
    double target_slope = 4.0 / pi;
    double target_intercept = 0.0;
    std::string model = "linear";  // linear | linear+eps
    double correction = 0.0;       // coefficient of the eps (or rho) term
    double plain_slope = 0.0;      // two-parameter fit, always reported
    double plain_intercept = 0.0;
    double slope_tolerance = 0.03;  // relative
    double intercept_tolerance = 0.1;

    double slope_error() const { return (fitted_slope - target_slope) / target_slope; }
    double intercept_gap() const { return fitted_intercept - target_intercept; }
    bool slope_ok() const { return std::abs(slope_error()) <= slope_tolerance; }
    bool intercept_ok() const { return std::abs(intercept_gap()) <= intercept_tolerance; }
};

struct FitOptions {
    bool correction_term = true;  // include c*eps in the model when >= 4 points
    double slope_tolerance = 0.03;
    double intercept_tolerance = 0.1;
};

inline ExpansionFit fit_expansion(const std::vector<double>& small, const std::vector<double>& energy, double target_slope,
                                  double target_intercept, FitOptions opt) {
    ExpansionFit fit;
    fit.target_slope = target_slope;
    fit.target_intercept = target_intercept;
    fit.slope_tolerance = opt.slope_tolerance;
    fit.intercept_tolerance = opt.intercept_tolerance;
    const int n = static_cast<int>(small.size());
    for (int i = 0; i < n; ++i) {
        fit.abscissa.push_back(std::log(1.0 / small[i]));
        fit.ordinate.push_back(energy[i]);
    }
    Eigen::MatrixXd A2(n, 2);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        A2(i, 0) = fit.abscissa[i];
        A2(i, 1) = 1.0;
        b(i) = energy[i];
    }
    const Eigen::Vector2d c2 = A2.colPivHouseholderQr().solve(b);
    fit.plain_slope = c2(0);
    fit.plain_intercept = c2(1);
    fit.fitted_slope = c2(0);
    fit.fitted_intercept = c2(1);
    if (opt.correction_term && n >= 4) {
        Eigen::MatrixXd A3(n, 3);
        for (int i = 0; i < n; ++i) {
            A3(i, 0) = fit.abscissa[i];
            A3(i, 1) = 1.0;
            A3(i, 2) = small[i];
        }
        const Eigen::Vector3d c3 = A3.colPivHouseholderQr().solve(b);
        fit.model = "linear+eps";
        fit.fitted_slope = c3(0);
        fit.fitted_intercept = c3(1);
        fit.correction = c3(2);
    }
    return fit;
}

inline ExpansionFit gamma_expansion_check(const std::vector<SolutionRecord>& branch, double W_pq, double Cf, FitOptions opt = {}) {
    if (branch.size() < 4) throw Error(ErrorKind::insufficient, "gamma_expansion_check needs at least 4 records");
    for (std::size_t k = 1; k < branch.size(); ++k)
        require(branch[k].eps < branch[k - 1].eps, ErrorKind::parameter, "gamma_expansion_check needs decreasing eps");
    const auto& ref = branch.front().vortices;
    require(ref.size() == 2, ErrorKind::parameter, "gamma_expansion_check: records must carry two vortices");
    for (const auto& r : branch) {
        require(r.vortices.size() == 2, ErrorKind::parameter, "gamma_expansion_check: records must carry two vortices");
        const double d1 = detail::circular_distance(r.vortices[0], ref[0], 2 * pi) + detail::circular_distance(r.vortices[1], ref[1], 2 * pi);
        const double d2 = detail::circular_distance(r.vortices[0], ref[1], 2 * pi) + detail::circular_distance(r.vortices[1], ref[0], 2 * pi);
        require(std::min(d1, d2) < 0.5, ErrorKind::parameter, "gamma_expansion_check: vortex pair changes along the branch");
    }
    std::vector<double> eps, energy;
    for (const auto& r : branch) {
        eps.push_back(r.eps);
        energy.push_back(r.energy.total);
    }
    return fit_expansion(eps, energy, 4.0 / pi, W_pq + 2.0 * Cf, opt);
}

// Fit of truncated_u0_energy against log(1/rho); spread reports the Cauchy
// constant max |E(rho) - (4/pi) log(1/rho) - W| / rho.
struct TruncatedEnergyFit {
    ExpansionFit fit;
    std::vector<double> rho;
    std::vector<double> energy;
    double cauchy_constant = 0.0;
};

inline TruncatedEnergyFit truncated_energy_fit(const DomainSpec& d, const BoundaryPoint& p, const BoundaryPoint& q,
                                               const std::vector<double>& rho_list, double W_pq, FitOptions opt = {}) {
    TruncatedEnergyFit out;
    out.rho = rho_list;
    for (double r : rho_list) out.energy.push_back(truncated_u0_energy(d, p, q, r));
    out.fit = fit_expansion(rho_list, out.energy, 4.0 / pi, W_pq, opt);
    for (std::size_t k = 0; k < rho_list.size(); ++k) {
        const double rem = out.energy[k] - (4.0 / pi) * std::log(1.0 / rho_list[k]) - W_pq;
        out.cauchy_constant = std::max(out.cauchy_constant, std::abs(rem) / rho_list[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct VortexMatch {
    std::string status;  // matched | no_target | vortex_count_mismatch
    std::vector<double> distances;  // circle-angle distance of each vortex to its matched coordinate
    int target = -1;                // index into the minima list
    double period = 2 * pi;
};

inline VortexMatch vortex_vs_minimizer(const SolutionRecord& rec, const CircleModel& model, const std::vector<CriticalPoint>& minima) {
    VortexMatch out;
    if (rec.vortices.size() != 2) {
        out.status = "vortex_count_mismatch";
        return out;
    }
    if (minima.empty()) {
        out.status = "no_target";
        return out;
    }
    double best = 1e300;
    for (std::size_t i = 0; i < minima.size(); ++i) {
        const double a = model.circle_angle(minima[i].p.t), b = model.circle_angle(minima[i].q.t);
        const double v1 = rec.vortices[0], v2 = rec.vortices[1];
        const double d11 = detail::circular_distance(v1, a, 2 * pi), d22 = detail::circular_distance(v2, b, 2 * pi);
        const double d12 = detail::circular_distance(v1, b, 2 * pi), d21 = detail::circular_distance(v2, a, 2 * pi);
        if (d11 + d22 < best) {
            best = d11 + d22;
            out.distances = {d11, d22};
            out.target = static_cast<int>(i);
        }
        if (d12 + d21 < best) {
            best = d12 + d21;
            out.distances = {d12, d21};
            out.target = static_cast<int>(i);
        }
    }
    out.status = "matched";
    return out;
}

}  // namespace bvortex
