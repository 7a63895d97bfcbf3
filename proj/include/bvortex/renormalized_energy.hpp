#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvortex/conformal.hpp"
#include "bvortex/errors.hpp"
#include "bvortex/parallel.hpp"

namespace bvortex {

// Disk automorphism zeta -> e^{i rotation} (zeta - a)/(1 - conj(a) zeta). For
// half-plane models it acts after the Cayley map x -> (x - i)/(x + i).
struct Normalization {
    cplx a{0.0, 0.0};
    double rotation = 0.0;
};

namespace detail {

// Points on the unit circle of the canonical model, with |d zeta/d t| / map_deriv.
struct ModelPoint {
    cplx zeta;
    double stretch;
};

inline ModelPoint model_point(const DomainSpec& d, const BoundaryPoint& p) {
    if (d.circle_model()) return {std::polar(1.0, p.t), 1.0 / p.map_deriv};
    const auto& sc = *d.as<ScPolygon>();
    (void)sc;
    const cplx x(p.t, 0.0);
    const cplx den = x + cplx(0, 1);
    return {(x - cplx(0, 1)) / den, 2.0 / std::norm(den) / p.map_deriv};
}

}  // namespace detail

// Rotation sending 1 to the middle of the longer arc between the two points,
// so that the half-plane image avoids the pole.
inline Normalization default_normalization(cplx zp, cplx zq) {
    double ap = std::arg(zp), aq = std::arg(zq);
    double mid = 0.5 * (ap + aq);
    if (std::abs(ap - aq) < pi) mid += pi;
    return {cplx(0, 0), -mid};
}

inline double renorm_w_conformal(const DomainSpec& d, const BoundaryPoint& p, const BoundaryPoint& q,
                                 std::optional<Normalization> norm = std::nullopt) {
    if (!d.has_conformal_map())
        throw Error(ErrorKind::capability, "renorm_w_conformal: no conformal map for domain kind " + d.kind_name());
    const auto range = parameter_range(d);
    const double gap = range.periodic ? detail::circular_distance(p.t, q.t, range.length()) : std::abs(p.t - q.t);
    if (gap < 1e-12 * range.length()) throw Error(ErrorKind::diagonal, "renorm_w_conformal: p = q");
    require(std::isfinite(p.map_deriv) && std::isfinite(q.map_deriv) && p.map_deriv > 0 && q.map_deriv > 0,
            ErrorKind::corner, "renorm_w_conformal: corner point");
    const auto mp = detail::model_point(d, p);
    const auto mq = detail::model_point(d, q);
    const Normalization n = norm ? *norm : default_normalization(mp.zeta, mq.zeta);
    require(std::abs(n.a) < 1.0, ErrorKind::parameter, "normalization needs |a| < 1");
    const cplx rot = std::polar(1.0, n.rotation);
    auto mob = [&](cplx z) { return rot * (z - n.a) / (1.0 - std::conj(n.a) * z); };
    auto mob_d = [&](cplx z) {
        const cplx den = 1.0 - std::conj(n.a) * z;
        return std::abs(rot * (1.0 - std::norm(n.a)) / (den * den));
    };
    const cplx wp = mob(mp.zeta), wq = mob(mq.zeta);
    if (std::abs(1.0 - wp) < 1e-8 || std::abs(1.0 - wq) < 1e-8)
        throw Error(ErrorKind::numerical, "renorm_w_conformal: normalization maps a jump point to the pole");
    const double dp = std::abs(disk_to_halfplane_derivative(wp)) * mob_d(mp.zeta) * mp.stretch;
    const double dq = std::abs(disk_to_halfplane_derivative(wq)) * mob_d(mq.zeta) * mq.stretch;
    const double dist2 = std::norm(disk_to_halfplane(wp) - disk_to_halfplane(wq));
    return (2.0 / pi) * std::log(dist2 / (dp * dq));
}

// ---------------------------------------------------------------------------
// Rectangle series

namespace detail {

// 1/sinh(t) without overflow
inline double csch(double t) {
    const double e = std::exp(-t);
    return 2.0 * e / (1.0 - e * e);
}

}  // namespace detail

// Smallest n0 with (2 pi/L^2)(pi/L)^{power-1} sum_{n>n0} n^power 2 e^{-n pi H/L} <= tol.
inline int rectangle_series_terms(double L, double H, int power = 1, double tol = 1e-14) {
    const double q = pi * H / L;
    const double pref = (2 * pi / (L * L)) * std::pow(pi / L, power - 1);
    const double r = std::exp(-q);
    for (int n0 = 1; n0 < 1000000; ++n0) {
        // tail majorant: geometric bound once the polynomial factor is dominated
        const double lead = std::pow(n0 + 1.0, power) * 2.0 * std::exp(-(n0 + 1.0) * q);
        const double ratio = std::pow((n0 + 2.0) / (n0 + 1.0), power) * r;
        if (ratio < 1.0 && pref * lead / (1.0 - ratio) <= tol) return n0;
    }
    throw Error(ErrorKind::convergence, "rectangle series: tail bound not reached");
}

inline double rectangle_phi(double L, double H, double x, double xt, int n_terms) {
    double s = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        const double k = n * pi / L;
        s += n * std::sin(k * x) * std::sin(k * xt) * detail::csch(k * H);
    }
    return (2 * pi / (L * L)) * s;
}

inline double rectangle_phi(double L, double H, double x, double xt) {
    return rectangle_phi(L, H, x, xt, rectangle_series_terms(L, H, 1));
}

struct RectangleDerivatives {
    double phi = 0, phi_x = 0, phi_xt = 0, phi_xx = 0, phi_xxt = 0, phi_xtxt = 0;
    int n_terms = 0;
};

inline RectangleDerivatives rectangle_phi_derivatives(double L, double H, double x, double xt) {
    RectangleDerivatives r;
    r.n_terms = rectangle_series_terms(L, H, 3);
    const double c = 2 * pi / (L * L);
    for (int n = 1; n <= r.n_terms; ++n) {
        const double k = n * pi / L;
        const double w = n * detail::csch(k * H);
        const double sx = std::sin(k * x), cx = std::cos(k * x), st = std::sin(k * xt), ct = std::cos(k * xt);
        r.phi += w * sx * st;
        r.phi_x += w * k * cx * st;
        r.phi_xt += w * k * sx * ct;
        r.phi_xx -= w * k * k * sx * st;
        r.phi_xtxt -= w * k * k * sx * st;
        r.phi_xxt += w * k * k * cx * ct;
    }
    r.phi *= c;
    r.phi_x *= c;
    r.phi_xt *= c;
    r.phi_xx *= c;
    r.phi_xtxt *= c;
    r.phi_xxt *= c;
    return r;
}

// W for a bottom point (x, 0) and a top point (xt, H): -(2/pi) log(pi phi).
inline double rectangle_w(double L, double H, double x, double xt) {
    const double phi = rectangle_phi(L, H, x, xt);
    require(phi > 0, ErrorKind::numerical, "rectangle: nonpositive normal-derivative kernel");
    return -(2.0 / pi) * std::log(pi * phi);
}

struct MidpointHessian {
    double phi = 0;
    double phi_x = 0;
    double phi_xx = 0;
    double phi_xxt = 0;
    int n_terms = 0;
    bool negative_definite = false;
    // Hessian of W(x, xt) = -(2/pi) log(pi phi) at the midpoint pair
    std::array<std::array<double, 2>, 2> w_hessian{};
};

inline MidpointHessian rectangle_hessian_at_midpoint(double L, double H) {
    require(L > 0 && H > 0, ErrorKind::parameter, "rectangle sides must be positive");
    const auto d = rectangle_phi_derivatives(L, H, 0.5 * L, 0.5 * L);
    MidpointHessian m;
    m.phi = d.phi;
    m.phi_x = d.phi_x;
    m.phi_xx = d.phi_xx;
    m.phi_xxt = d.phi_xxt;
    m.n_terms = d.n_terms;
    m.negative_definite = d.phi_xx < 0 && std::abs(d.phi_xxt) < -d.phi_xx;
    const double s = -(2.0 / pi) / d.phi;
    const double gx = d.phi_x / d.phi, gt = d.phi_xt / d.phi;
    m.w_hessian = {{{s * d.phi_xx + (2 / pi) * gx * gx, s * d.phi_xxt + (2 / pi) * gx * gt},
                    {s * d.phi_xxt + (2 / pi) * gx * gt, s * d.phi_xtxt + (2 / pi) * gt * gt}}};
    return m;
}

// Positive root of t = 3 tanh t by Newton safeguarded with bisection on [2.5, 3].
inline double three_tanh_root() {
    auto g = [](double t) { return t - 3.0 * std::tanh(t); };
    auto dg = [](double t) {
        const double c = std::cosh(t);
        return 1.0 - 3.0 / (c * c);
    };
    double lo = 2.5, hi = 3.0, t = 2.75;
    for (int it = 0; it < 200; ++it) {
        const double gt = g(t);
        if (gt == 0.0) return t;
        if (gt < 0) lo = t;
        else hi = t;
        double next = t - gt / dg(t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-16 * t || hi - lo < 4e-16) return next;
        t = next;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Green's-function and Neumann characterizations

inline double renorm_w_green(const DomainSpec& d, const BoundaryPoint& p, const BoundaryPoint& q) {
    if (d.as<UnitDisk>()) {
        const double gap = std::abs(p.z - q.z);
        if (gap < 1e-12) throw Error(ErrorKind::diagonal, "renorm_w_green: p = q");
        // d^2 G^D / d nu_p d nu_q = -d_r Poisson kernel = 1/(pi |p-q|^2)
        const double mixed = 1.0 / (pi * gap * gap);
        return -(2.0 / pi) * std::log(pi * mixed);
    }
    if (auto* rc = d.as<Rectangle>()) {
        const double P = 2 * (rc->L + rc->H);
        const double s = detail::wrap(p.t, P), t = detail::wrap(q.t, P);
        auto side = [&](double u) {
            if (u > 0 && u < rc->L) return 0;
            if (u > rc->L && u < rc->L + rc->H) return 1;
            if (u > rc->L + rc->H && u < 2 * rc->L + rc->H) return 2;
            if (u > 2 * rc->L + rc->H && u < P) return 3;
            return -1;
        };
        const int sp = side(s), sq = side(t);
        if (sp < 0 || sq < 0) throw Error(ErrorKind::corner, "renorm_w_green: rectangle corner");
        if ((sp == 0 && sq == 2) || (sp == 2 && sq == 0)) {
            const double x = sp == 0 ? s : t, xt = 2 * rc->L + rc->H - (sp == 0 ? t : s);
            return rectangle_w(rc->L, rc->H, x, xt);
        }
        if ((sp == 1 && sq == 3) || (sp == 3 && sq == 1)) {
            const double y = sp == 1 ? s - rc->L : t - rc->L, yt = P - (sp == 1 ? t : s);
            return rectangle_w(rc->H, rc->L, y, yt);
        }
        throw Error(ErrorKind::capability, "renorm_w_green: rectangle pairs must lie on opposite sides");
    }
    throw Error(ErrorKind::capability, "renorm_w_green: unsupported domain kind " + d.kind_name());
}

// (4/pi) log|p-q| + 2 (R(p,p) + R(q,q) - 2 R(p,q)) with the regular part of the
// disk's Neumann function for a boundary pole, R(z, zeta) = |z|^2/(4 pi) + const.
inline double renorm_w_neumann(const DomainSpec& d, const BoundaryPoint& p, const BoundaryPoint& q) {
    if (!d.as<UnitDisk>()) throw Error(ErrorKind::capability, "renorm_w_neumann: unsupported domain kind " + d.kind_name());
    const double gap = std::abs(p.z - q.z);
    if (gap < 1e-12) throw Error(ErrorKind::diagonal, "renorm_w_neumann: p = q");
    auto R = [](cplx z, cplx) { return std::norm(z) / (4 * pi); };
    return (4.0 / pi) * std::log(gap) + 2.0 * (R(p.z, p.z) + R(q.z, q.z) - 2.0 * R(p.z, q.z));
}

// W as a function of the two boundary parameters, without evaluating the map.
inline double renorm_w(const DomainSpec& d, double tp, double tq) {
    const auto range = parameter_range(d);
    if (auto* rc = d.as<Rectangle>()) {
        (void)rc;
        BoundaryPoint p, q;
        p.t = tp;
        q.t = tq;
        return renorm_w_green(d, p, q);
    }
    const double gap = range.periodic ? detail::circular_distance(tp, tq, range.length()) : std::abs(tp - tq);
    if (gap < 1e-12 * range.length()) throw Error(ErrorKind::diagonal, "renorm_w: p = q");
    const double mp = map_deriv(d, tp), mq = map_deriv(d, tq);
    if (d.as<ScPolygon>()) return (2.0 / pi) * std::log((tp - tq) * (tp - tq) * mp * mq);
    const double chord = std::abs(std::polar(1.0, tp) - std::polar(1.0, tq));
    return (4.0 / pi) * std::log(chord) + (2.0 / pi) * std::log(mp * mq);
}

// ---------------------------------------------------------------------------
// Landscape and minimizer search

struct EnergyLandscape {
    DomainSpec domain;
    std::vector<double> tp;
    std::vector<double> tq;
    std::vector<double> values;  // row-major over (tp, tq); NaN inside the excluded band
    double excluded_band = 0.0;

    double at(std::size_t i, std::size_t j) const { return values[i * tq.size() + j]; }
    bool retained(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }
};

inline double default_diagonal_band(const DomainSpec& d) { return 0.05 * parameter_range(d).length(); }

namespace detail {

inline bool in_band(const DomainSpec& d, double tp, double tq, double band) {
    if (d.as<Rectangle>()) return false;
    const auto range = parameter_range(d);
    const double gap = range.periodic ? circular_distance(tp, tq, range.length()) : std::abs(tp - tq);
    return gap < band;
}

}  // namespace detail

inline EnergyLandscape compute_landscape(const DomainSpec& d, int grid_n, double delta_diag = -1.0, int threads = 1) {
    require(grid_n >= 2, ErrorKind::parameter, "landscape grid too small");
    EnergyLandscape out;
    out.domain = d;
    out.excluded_band = delta_diag < 0 ? default_diagonal_band(d) : delta_diag;
    const auto range = parameter_range(d);
    if (auto* rc = d.as<Rectangle>()) {
        for (int i = 0; i < grid_n; ++i) {
            out.tp.push_back((i + 0.5) * rc->L / grid_n);
            out.tq.push_back(rc->L + rc->H + (i + 0.5) * rc->L / grid_n);
        }
    } else if (range.periodic) {
        for (int i = 0; i < grid_n; ++i) out.tp.push_back(range.lo + range.length() * i / grid_n);
        out.tq = out.tp;
    } else {
        for (int i = 0; i < grid_n; ++i) out.tp.push_back(range.lo + range.length() * i / (grid_n - 1));
        out.tq = out.tp;
    }
    const std::size_t n = out.tp.size(), m = out.tq.size();
    out.values.assign(n * m, std::numeric_limits<double>::quiet_NaN());
    parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (detail::in_band(d, out.tp[i], out.tq[j], out.excluded_band)) continue;
            out.values[i * m + j] = renorm_w(d, out.tp[i], out.tq[j]);
        }
    });
    return out;
}

enum class CriticalClass { isolated_min, saddle, max, degenerate };

inline const char* to_string(CriticalClass c) {
    switch (c) {
    case CriticalClass::isolated_min: return "isolated_min";
    case CriticalClass::saddle: return "saddle";
    case CriticalClass::max: return "max";
    case CriticalClass::degenerate: return "degenerate";
    }
    return "degenerate";
}

struct CriticalPoint {
    BoundaryPoint p;
    BoundaryPoint q;
    double W_value = 0.0;
    std::array<std::array<double, 2>, 2> hessian{};
    CriticalClass classification = CriticalClass::degenerate;
    double gradient_norm = 0.0;
};

struct MinimaSearch {
    std::vector<CriticalPoint> minima;
    std::vector<std::string> log;
};

inline CriticalClass classify(const std::array<std::array<double, 2>, 2>& h, double tol) {
    Eigen::Matrix2d m;
    m << h[0][0], h[0][1], h[1][0], h[1][1];
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m, Eigen::EigenvaluesOnly).eigenvalues();
    const double thr = std::max(tol, 1e-8 * m.norm());
    if (ev(0) > thr && ev(1) > thr) return CriticalClass::isolated_min;
    if (ev(0) < -thr && ev(1) < -thr) return CriticalClass::max;
    if (ev(0) < -thr && ev(1) > thr) return CriticalClass::saddle;
    return CriticalClass::degenerate;
}

namespace detail {

struct LocalModel {
    double w;
    Eigen::Vector2d g;
    Eigen::Matrix2d h;
};

inline LocalModel fd_model(const DomainSpec& d, double tp, double tq, double h) {
    auto W = [&](double a, double b) { return renorm_w(d, a, b); };
    LocalModel m;
    m.w = W(tp, tq);
    const double fpp = W(tp + h, tq), fmp = W(tp - h, tq), fpq = W(tp, tq + h), fmq = W(tp, tq - h);
    m.g << (fpp - fmp) / (2 * h), (fpq - fmq) / (2 * h);
    const double hxy = (W(tp + h, tq + h) - W(tp + h, tq - h) - W(tp - h, tq + h) + W(tp - h, tq - h)) / (4 * h * h);
    m.h << (fpp - 2 * m.w + fmp) / (h * h), hxy, hxy, (fpq - 2 * m.w + fmq) / (h * h);
    return m;
}

// Admissible region for refined pairs.
inline bool admissible(const DomainSpec& d, double tp, double tq, double band) {
    if (auto* rc = d.as<Rectangle>()) {
        return tp > 0 && tp < rc->L && tq > rc->L + rc->H && tq < 2 * rc->L + rc->H;
    }
    const auto range = parameter_range(d);
    if (!range.periodic && (tp < range.lo || tp > range.hi || tq < range.lo || tq > range.hi)) return false;
    return !in_band(d, tp, tq, band);
}

}  // namespace detail

inline MinimaSearch find_local_minima(const DomainSpec& d, int grid_n = 64, double delta_diag = -1.0, double tol = 1e-10,
                                      int threads = 1) {
    require(grid_n >= 64, ErrorKind::parameter, "find_local_minima needs grid_n >= 64");
    MinimaSearch out;
    const auto land = compute_landscape(d, grid_n, delta_diag, threads);
    const auto range = parameter_range(d);
    const double period = range.length();
    const double h = 1e-5 * period;
    const bool wraps = range.periodic && !d.as<Rectangle>();
    const int n = static_cast<int>(land.tp.size()), m = static_cast<int>(land.tq.size());

    std::vector<std::pair<int, int>> candidates;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (!land.retained(i, j)) continue;
            const double w = land.at(i, j);
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    int a = i + di, b = j + dj;
                    if (wraps) {
                        a = (a + n) % n;
                        b = (b + m) % m;
                    } else if (a < 0 || a >= n || b < 0 || b >= m) {
                        continue;
                    }
                    if (!land.retained(a, b)) {
                        is_min = false;  // touches the excluded band
                        continue;
                    }
                    if (land.at(a, b) < w) is_min = false;
                }
            }
            if (is_min) candidates.emplace_back(i, j);
        }
    }

    std::vector<CriticalPoint> found;
    for (auto [i, j] : candidates) {
        double tp = land.tp[i], tq = land.tq[j];
        bool converged = false, dropped = false;
        detail::LocalModel lm{};
        for (int it = 0; it < 100; ++it) {
            lm = detail::fd_model(d, tp, tq, h);
            if (lm.g.norm() <= 1e-8) {
                converged = true;
                break;
            }
            Eigen::Vector2d step;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(lm.h);
            if (es.eigenvalues()(0) > 0) step = -lm.h.ldlt().solve(lm.g);
            else step = -lm.g * (0.01 * period / std::max(1.0, lm.g.norm()));
            const double cap = 0.05 * period;
            if (step.norm() > cap) step *= cap / step.norm();
            double lambda = 1.0;
            bool accepted = false;
            for (int k = 0; k < 30; ++k) {
                const double a = tp + lambda * step(0), b = tq + lambda * step(1);
                if (detail::admissible(d, a, b, land.excluded_band) && renorm_w(d, a, b) <= lm.w + 1e-14 * std::abs(lm.w)) {
                    tp = a;
                    tq = b;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) {
                // Newton already at rounding level: accept the unit step if it stays admissible
                if (step.norm() < 1e-10 * period && detail::admissible(d, tp + step(0), tq + step(1), land.excluded_band)) {
                    tp += step(0);
                    tq += step(1);
                    continue;
                }
                dropped = true;
                break;
            }
        }
        if (!converged) {
            lm = detail::fd_model(d, tp, tq, h);
            converged = !dropped && lm.g.norm() <= 1e-8;
        }
        if (!converged || !detail::admissible(d, tp, tq, land.excluded_band)) {
            out.log.push_back("candidate (" + std::to_string(land.tp[i]) + ", " + std::to_string(land.tq[j]) +
                              ") dropped: Newton did not converge to an admissible stationary point");
            continue;
        }
        CriticalPoint cp;
        cp.hessian = {{{lm.h(0, 0), lm.h(0, 1)}, {lm.h(1, 0), lm.h(1, 1)}}};
        cp.classification = classify(cp.hessian, tol);
        cp.gradient_norm = lm.g.norm();
        cp.W_value = lm.w;
        if (cp.classification != CriticalClass::isolated_min) {
            out.log.push_back("candidate (" + std::to_string(tp) + ", " + std::to_string(tq) + ") refined to a " +
                              to_string(cp.classification) + " point");
            continue;
        }
        if (wraps) {
            tp = detail::wrap(tp, period);
            tq = detail::wrap(tq, period);
        }
        if (!d.as<Rectangle>() && tp > tq) std::swap(tp, tq);
        bool duplicate = false;
        for (const auto& f : found) {
            const double e = wraps ? detail::circular_distance(f.p.t, tp, period) + detail::circular_distance(f.q.t, tq, period)
                                   : std::abs(f.p.t - tp) + std::abs(f.q.t - tq);
            if (e < 1e-6 * period) duplicate = true;
        }
        if (duplicate) continue;
        cp.p = boundary_point(d, tp);
        cp.q = boundary_point(d, tq);
        found.push_back(cp);
    }
    std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.p.t != b.p.t ? a.p.t < b.p.t : a.q.t < b.q.t;
    });
    out.minima = std::move(found);
    return out;
}

// ---------------------------------------------------------------------------
// Equiangular polygon certificate

struct PolygonCertificate {
    double center_bound = 0.0;          // 16 N^2
    double boundary_bound = 0.0;        // b^{-2/N} (N^2+1)^{1/N-2}
    double boundary_bound_alt = 0.0;    // b^{-2/N} (N^2+1)^{1/N-1}
    bool certified = false;             // rigorous branch
    bool certified_alt = false;
};

inline PolygonCertificate polygon_minima_certificate(int N, double b, int A, int B) {
    require(N >= 3, ErrorKind::parameter, "certificate needs N >= 3");
    require(b > 0 && b < 1, ErrorKind::parameter, "certificate needs b in (0,1)");
    require(A >= 1 && A + 1 < B && B + 1 <= N, ErrorKind::parameter, "certificate needs 1 <= A, A+1 < B, B+1 <= N");
    PolygonCertificate c;
    const double n2 = static_cast<double>(N) * N;
    c.center_bound = 16.0 * n2;
    const double lb = std::pow(b, -2.0 / N);
    c.boundary_bound = lb * std::pow(n2 + 1.0, 1.0 / N - 2.0);
    c.boundary_bound_alt = lb * std::pow(n2 + 1.0, 1.0 / N - 1.0);
    c.certified = c.center_bound < c.boundary_bound;
    c.certified_alt = c.center_bound < c.boundary_bound_alt;
    return c;
}

// Largest b for which the certificate holds, for the given exponent on N^2+1.
inline double polygon_certificate_threshold(int N, double exponent) {
    const double n2 = static_cast<double>(N) * N;
    return std::pow(std::pow(n2 + 1.0, exponent) / (16.0 * n2), N / 2.0);
}

}  // namespace bvortex
