#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bvortex/errors.hpp"
#include "bvortex/quadrature.hpp"

namespace bvortex {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct UnitDisk {};

struct Rectangle {
    double L = 1.0;
    double H = 1.0;
};

// Schwarz-Christoffel data on the shifted half-plane {Im z >= b}. The raw
// struct is not validated so that the map routines can be exercised on
// degenerate prevertex sets; DomainSpec enforces the convex-polygon invariants.
struct ScPolygon {
    std::vector<double> prevertices;
    std::vector<double> angles;
    double b = 0.1;
};

struct RegularPolygonDisk {
    int N = 4;
    double r = 0.995;
};

class DomainSpec {
public:
    using Kind = std::variant<UnitDisk, Rectangle, ScPolygon, RegularPolygonDisk>;

    DomainSpec() = default;
    explicit DomainSpec(Kind kind) : kind_(std::move(kind)) { validate(); }

    static DomainSpec unit_disk() { return DomainSpec(UnitDisk{}); }
    static DomainSpec rectangle(double L, double H) { return DomainSpec(Rectangle{L, H}); }
    static DomainSpec sc_polygon(std::vector<double> a, std::vector<double> alpha, double b) {
        return DomainSpec(ScPolygon{std::move(a), std::move(alpha), b});
    }
    // a_k = k, alpha_k = 2/N
    static DomainSpec equiangular_polygon(int N, double b) {
        std::vector<double> a, alpha;
        for (int k = 1; k <= N; ++k) {
            a.push_back(k);
            alpha.push_back(2.0 / N);
        }
        return sc_polygon(std::move(a), std::move(alpha), b);
    }
    static DomainSpec regular_polygon_disk(int N, double r) { return DomainSpec(RegularPolygonDisk{N, r}); }

    const Kind& kind() const { return kind_; }
    template <class T>
    const T* as() const { return std::get_if<T>(&kind_); }

    std::string kind_name() const {
        switch (kind_.index()) {
        case 0: return "unit_disk";
        case 1: return "rectangle";
        case 2: return "sc_polygon";
        default: return "regular_polygon_disk";
        }
    }

    // unit disk and regular polygons are parameterized by the circle angle
    bool circle_model() const { return as<UnitDisk>() || as<RegularPolygonDisk>(); }
    bool has_conformal_map() const { return !as<Rectangle>(); }

    // Soft invariant violations.
    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (auto* rc = as<Rectangle>()) {
            if (rc->L > rc->H) w.push_back("rectangle with L > H: midpoint minimum is not covered by the Hessian argument");
            else if (pi * rc->H / rc->L < 2.98474) w.push_back("rectangle with pi*H/L below the t=3tanh(t) root");
        }
        return w;
    }

private:
    void validate() const {
        if (auto* rc = as<Rectangle>()) {
            require(rc->L > 0 && rc->H > 0 && std::isfinite(rc->L) && std::isfinite(rc->H), ErrorKind::parameter,
                    "rectangle sides must be positive");
        } else if (auto* sc = as<ScPolygon>()) {
            require(!sc->prevertices.empty() && sc->prevertices.size() == sc->angles.size(), ErrorKind::parameter,
                    "sc_polygon needs matching prevertices and angles");
            require(sc->b > 0, ErrorKind::parameter, "sc_polygon offset b must be positive");
            double sum = 0;
            for (std::size_t k = 0; k < sc->angles.size(); ++k) {
                require(sc->angles[k] > 0 && sc->angles[k] < 1, ErrorKind::parameter, "sc_polygon angles must lie in (0,1)");
                if (k > 0)
                    require(sc->prevertices[k] > sc->prevertices[k - 1], ErrorKind::parameter,
                            "sc_polygon prevertices must be strictly increasing");
                sum += sc->angles[k];
            }
            require(std::abs(sum - 2.0) < 1e-12, ErrorKind::parameter, "sc_polygon angles must sum to 2");
        } else if (auto* rp = as<RegularPolygonDisk>()) {
            require(rp->N >= 3, ErrorKind::parameter, "regular polygon needs N >= 3");
            require(rp->r > 0 && rp->r <= 1, ErrorKind::parameter, "regular polygon radius must lie in (0,1]");
        }
    }

    Kind kind_ = UnitDisk{};
};

inline void to_json(nlohmann::json& j, const DomainSpec& d) {
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, UnitDisk>) j = {{"kind", "unit_disk"}};
            else if constexpr (std::is_same_v<K, Rectangle>) j = {{"kind", "rectangle"}, {"L", k.L}, {"H", k.H}};
            else if constexpr (std::is_same_v<K, ScPolygon>)
                j = {{"kind", "sc_polygon"}, {"prevertices", k.prevertices}, {"angles", k.angles}, {"b", k.b}};
            else j = {{"kind", "regular_polygon_disk"}, {"N", k.N}, {"r", k.r}};
        },
        d.kind());
}

namespace detail {
inline void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto* k : keys) ok = ok || it.key() == k;
        require(ok, ErrorKind::parameter, "unknown field '" + it.key() + "' in " + where);
    }
    for (auto* k : keys)
        require(j.contains(k), ErrorKind::parameter, std::string("missing field '") + k + "' in " + where);
}
}  // namespace detail

inline void from_json(const nlohmann::json& j, DomainSpec& d) {
    require(j.is_object() && j.contains("kind") && j["kind"].is_string(), ErrorKind::parameter,
            "domain must be an object with a string 'kind'");
    const std::string kind = j["kind"];
    try {
        if (kind == "unit_disk") {
            detail::only_keys(j, {"kind"}, "unit_disk");
            d = DomainSpec::unit_disk();
        } else if (kind == "rectangle") {
            detail::only_keys(j, {"kind", "L", "H"}, "rectangle");
            d = DomainSpec::rectangle(j["L"].get<double>(), j["H"].get<double>());
        } else if (kind == "sc_polygon") {
            detail::only_keys(j, {"kind", "prevertices", "angles", "b"}, "sc_polygon");
            d = DomainSpec::sc_polygon(j["prevertices"].get<std::vector<double>>(), j["angles"].get<std::vector<double>>(),
                                       j["b"].get<double>());
        } else if (kind == "regular_polygon_disk") {
            detail::only_keys(j, {"kind", "N", "r"}, "regular_polygon_disk");
            require(j["N"].is_number_integer(), ErrorKind::parameter, "regular_polygon_disk N must be an integer");
            d = DomainSpec::regular_polygon_disk(j["N"].get<int>(), j["r"].get<double>());
        } else {
            throw Error(ErrorKind::parameter, "unknown domain kind '" + kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parameter, std::string("domain field type: ") + e.what());
    }
}

namespace detail {

inline double circular_distance(double s, double t, double period) {
    double d = std::fmod(std::abs(s - t), period);
    return std::min(d, period - d);
}

inline double wrap(double t, double period) {
    double s = std::fmod(t, period);
    return s < 0 ? s + period : s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Disk <-> half-plane

inline cplx disk_to_halfplane(cplx z) {
    const cplx den = 1.0 - z;
    if (den == 0.0) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return cplx(0, 1) * (1.0 + z) / den;
}

inline cplx disk_to_halfplane_derivative(cplx z) {
    const cplx den = 1.0 - z;
    return cplx(0, 2) / (den * den);
}

// ---------------------------------------------------------------------------
// Schwarz-Christoffel maps on the shifted half-plane

// prod_k (z - a_k)^{-alpha_k}, principal branches; the cuts run below the
// prevertices and the integration paths stay in the closed upper half-plane.
inline cplx sc_derivative(const ScPolygon& sc, cplx z) {
    cplx prod = 1.0;
    for (std::size_t k = 0; k < sc.prevertices.size(); ++k) prod *= std::pow(z - sc.prevertices[k], -sc.angles[k]);
    return prod;
}

inline double sc_derivative_magnitude(const ScPolygon& sc, double x) {
    double logsum = 0.0;
    for (std::size_t k = 0; k < sc.prevertices.size(); ++k)
        logsum -= sc.angles[k] * std::log(std::hypot(x - sc.prevertices[k], sc.b));
    return std::exp(logsum);
}

// Straight-segment integral of the SC integrand from z0 to z1.
inline cplx sc_integral(const ScPolygon& sc, cplx z0, cplx z1, double tol = 1e-12) {
    const cplx dz = z1 - z0;
    auto g = [&](double s) { return sc_derivative(sc, z0 + s * dz) * dz; };
    // graded start when z0 sits on a prevertex
    for (std::size_t k = 0; k < sc.prevertices.size(); ++k) {
        if (std::abs(z0 - sc.prevertices[k]) < 1e-14) {
            auto h = [&](double s) { return g(1.0 - s); };
            return quad::integrate_graded_right(h, 0.0, 1.0, sc.angles[k], tol).value;
        }
    }
    return quad::integrate(g, 0.0, 1.0, tol).value;
}

// psi(z) = int_0^z prod (w - a_k)^{-alpha_k} dw along 0 -> i b' -> Re z + i b' -> z.
inline cplx sc_map(const ScPolygon& sc, cplx z, double tol = 1e-12) {
    if (z == 0.0) return 0.0;
    const double bp = std::max(sc.b, 0.5);
    const cplx c1(0.0, bp), c2(z.real(), bp);
    cplx total = sc_integral(sc, 0.0, c1, tol);
    if (c2 != c1) total += sc_integral(sc, c1, c2, tol);
    if (z != c2) total += sc_integral(sc, c2, z, tol);
    return total;
}

// ---------------------------------------------------------------------------
// Regular polygon map psi(z) = int_0^z (1 - w^N)^{-2/N} dw

inline cplx regular_polygon_derivative(int N, cplx z) { return std::pow(1.0 - std::pow(z, N), -2.0 / N); }

// psi(1) = B(1/N, 1 - 2/N)/N
inline double regular_polygon_vertex_radius(int N) { return std::beta(1.0 / N, 1.0 - 2.0 / N) / N; }

inline double regular_polygon_side(int N) { return 2.0 * std::sin(pi / N) * regular_polygon_vertex_radius(N); }

inline bool at_root_of_unity(int N, cplx z) {
    return std::abs(std::abs(z) - 1.0) < 1e-14 && std::abs(1.0 - std::pow(z, N)) < 1e-12;
}

inline cplx regular_polygon_map(int N, cplx z, double tol = 1e-12) {
    require(N >= 3, ErrorKind::parameter, "regular polygon needs N >= 3");
    require(std::abs(z) <= 1.0 + 1e-14, ErrorKind::parameter, "regular polygon map needs |z| <= 1");
    if (at_root_of_unity(N, z)) throw Error(ErrorKind::corner, "regular polygon map evaluated at a corner prevertex");
    if (z == 0.0) return 0.0;
    auto g = [&](double t) { return regular_polygon_derivative(N, t * z) * z; };
    if (std::abs(z) > 0.9) return quad::integrate_graded_right(g, 0.0, 1.0, 2.0 / N, tol).value;
    return quad::integrate(g, 0.0, 1.0, tol).value;
}

// ---------------------------------------------------------------------------
// Boundary parameterization

struct BoundaryPoint {
    double t = 0.0;
    cplx z;
    double map_deriv = 1.0;
    bool corner = false;
};

struct ParameterRange {
    double lo = 0.0;
    double hi = 2 * pi;
    bool periodic = true;
    double length() const { return hi - lo; }
};

inline ParameterRange parameter_range(const DomainSpec& d) {
    if (auto* rc = d.as<Rectangle>()) return {0.0, 2.0 * (rc->L + rc->H), true};
    if (auto* sc = d.as<ScPolygon>()) return {sc->prevertices.front(), sc->prevertices.back(), false};
    return {0.0, 2 * pi, true};
}

// Physical scale of regular_polygon_disk: the exact (r = 1) polygon has unit side.
inline double regular_polygon_scale(int N) { return 1.0 / regular_polygon_side(N); }

inline bool polygon_corner_parameter(int N, double t) {
    const double k = t * N / (2 * pi);
    return std::abs(k - std::round(k)) < 1e-12;
}

// |d z / d t| without evaluating the map itself.
inline double map_deriv(const DomainSpec& d, double t) {
    if (d.as<UnitDisk>() || d.as<Rectangle>()) return 1.0;
    if (auto* sc = d.as<ScPolygon>()) return sc_derivative_magnitude(*sc, t);
    const auto& rp = *d.as<RegularPolygonDisk>();
    if (rp.r == 1.0 && polygon_corner_parameter(rp.N, t)) return std::numeric_limits<double>::infinity();
    return regular_polygon_scale(rp.N) * rp.r * std::abs(regular_polygon_derivative(rp.N, std::polar(rp.r, t)));
}

inline BoundaryPoint boundary_point(const DomainSpec& d, double t) {
    BoundaryPoint bp;
    bp.t = t;
    if (d.as<UnitDisk>()) {
        bp.z = std::polar(1.0, t);
    } else if (auto* rc = d.as<Rectangle>()) {
        const double P = 2.0 * (rc->L + rc->H);
        double s = std::fmod(t, P);
        if (s < 0) s += P;
        const double c1 = rc->L, c2 = rc->L + rc->H, c3 = 2 * rc->L + rc->H;
        if (s <= c1) bp.z = {s, 0.0};
        else if (s <= c2) bp.z = {rc->L, s - c1};
        else if (s <= c3) bp.z = {rc->L - (s - c2), rc->H};
        else bp.z = {0.0, rc->H - (s - c3)};
        for (double c : {0.0, c1, c2, c3, P})
            if (std::abs(s - c) < 1e-12) bp.corner = true;
    } else if (auto* sc = d.as<ScPolygon>()) {
        bp.z = sc_map(*sc, cplx(t, sc->b));
        bp.map_deriv = sc_derivative_magnitude(*sc, t);
        return bp;
    } else {
        const auto& rp = *d.as<RegularPolygonDisk>();
        const double s = regular_polygon_scale(rp.N);
        if (rp.r == 1.0 && polygon_corner_parameter(rp.N, t)) {
            bp.corner = true;
            bp.z = s * regular_polygon_vertex_radius(rp.N) * std::polar(1.0, t);
            bp.map_deriv = std::numeric_limits<double>::infinity();
            return bp;
        }
        bp.z = s * regular_polygon_map(rp.N, std::polar(rp.r, t));
    }
    bp.map_deriv = map_deriv(d, t);
    return bp;
}

}  // namespace bvortex
