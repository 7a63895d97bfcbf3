#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "bvortex/conformal.hpp"
#include "bvortex/errors.hpp"

namespace bvortex {

// Balanced bistable reaction f = -G' with wells at +-1.
struct Nonlinearity {
    std::string name;
    std::optional<double> a;
    std::function<double(double)> G;
    std::function<double(double)> f;
    std::function<double(double)> fprime;
    double t_star = 0.5;
    double curvature_minus = 1.0;  // G''(-1)
    double curvature_plus = 1.0;   // G''(+1)

    // Width of the sine layer with the same mean well curvature.
    double layer_scale() const { return 2.0 / (curvature_minus + curvature_plus); }
    bool odd() const { return name == "cubic" || name == "sine"; }
    std::string label() const {
        if (!a) return name;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", *a);
        return name + "(" + buf + ")";
    }

    static Nonlinearity cubic() {
        Nonlinearity n;
        n.name = "cubic";
        n.G = [](double u) { return 0.25 * (1 - u * u) * (1 - u * u); };
        n.f = [](double u) { return u - u * u * u; };
        n.fprime = [](double u) { return 1 - 3 * u * u; };
        n.t_star = 1.0 / std::sqrt(3.0);
        n.curvature_minus = n.curvature_plus = 2.0;
        return n;
    }

    static Nonlinearity sine(double a) {
        require(a > 0 && std::isfinite(a), ErrorKind::parameter, "sine nonlinearity needs a > 0");
        Nonlinearity n;
        n.name = "sine";
        n.a = a;
        n.G = [a](double u) {
            const double c = std::cos(0.5 * pi * u);
            return 2.0 / (a * pi * pi) * c * c;
        };
        n.f = [a](double u) { return std::sin(pi * u) / (pi * a); };
        n.fprime = [a](double u) { return std::cos(pi * u) / a; };
        n.t_star = 0.5;
        n.curvature_minus = n.curvature_plus = 1.0 / a;
        return n;
    }

    static Nonlinearity builtin(const std::string& name, std::optional<double> a = std::nullopt) {
        if (name == "cubic") {
            require(!a, ErrorKind::parameter, "cubic nonlinearity takes no parameter");
            return cubic();
        }
        if (name == "sine") return sine(a.value_or(1.0));
        throw Error(ErrorKind::parameter, "unknown nonlinearity '" + name + "'");
    }
};

struct NonlinearityCheck {
    bool nonnegative = true;
    bool wells = true;
    bool convex_outside_threshold = true;
    bool consistent_derivative = true;
    double growth_constant = 0.0;  // sup |f|^2 / G on the grid
    bool ok() const {
        return nonnegative && wells && convex_outside_threshold && consistent_derivative && std::isfinite(growth_constant);
    }
};

inline NonlinearityCheck self_test(const Nonlinearity& nl, int grid = 2001) {
    NonlinearityCheck c;
    const double h = 1e-4;
    c.wells = std::abs(nl.G(1.0)) < 1e-14 && std::abs(nl.G(-1.0)) < 1e-14 && nl.curvature_minus > 0 && nl.curvature_plus > 0;
    for (int i = 0; i < grid; ++i) {
        const double t = -1.0 + 2.0 * i / (grid - 1);
        const double g = nl.G(t);
        if (g < -1e-15) c.nonnegative = false;
        if (std::abs(t) >= nl.t_star && -nl.fprime(t) < -1e-12) c.convex_outside_threshold = false;
        if (std::abs(t) < 1 - h) {
            const double dG = (nl.G(t + h) - nl.G(t - h)) / (2 * h);
            if (std::abs(dG + nl.f(t)) > 1e-6 * (1 + std::abs(nl.f(t)))) c.consistent_derivative = false;
        }
        if (g > 1e-14) c.growth_constant = std::max(c.growth_constant, nl.f(t) * nl.f(t) / g);
    }
    return c;
}

}  // namespace bvortex
