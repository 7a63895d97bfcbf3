#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bvortex/errors.hpp"

namespace bvortex::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

template <class T>
inline double magnitude(const T& v) { return std::abs(v); }

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// 15-point Kronrod estimate with the embedded 7-point Gauss rule as error proxy.
template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& xk = gauss_kronrod<double, 15>::abscissa();
    const auto& wk = gauss_kronrod<double, 15>::weights();
    const auto& wg = gauss<double, 7>::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T f0 = f(c);
    T kron = f0 * wk[0];
    T gsum = f0 * wg[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        T fp = f(c + h * xk[i]);
        T fm = f(c - h * xk[i]);
        kron += (fp + fm) * wk[i];
        if (i % 2 == 0) gsum += (fp + fm) * wg[i / 2];
    }
    return {a, b, kron * h, magnitude(T((kron - gsum) * h))};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod with an absolute tolerance. Throws
// ConvergenceError carrying the achieved error estimate when the interval
// budget runs out.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_segments = 4000) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    if (a == b) return out;
    std::priority_queue<detail::Segment<T>> heap;
    auto first = detail::gk15<T>(f, a, b);
    out.evaluations = 15;
    T total = first.value;
    double err = first.error;
    heap.push(first);
    int segments = 1;
    while (err > abs_tol) {
        if (segments >= max_segments)
            throw ConvergenceError("quadrature did not reach tolerance", {}, err);
        auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b))
            throw ConvergenceError("quadrature interval underflow", {}, err);
        auto left = detail::gk15<T>(f, worst.a, m);
        auto right = detail::gk15<T>(f, m, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
        if (err <= abs_tol) {
            // recompute sums to shed accumulated cancellation error
            T t{};
            double e = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                t += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            total = t;
            err = e;
        }
    }
    out.value = total;
    out.error = err;
    return out;
}

// Integrand with an algebraic endpoint singularity ~ (b - t)^{-alpha} at t = b.
// The substitution t = b - (b - a)(1 - s)^p with p = 1/(1 - alpha) makes the
// transformed integrand bounded.
template <class F>
auto integrate_graded_right(F&& f, double a, double b, double alpha, double abs_tol = 1e-12) {
    const double p = 1.0 / (1.0 - alpha);
    const double len = b - a;
    auto g = [&](double s) {
        const double one_minus = 1.0 - s;
        const double t = b - len * std::pow(one_minus, p);
        return f(t) * (p * len * std::pow(one_minus, p - 1.0));
    };
    return integrate(g, 0.0, 1.0, abs_tol);
}

// Fixed 20-point Gauss-Legendre rule applied panel-wise over consecutive edges.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline PanelRule gauss_panels(const std::vector<double>& edges) {
    using boost::math::quadrature::gauss;
    const auto& x = gauss<double, 20>::abscissa();
    const auto& w = gauss<double, 20>::weights();
    PanelRule rule;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double c = 0.5 * (edges[k] + edges[k + 1]);
        const double h = 0.5 * (edges[k + 1] - edges[k]);
        for (std::size_t i = 0; i < x.size(); ++i) {
            // the tabulated abscissae are the nonnegative half
            if (x[i] == 0.0) {
                rule.nodes.push_back(c);
                rule.weights.push_back(h * w[i]);
                continue;
            }
            rule.nodes.push_back(c - h * x[i]);
            rule.weights.push_back(h * w[i]);
            rule.nodes.push_back(c + h * x[i]);
            rule.weights.push_back(h * w[i]);
        }
    }
    return rule;
}

// Edges for panels clustered geometrically towards both ends of [a, b].
inline std::vector<double> graded_edges(double a, double b, double smallest, double ratio = 2.0) {
    std::vector<double> left{a};
    const double mid = 0.5 * (a + b);
    double h = smallest;
    while (a + h < mid) {
        left.push_back(a + h);
        h *= ratio;
    }
    std::vector<double> edges = left;
    edges.push_back(mid);
    for (auto it = left.rbegin(); it != left.rend(); ++it) edges.push_back(b - (*it - a));
    return edges;
}

}  // namespace bvortex::quad
