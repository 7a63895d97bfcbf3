#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "bvortex/conformal.hpp"

namespace bvortex {

inline int wavenumber(int k, int n) { return k <= n / 2 ? k : k - n; }

// Unnormalized forward DFT, full spectrum.
inline std::vector<cplx> fft_forward(const std::vector<double>& u) {
    Eigen::FFT<double> fft;
    std::vector<cplx> out;
    fft.fwd(out, u);
    return out;
}

// Inverse DFT including the 1/n factor; the imaginary residue is dropped.
inline std::vector<double> fft_inverse(const std::vector<cplx>& c) {
    Eigen::FFT<double> fft;
    std::vector<double> out;
    fft.inv(out, c);
    return out;
}

// Apply a real even Fourier symbol s(|k|) to a real periodic sample vector.
template <class Symbol>
std::vector<double> fourier_multiply(const std::vector<double>& u, Symbol&& symbol) {
    const int n = static_cast<int>(u.size());
    auto c = fft_forward(u);
    for (int k = 0; k < n; ++k) c[k] *= symbol(std::abs(wavenumber(k, n)));
    return fft_inverse(c);
}

// Dirichlet-to-Neumann map of the unit disk: e^{ik theta} -> |k| e^{ik theta}.
inline std::vector<double> dtn_apply(const std::vector<double>& u) {
    return fourier_multiply(u, [](int k) { return static_cast<double>(k); });
}

// Half-Laplacian on a uniform periodic grid of the given period.
inline std::vector<double> half_laplacian_apply(const std::vector<double>& u, double period = 2 * pi) {
    const double scale = 2 * pi / period;
    return fourier_multiply(u, [scale](int k) { return scale * k; });
}

// Dense circulant matrix of dtn_apply.
inline Eigen::MatrixXd dtn_matrix(int n) {
    std::vector<cplx> symbol(n);
    for (int k = 0; k < n; ++k) symbol[k] = std::abs(wavenumber(k, n));
    const auto col = fft_inverse(symbol);
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) m(j, l) = col[((j - l) % n + n) % n];
    return m;
}

// Coefficients c_k of the trigonometric interpolant sum_k c_k e^{ik theta}
// through samples at theta_j = theta0 + 2 pi j/n; index k in [0, n/2].
inline std::vector<cplx> trig_coefficients(const std::vector<double>& u, double theta0 = 0.0) {
    const int n = static_cast<int>(u.size());
    auto c = fft_forward(u);
    std::vector<cplx> out(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) out[k] = c[k] * std::polar(1.0 / n, -k * theta0);
    return out;
}

// Analytic extension F(zeta) = c_0 + 2 sum_{0<k<n/2} c_k zeta^k + c_{n/2} zeta^{n/2},
// whose real part is the harmonic extension of the interpolant.
inline cplx trig_extension(const std::vector<cplx>& c, cplx zeta) {
    const int m = static_cast<int>(c.size()) - 1;
    cplx acc = c[m];
    for (int k = m - 1; k >= 1; --k) acc = acc * zeta + 2.0 * c[k];
    return acc * zeta + c[0];
}

inline cplx trig_extension_derivative(const std::vector<cplx>& c, cplx zeta) {
    const int m = static_cast<int>(c.size()) - 1;
    cplx acc = static_cast<double>(m) * c[m];
    for (int k = m - 1; k >= 1; --k) acc = acc * zeta + 2.0 * k * c[k];
    return acc;
}

}  // namespace bvortex
