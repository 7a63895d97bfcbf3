#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "bvortex/renormalized_energy.hpp"

using namespace bvortex;

namespace {

double disk_formula(double a, double b) { return (4.0 / pi) * std::log(std::abs(std::polar(1.0, a) - std::polar(1.0, b))); }

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::insufficient;
}

// plain partial sum, no tail logic
double phi_oracle(double L, double H, double x, double xt, int terms) {
    double s = 0;
    for (int n = 1; n <= terms; ++n) {
        const double sh = std::sinh(n * pi * H / L);
        if (std::isinf(sh)) break;
        s += n * std::sin(n * pi * x / L) * std::sin(n * pi * xt / L) / sh;
    }
    return 2 * pi / (L * L) * s;
}

}  // namespace

TEST(RenormWDisk, Examples) {
    const auto d = DomainSpec::unit_disk();
    const double w = renorm_w_conformal(d, boundary_point(d, 0.0), boundary_point(d, pi));
    EXPECT_NEAR(w, 4.0 / pi * std::log(2.0), 1e-12);
    EXPECT_NEAR(w, 0.882542, 1e-6);
    EXPECT_NEAR(renorm_w_conformal(d, boundary_point(d, 0.3), boundary_point(d, 0.3 + pi / 3)), 0.0, 1e-12);
}

TEST(RenormWDisk, Symmetric) {
    const auto d = DomainSpec::unit_disk();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int k = 0; k < 20; ++k) {
        const auto p = boundary_point(d, u(rng)), q = boundary_point(d, u(rng));
        EXPECT_NEAR(renorm_w_conformal(d, p, q), renorm_w_conformal(d, q, p), 1e-12);
    }
}

TEST(RenormWDisk, ThreeCharacterizationsAgree) {
    const auto d = DomainSpec::unit_disk();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int k = 0; k < 50; ++k) {
        const double a = u(rng), b = u(rng);
        const auto p = boundary_point(d, a), q = boundary_point(d, b);
        const double ref = disk_formula(a, b);
        EXPECT_NEAR(renorm_w_conformal(d, p, q), ref, 1e-9);
        EXPECT_NEAR(renorm_w_green(d, p, q), ref, 1e-9);
        EXPECT_NEAR(renorm_w_neumann(d, p, q), ref, 1e-9);
        EXPECT_NEAR(renorm_w(d, a, b), ref, 1e-9);
    }
}

TEST(RenormW, Errors) {
    const auto disk = DomainSpec::unit_disk();
    const auto p = boundary_point(disk, 1.0);
    EXPECT_EQ(kind_of([&] { renorm_w_conformal(disk, p, p); }), ErrorKind::diagonal);
    EXPECT_EQ(kind_of([&] { renorm_w_green(disk, p, p); }), ErrorKind::diagonal);
    EXPECT_EQ(kind_of([&] { renorm_w(disk, 1.0, 1.0 + 2 * pi); }), ErrorKind::diagonal);

    const auto rect = DomainSpec::rectangle(1, 1);
    EXPECT_EQ(kind_of([&] { renorm_w_conformal(rect, boundary_point(rect, 0.5), boundary_point(rect, 2.5)); }),
              ErrorKind::capability);
    EXPECT_EQ(kind_of([&] { renorm_w_neumann(rect, boundary_point(rect, 0.5), boundary_point(rect, 2.5)); }),
              ErrorKind::capability);
    EXPECT_EQ(kind_of([&] { renorm_w(rect, 0.5, 1.5); }), ErrorKind::capability);
    EXPECT_EQ(kind_of([&] { renorm_w(rect, 1.0, 2.5); }), ErrorKind::corner);

    const auto sc = DomainSpec::equiangular_polygon(4, 0.1);
    EXPECT_EQ(kind_of([&] { renorm_w_green(sc, boundary_point(sc, 1.5), boundary_point(sc, 3.5)); }), ErrorKind::capability);

    const auto sq = DomainSpec::regular_polygon_disk(4, 1.0);
    EXPECT_EQ(kind_of([&] { renorm_w_conformal(sq, boundary_point(sq, 0.0), boundary_point(sq, pi / 4)); }),
              ErrorKind::corner);
}

TEST(RenormW, CrossRatioInvariance) {
    const Normalization alt{{0.3, -0.2}, 0.7};
    for (const auto& d : {DomainSpec::unit_disk(), DomainSpec::regular_polygon_disk(4, 0.95),
                          DomainSpec::regular_polygon_disk(6, 1.0), DomainSpec::equiangular_polygon(4, 0.1)}) {
        const bool sc = d.as<ScPolygon>() != nullptr;
        for (auto [a, b] : std::vector<std::pair<double, double>>{{0.4, 2.0}, {1.0, 4.0}, {0.2, 3.0}}) {
            if (sc) {
                a = 1.0 + a;
                b = 1.0 + 0.7 * b;
            }
            const auto p = boundary_point(d, a), q = boundary_point(d, b);
            EXPECT_NEAR(renorm_w_conformal(d, p, q), renorm_w_conformal(d, p, q, alt), 1e-10) << d.kind_name();
            EXPECT_NEAR(renorm_w_conformal(d, p, q), renorm_w(d, a, b), 1e-10) << d.kind_name();
        }
    }
}

TEST(RenormW, DiskRadiusScaling) {
    const auto d = DomainSpec::unit_disk();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (double R : {0.5, 3.0}) {
        for (int k = 0; k < 10; ++k) {
            const double a = u(rng), b = u(rng);
            BoundaryPoint p{a, std::polar(R, a), R}, q{b, std::polar(R, b), R};
            EXPECT_NEAR(renorm_w_conformal(d, p, q), disk_formula(a, b) + 4.0 / pi * std::log(R), 1e-10);
        }
    }
}

TEST(RectanglePhi, Examples) {
    EXPECT_EQ(rectangle_phi(1, 1, 0.0, 0.3), 0.0);
    EXPECT_NEAR(rectangle_phi(1, 1, 0.5, 0.5, 50), rectangle_phi(1, 1, 0.5, 0.5, 100), 1e-14);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int k = 0; k < 20; ++k) {
        const double x = u(rng), xt = u(rng);
        EXPECT_EQ(rectangle_phi(1, 2, x, xt), rectangle_phi(1, 2, xt, x));
    }
    EXPECT_GT(rectangle_phi(1, 1, 0.5, 0.5), 0.0);
}

TEST(RectanglePhi, MatchesLongPartialSum) {
    for (auto [L, H] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {0.8, 1}}) {
        for (double s : {0.5, 0.3, 0.9}) {
            const double x = s * L, xt = (1 - 0.5 * s) * L;
            EXPECT_NEAR(rectangle_phi(L, H, x, xt), phi_oracle(L, H, x, xt, 10000), 1e-13);
        }
        const double w = rectangle_w(L, H, 0.5 * L, 0.5 * L);
        EXPECT_NEAR(w, -2.0 / pi * std::log(pi * phi_oracle(L, H, 0.5 * L, 0.5 * L, 10000)), 1e-12);
    }
}

TEST(RectanglePhi, UnitSquareMatchesConformalRoute) {
    const double series = rectangle_w(1, 1, 0.5, 0.5);
    const double conformal = renorm_w(DomainSpec::regular_polygon_disk(4, 1.0), pi / 4, 5 * pi / 4);
    EXPECT_NEAR(series, conformal, 1e-10);
    EXPECT_NEAR(series, -0.344809, 1e-6);
}

TEST(RectangleGreen, SymmetricInArguments) {
    const auto d = DomainSpec::rectangle(1, 2);
    // bottom x = 0.3, top x~ = 0.6 is parameter L + H + (L - 0.6)
    const double t1 = 0.3, t2 = 3.0 + 0.4;
    const double a = renorm_w(d, t1, t2);
    EXPECT_NEAR(a, renorm_w(d, t2, t1), 1e-14);
    EXPECT_NEAR(a, rectangle_w(1, 2, 0.3, 0.6), 1e-14);
    EXPECT_NEAR(rectangle_w(1, 2, 0.3, 0.6), rectangle_w(1, 2, 0.6, 0.3), 1e-14);
    // left/right pair is the transposed rectangle
    EXPECT_NEAR(renorm_w(d, 1.0 + 0.5, 6.0 - 1.5), rectangle_w(2, 1, 0.5, 1.5), 1e-14);
}

TEST(RectangleHessian, NegativeDefiniteAtMidpoint) {
    for (auto [L, H] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {0.8, 1}}) {
        const auto m = rectangle_hessian_at_midpoint(L, H);
        EXPECT_TRUE(m.negative_definite) << L << "x" << H;
        EXPECT_LT(m.phi_xx, 0.0);
        EXPECT_LT(std::abs(m.phi_xxt), -m.phi_xx);
        EXPECT_LE(std::abs(m.phi_x), 1e-12 * m.phi);
        Eigen::Matrix2d h;
        h << m.w_hessian[0][0], m.w_hessian[0][1], m.w_hessian[1][0], m.w_hessian[1][1];
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h).eigenvalues()(0), 0.0);
    }
}

TEST(RectangleHessian, MatchesFiniteDifferences) {
    const double L = 1, H = 2, h = 1e-4, x = 0.5;
    auto W = [&](double a, double b) { return rectangle_w(L, H, a, b); };
    const auto m = rectangle_hessian_at_midpoint(L, H);
    EXPECT_NEAR(m.w_hessian[0][0], (W(x + h, x) - 2 * W(x, x) + W(x - h, x)) / (h * h), 1e-5);
    EXPECT_NEAR(m.w_hessian[0][1], (W(x + h, x + h) - W(x + h, x - h) - W(x - h, x + h) + W(x - h, x - h)) / (4 * h * h), 1e-5);
}

TEST(RectangleHessian, TermSignTest) {
    const double L = 1, H = 2;
    for (int k = 1; k <= 10; ++k) {
        const double odd = std::pow(2 * k - 1, 3) / std::sinh(pi * H * (2 * k - 1) / L);
        const double even = std::pow(2 * k, 3) / std::sinh(pi * H * 2 * k / L);
        EXPECT_GT(odd, even) << k;
    }
}

TEST(ThreeTanhRoot, Value) {
    const double t0 = three_tanh_root();
    EXPECT_NEAR(t0, 2.9847, 1e-3);
    EXPECT_LE(std::abs(t0 - 3 * std::tanh(t0)), 1e-12);
    EXPECT_LT(2.5 - 3 * std::tanh(2.5), 0.0);
    EXPECT_GT(3.0 - 3 * std::tanh(3.0), 0.0);
}

TEST(Landscape, DiskSymmetricUnderSwap) {
    const auto land = compute_landscape(DomainSpec::unit_disk(), 64);
    EXPECT_NEAR(land.excluded_band, 0.05 * 2 * pi, 1e-15);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) {
            EXPECT_EQ(land.retained(i, j), land.retained(j, i));
            if (land.retained(i, j)) {
                EXPECT_TRUE(std::isfinite(land.at(i, j)));
                EXPECT_NEAR(land.at(i, j), land.at(j, i), 1e-12);
            }
        }
    EXPECT_FALSE(land.retained(3, 3));
}

TEST(Landscape, RectangleReflection) {
    const auto land = compute_landscape(DomainSpec::rectangle(1, 2), 64);
    const std::size_t n = land.tp.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ASSERT_TRUE(land.retained(i, j));
            EXPECT_NEAR(land.at(i, j), land.at(n - 1 - i, n - 1 - j), 1e-10);
        }
}

TEST(Landscape, ThreadCountDoesNotChangeValues) {
    const auto d = DomainSpec::equiangular_polygon(5, 0.05);
    const auto a = compute_landscape(d, 64, -1, 1), b = compute_landscape(d, 64, -1, 3);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k)
        if (!std::isnan(a.values[k])) EXPECT_EQ(a.values[k], b.values[k]);
}

TEST(FindLocalMinima, DiskHasNone) {
    const auto s = find_local_minima(DomainSpec::unit_disk(), 64);
    EXPECT_TRUE(s.minima.empty());
}

TEST(FindLocalMinima, RectangleMidpoint) {
    for (auto [L, H] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}}) {
        const auto s = find_local_minima(DomainSpec::rectangle(L, H), 64);
        bool hit = false;
        for (const auto& m : s.minima)
            if (std::abs(m.p.t - 0.5 * L) <= 1e-6 && std::abs(m.q.t - (L + H + 0.5 * L)) <= 1e-6) hit = true;
        EXPECT_TRUE(hit) << L << "x" << H;
    }
}

TEST(FindLocalMinima, RejectsCoarseGrid) { EXPECT_THROW(find_local_minima(DomainSpec::unit_disk(), 32), Error); }

TEST(FindLocalMinima, HexagonCertifiedCells) {
    const int N = 6;
    const double b = 0.5 * polygon_certificate_threshold(N, 1.0 / N - 2.0);
    const auto d = DomainSpec::equiangular_polygon(N, b);
    const auto s = find_local_minima(d, 64);
    EXPECT_EQ(s.minima.size(), 6u);
    int in_cells = 0;
    for (const auto& m : s.minima) {
        EXPECT_LT(m.p.t, m.q.t);
        EXPECT_EQ(m.classification, CriticalClass::isolated_min);
        EXPECT_LE(m.gradient_norm, 1e-8);
        Eigen::Matrix2d h;
        h << m.hessian[0][0], m.hessian[0][1], m.hessian[1][0], m.hessian[1][1];
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h).eigenvalues()(0), 1e-10);
        const int A = static_cast<int>(std::floor(m.p.t)), B = static_cast<int>(std::floor(m.q.t));
        if (A >= 1 && B >= A + 2 && B + 1 <= N && polygon_minima_certificate(N, b, A, B).certified) ++in_cells;
    }
    EXPECT_EQ(in_cells, 6);
}

TEST(FindLocalMinima, StationaryAndPositiveDefinite) {
    const auto d = DomainSpec::sc_polygon({0.5, 1, 1.75, 2.25}, {0.5, 0.5, 0.5, 0.5}, 0.05);
    const auto s = find_local_minima(d, 64);
    ASSERT_EQ(s.minima.size(), 1u);
    const auto& m = s.minima.front();
    const double h = 1e-4;
    const double gp = (renorm_w(d, m.p.t + h, m.q.t) - renorm_w(d, m.p.t - h, m.q.t)) / (2 * h);
    const double gq = (renorm_w(d, m.p.t, m.q.t + h) - renorm_w(d, m.p.t, m.q.t - h)) / (2 * h);
    EXPECT_LE(std::hypot(gp, gq), 1e-6);
    EXPECT_LT(renorm_w(d, m.p.t, m.q.t), renorm_w(d, m.p.t + 0.05, m.q.t - 0.05));
}

TEST(PolygonCertificate, BisectionThresholdN4) {
    const int N = 4;
    double lo = 1e-30, hi = 0.999;
    ASSERT_TRUE(polygon_minima_certificate(N, lo, 1, 3).certified);
    ASSERT_FALSE(polygon_minima_certificate(N, hi, 1, 3).certified);
    for (int k = 0; k < 200; ++k) {
        const double mid = std::sqrt(lo * hi);
        (polygon_minima_certificate(N, mid, 1, 3).certified ? lo : hi) = mid;
    }
    EXPECT_NEAR(lo / polygon_certificate_threshold(N, 1.0 / N - 2.0), 1.0, 1e-10);
    // direct inequality at the threshold
    const double bs = polygon_certificate_threshold(N, 1.0 / N - 2.0);
    EXPECT_NEAR(16.0 * N * N, std::pow(bs, -2.0 / N) * std::pow(N * N + 1.0, 1.0 / N - 2.0), 1e-9 * 16 * N * N);
}

TEST(PolygonCertificate, MonotoneInB) {
    for (int N : {4, 5, 6, 8}) {
        for (double b = 0.5; b > 1e-40; b *= 0.1) {
            const auto c = polygon_minima_certificate(N, b, 1, 3);
            const auto h = polygon_minima_certificate(N, 0.5 * b, 1, 3);
            if (c.certified) EXPECT_TRUE(h.certified);
            if (c.certified_alt) EXPECT_TRUE(h.certified_alt);
            EXPECT_GE(h.boundary_bound, c.boundary_bound);
        }
    }
}

TEST(PolygonCertificate, HexagonAllCellsCertified) {
    const int N = 6;
    const double b = 0.5 * polygon_certificate_threshold(N, 1.0 / N - 2.0);
    int cells = 0, certified = 0;
    for (int A = 1; A <= N; ++A)
        for (int B = A + 2; B + 1 <= N; ++B) {
            ++cells;
            const auto c = polygon_minima_certificate(N, b, A, B);
            certified += c.certified;
            EXPECT_TRUE(c.certified_alt);
        }
    EXPECT_EQ(cells, (N - 2) * (N - 3) / 2);
    EXPECT_EQ(certified, 6);
}

TEST(PolygonCertificate, Errors) {
    EXPECT_THROW(polygon_minima_certificate(6, 0.0, 1, 3), Error);
    EXPECT_THROW(polygon_minima_certificate(6, 1.0, 1, 3), Error);
    EXPECT_THROW(polygon_minima_certificate(6, 0.1, 1, 2), Error);
    EXPECT_THROW(polygon_minima_certificate(6, 0.1, 2, 6), Error);
    EXPECT_THROW(polygon_minima_certificate(2, 0.1, 1, 3), Error);
}
