#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "knapp/construction.hpp"

using namespace knapp;
using Catch::Approx;

namespace {

Vec3 draw(const Box3& b, std::mt19937_64& rng) {
    Vec3 x{};
    for (int i = 0; i < 3; ++i) {
        const Interval& iv = b.axis(i);
        std::uniform_real_distribution<double> u(iv.lo, iv.hi);
        x[static_cast<std::size_t>(i)] = iv.degenerate() ? iv.lo : u(rng);
    }
    return x;
}

}  // namespace

TEST_CASE("lambda_window", "[construction]") {
    const double pi = std::numbers::pi;
    const auto w = lambda_window(0.01, 2e-6, 1);
    REQUIRE(w.has_value());
    CHECK(w->first == Approx((2 * pi - 0.01) / (0.01 * (1 - 2e-6))).epsilon(1e-15));
    CHECK(w->second == Approx((2 * pi + 0.01) / (0.01 * (1 + 2e-6))).epsilon(1e-15));
    CHECK(w->first == Approx(627.32).margin(0.005));
    CHECK(w->second == Approx(629.32).margin(0.005));

    CHECK_FALSE(lambda_window(0.01, 1e-3, 100).has_value());

    CHECK_THROWS_AS(lambda_window(0.01, 1.0, 1), invalid_parameter);
    CHECK_THROWS_AS(lambda_window(0.01, 0.0, 1), invalid_parameter);
    CHECK_THROWS_AS(lambda_window(0.2, 1e-6, 1), invalid_parameter);
    CHECK_THROWS_AS(lambda_window(0.01, 1e-6, 0), invalid_parameter);
}

TEST_CASE("window emptiness threshold rho = eps / (2 k pi)", "[construction][property]") {
    for (int k = 1; k <= 50; ++k) {
        for (double eps : {1e-3, 0.01, 0.1}) {
            const double rho_max = eps / (2.0 * k * std::numbers::pi);
            if (rho_max < 1.0) {
                CHECK(lambda_window(eps, rho_max * 0.999, k).has_value());
                CHECK_FALSE(lambda_window(eps, std::min(rho_max * 1.001, 0.999), k).has_value());
            }
        }
    }
}

TEST_CASE("make_params", "[construction]") {
    const KnappParams p = make_params(0.01, 2e-6, 1, SlabMode::make_slab(), 0.5, -0.25);
    const auto w = *lambda_window(0.01, 2e-6, 1);
    const double mid = 0.5 * (w.first + w.second);
    CHECK(p.lambda == Approx(mid * mid).epsilon(1e-15));
    CHECK(p.lambda == Approx(3.948e5).epsilon(1e-3));
    CHECK(p.t() == p.eps / std::sqrt(p.lambda));

    CHECK_THROWS_AS(make_params(0.01, 1e-9, 1, SlabMode::make_slab(), 0.5, -0.25), invalid_parameter);
    CHECK_THROWS_AS(make_params(0.01, 2e-6, 1, SlabMode::make_slab(), 0.5, -0.25, {0, 4, 4}), invalid_parameter);

    SECTION("empty window reports the largest workable rho") {
        try {
            make_params(0.01, 1e-3, 100, SlabMode::make_slab(), 0.5, -0.25);
            FAIL("expected window_empty");
        } catch (const window_empty& e) {
            CHECK(e.max_rho() == Approx(0.01 / (200.0 * std::numbers::pi)));
            CHECK_NOTHROW(make_params(0.01, 0.9 * e.max_rho(), 100, SlabMode::make_slab(), 0.5, -0.25));
        }
    }
}

TEST_CASE("window soundness: t|xi| stays within eps of 2k pi on W_lambda", "[construction][property]") {
    std::mt19937_64 rng(4);
    for (int k = 1; k <= 10; ++k) {
        const KnappParams p = make_params(0.01, 2e-6, k, SlabMode::make_slab(), 0.5, -0.25);
        const Box3 w = p.w();
        const double centre = 2.0 * k * std::numbers::pi;
        for (int i = 0; i < 1000; ++i) {
            const double phase = p.t() * norm(draw(w, rng));
            CHECK(phase > centre - p.eps);
            CHECK(phase < centre + p.eps);
            CHECK(std::cos(phase) >= std::cos(p.eps));
        }
    }
}

TEST_CASE("a_hat", "[construction]") {
    const KnappParams p = make_params(0.01, 2e-6, 2, SlabMode::make_surface(), 0.5, -0.25);
    const double lam = p.lambda;
    const double sq = std::sqrt(lam);
    CHECK(a_hat(p, Datum::a1, {2 * lam, 4e-9 * sq, 4e-9 * sq}) == 1.0);
    CHECK(a_hat(p, Datum::a1, {lam, 0, 0}) == 0.0);
    CHECK(a_hat(p, Datum::a2, {-lam, 0, 0}) == 1.0);

    KnappParams q = p;
    q.slab = SlabMode::make_slab(1e-6, 0.25);
    CHECK(a_hat(q, Datum::a2, {-lam, 0, 0.3e-6 * sq}) == 0.25);
    CHECK(a_hat(q, Datum::a2, {-lam, 0, 0.7e-6 * sq}) == 0.0);

    std::mt19937_64 rng(8);
    const Box3 big = box_scale(p.two_w(), 1.0 + 1e-6);
    for (int i = 0; i < 5000; ++i) {
        const Vec3 xi = draw(big, rng);
        CHECK((a_hat(p, Datum::a1, xi) == 1.0) == box_contains(p.two_w(), xi));
    }
}

TEST_CASE("curl_dF symbol", "[construction]") {
    const auto pieces = curl_dF_symbol({0, 1, 1}, 1.0, 0.0);
    CHECK(pieces.a1_part[0] == cplx(2, 0));
    CHECK(pieces.a1_part[1] == cplx(0, 0));
    CHECK(pieces.a1_part[2] == cplx(0, 0));

    const KnappParams p = make_params(0.01, 2e-6, 1, SlabMode::make_slab(), 0.5, -0.25);
    const auto zero = curl_dF_hat(p, {3.0, 1.0, 2.0});
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(zero.a1_part[c] == cplx(0, 0));
        CHECK(zero.a2_part[c] == cplx(0, 0));
    }
    CHECK_THROWS_AS(curl_dF_hat(p, {0, 0, 0}), singular_frequency);

    // Against curl curl a = grad div a - Laplacian a, i.e. -xi (xi . a) + |xi|^2 a.
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const bool plane = i % 2 == 0;
        const Vec3 xi{u(rng), u(rng), plane ? 0.0 : u(rng)};
        const double a1 = u(rng) / 1e3;
        const double a2 = plane ? u(rng) / 1e3 : 0.0;
        const auto got = curl_dF_symbol(xi, a1, a2);
        const Vec3 a{a1, a2, 0};
        double scale = 0.0;
        for (std::size_t c = 0; c < 3; ++c) scale = std::max(scale, std::abs(-xi[c] * dot(xi, a) + dot(xi, xi) * a[c]));
        for (std::size_t c = 0; c < 3; ++c) {
            const double oracle = -xi[c] * dot(xi, a) + dot(xi, xi) * a[c];
            CHECK(std::abs(got.a1_part[c] + got.a2_part[c] - oracle) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("kernels", "[construction]") {
    for (const SlabMode mode : {SlabMode::make_slab(), SlabMode::make_surface()}) {
        const KnappParams p = make_params(0.01, 2e-6, 3, mode, 0.5, -0.25);
        const auto ks = kernels(p, Component::both);
        REQUIRE(ks.size() == 4);
        CHECK(kernels(p, Component::lambda1).size() == 2);
        CHECK(kernels(p, Component::lambda2).front().label == KernelLabel::lambda2_term1);

        std::mt19937_64 rng(21);
        for (const auto& k : ks) {
            for (int i = 0; i < 10000; ++i) {
                const Vec3 d = draw(k.support_a, rng);
                const Vec3 eta = draw(k.support_b, rng);
                const double w = k.weight(d + eta, eta);
                CHECK(std::isfinite(w));
                CHECK(w >= 0.0);
            }
        }
    }
}

TEST_CASE("kernel weights at box centres", "[construction]") {
    const KnappParams p = make_params(0.01, 2e-6, 1, SlabMode::make_slab(), 0.5, -0.25);
    const auto ks = kernels(p, Component::lambda1);
    const Vec3 xi = p.w().center();

    const auto& t1 = ks[0];
    const Vec3 eta1 = p.two_w().center();
    const Vec3 d1 = xi - eta1;
    const double expect1 = d1[0] * d1[0] * eta1[0] * eta1[0] * eta1[1] / (norm(xi) * dot(d1, d1) * dot(eta1, eta1));
    CHECK(t1.weight(xi, eta1) == Approx(expect1).epsilon(1e-14));
    CHECK(t1.weight(xi, eta1) > 0.0);

    // Term 2 at xi-eta ~ 2 lambda e1, eta ~ -lambda e1 is of size lambda^{-1/2}
    // and the product weight * sqrt(lambda) does not depend on lambda.
    auto scaled_t2 = [](int k) {
        const KnappParams q = make_params(0.01, 2e-6, k, SlabMode::make_slab(), 0.5, -0.25);
        const auto kk = kernels(q, Component::lambda1);
        const Vec3 x = q.w().center();
        const Vec3 e = q.minus_w_prime().center();
        const Vec3 eta{e[0], e[1] - 0.25e-6 * std::sqrt(q.lambda), e[2]};
        return kk[1].weight(x, eta) * std::sqrt(q.lambda);
    };
    const double c1 = scaled_t2(1);
    CHECK(c1 > 0.0);
    CHECK(c1 < 1e-5);
    CHECK(scaled_t2(10) == Approx(c1).epsilon(1e-9));
}
