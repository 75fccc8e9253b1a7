#include <catch_amalgamated.hpp>

#include <cmath>
#include <future>
#include <numbers>
#include <random>

#include "knapp/quadrature.hpp"

using namespace knapp;
using Catch::Approx;

namespace {

KnappParams slab(int k) { return make_params(0.01, 2e-6, k, SlabMode::make_slab(), 0.5, -0.25); }
KnappParams surface(int k) { return make_params(0.01, 2e-6, k, SlabMode::make_surface(), 0.5, -0.25); }

double slope(double x0, double y0, double x1, double y1) { return std::log(y1 / y0) / std::log(x1 / x0); }

}  // namespace

TEST_CASE("lambda_hat vanishes at t = 0", "[quadrature]") {
    KnappParams p = slab(1);
    p.eps = 0.0;  // test-only: make_params rejects eps = 0
    const auto b = lambda_hat(p, wsamp_box(p).center(), Component::both);
    CHECK(b.total == cplx(0, 0));
    CHECK(b.nonresonant_envelope > 0.0);
}

TEST_CASE("lambda_hat vanishes off the Minkowski-sum support", "[quadrature]") {
    const KnappParams p = slab(2);
    for (const Vec3& xi : {Vec3{0.5 * p.lambda, 1.0, 1.0}, Vec3{p.lambda, -1e-3 * std::sqrt(p.lambda), 1.0},
                           Vec3{-p.lambda, 1.0, 1.0}}) {
        const auto b = lambda_hat(p, xi, Component::both);
        CHECK(b.total == cplx(0, 0));
        CHECK(b.converged);
    }
    CHECK_THROWS_AS(lambda_hat(p, {0, 0, 0}, Component::both), singular_frequency);
}

TEST_CASE("AmplitudeBreakdown invariants", "[quadrature][property]") {
    std::mt19937_64 rng(6);
    for (int k : {1, 4, 9}) {
        for (const KnappParams& p : {slab(k), surface(k)}) {
            const Box3 ws = wsamp_box(p);
            std::uniform_real_distribution<double> u1(ws.axis(0).lo, ws.axis(0).hi);
            std::uniform_real_distribution<double> u2(ws.axis(1).lo, ws.axis(1).hi);
            std::uniform_real_distribution<double> u3(ws.axis(2).lo, ws.axis(2).hi);
            const Vec3 xi{u1(rng), u2(rng), u3(rng)};
            const auto b = lambda_hat(p, xi, Component::both);
            cplx sum{};
            for (const auto& v : b.per_sign) sum += v;
            CHECK(std::abs(sum - b.total) <= 1e-12 * std::abs(b.total));
            CHECK(std::abs(b.resonant_sum + b.nonresonant_sum - b.total) <= 1e-12 * std::abs(b.total));
            CHECK(std::abs(b.nonresonant_sum) <= b.nonresonant_envelope);
            CHECK(b.converged);
            CHECK(b.t == p.eps / std::sqrt(p.lambda));
            // 4i F is real.
            const cplx x = cplx(0, 4) * b.total;
            CHECK(std::abs(x.imag()) <= 1e-8 * std::abs(x));
        }
    }
}

TEST_CASE("sign subsets add up to the full sum", "[quadrature]") {
    const KnappParams p = slab(3);
    const Vec3 xi = wsamp_box(p).center();
    const auto full = lambda_hat(p, xi, Component::lambda1);
    cplx sum{};
    for (int s = 0; s < 8; ++s) sum += lambda_hat(p, xi, Component::lambda1, only(SignTriple(s))).total;
    CHECK(std::abs(sum - full.total) <= 1e-12 * std::abs(full.total));

    const auto both = lambda_hat(p, xi, Component::both);
    const auto l2 = lambda_hat(p, xi, Component::lambda2);
    CHECK(std::abs(full.total + l2.total - both.total) <= 1e-12 * std::abs(both.total));
}

TEST_CASE("amplitude grows like eps lambda with a k-uniform constant", "[quadrature]") {
    double cmin = 1e300, cmax = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const KnappParams p = slab(k);
        const auto b = lambda_hat(p, wsamp_box(p).center(), Component::both);
        const double c = std::abs(b.total) / (p.eps * p.lambda);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
        // The two terms of each Lambda are nonnegative, so the resonant part
        // carries nearly all of the amplitude.
        CHECK(std::abs(b.resonant_sum) >= 5.0 * std::abs(b.nonresonant_sum));
    }
    CHECK(cmin > 0.0);
    CHECK(cmax / cmin < 1.01);
}

TEST_CASE("doubling the grid barely moves the amplitude", "[quadrature]") {
    KnappParams p = slab(5);
    const Vec3 xi = wsamp_box(p).center();
    const double a = std::abs(lambda_hat(p, xi, Component::both).total);
    p.grid = detail::doubled(p.grid);
    const double b = std::abs(lambda_hat(p, xi, Component::both).total);
    CHECK(std::abs(a - b) <= 1e-4 * b);
}

TEST_CASE("evaluations are independent across threads", "[quadrature][concurrency]") {
    const KnappParams p = slab(2);
    const Vec3 xi = wsamp_box(p).center();
    const auto ref = lambda_hat(p, xi, Component::lambda1);
    std::vector<std::future<AmplitudeBreakdown>> jobs;
    for (int i = 0; i < 4; ++i)
        jobs.push_back(std::async(std::launch::async, [&] { return lambda_hat(p, xi, Component::lambda1); }));
    for (auto& j : jobs) CHECK(j.get().total == ref.total);
}

TEST_CASE("resonance_classify", "[quadrature]") {
    const KnappParams p = slab(4);
    const Vec3 xi = p.w().center();
    const Vec3 eta = p.minus_w_prime().center();  // Lambda^1 term 2: xi-eta ~ 2 lambda e1, eta ~ -lambda e1
    const auto cls = resonance_classify(p, xi, eta);
    for (int s = 0; s < 8; ++s) {
        CHECK(cls[static_cast<std::size_t>(s)].omega == -cls[static_cast<std::size_t>(7 - s)].omega);
        CHECK(cls[static_cast<std::size_t>(s)].pattern == SignTriple(s).uniform());
    }
    const auto& pmm = cls[static_cast<std::size_t>(SignTriple(1, -1, -1).index())];
    CHECK(pmm.omega == Approx(4.0 * p.lambda).epsilon(1e-5));
    CHECK_FALSE(pmm.empirical);

    double min_abs = 1e300;
    int argmin = -1;
    for (int s = 0; s < 8; ++s) {
        if (std::abs(cls[static_cast<std::size_t>(s)].omega) < min_abs) {
            min_abs = std::abs(cls[static_cast<std::size_t>(s)].omega);
            argmin = s;
        }
    }
    CHECK(min_abs <= std::sqrt(p.lambda));
    // The near-cancelling triple has s3 opposite to s1 = s2.
    CHECK((SignTriple(argmin) == SignTriple(1, 1, -1) || SignTriple(argmin) == SignTriple(-1, -1, 1)));
    CHECK(cls[static_cast<std::size_t>(argmin)].empirical);
    CHECK_FALSE(cls[static_cast<std::size_t>(argmin)].pattern);
}

TEST_CASE("sobolev_norm_monomial closed forms", "[quadrature][norms]") {
    const Box3 u = Box3::volume({0, 1}, {0, 1}, {0, 1});
    const double c = std::pow(2.0 * std::numbers::pi, -1.5);
    CHECK(sobolev_norm_monomial(u, {0, 0, 0}, 1.0, 0.0) == Approx(c).epsilon(1e-13));
    CHECK(sobolev_norm_monomial(u, {1, 0, 0}, 1.0, 0.0) == Approx(c / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(sobolev_norm_monomial(u, {1, 0, 0}, 3.0, 0.0) == Approx(3.0 * c / std::sqrt(3.0)).epsilon(1e-13));
    // <xi>^2 = 1 + |xi|^2: int (1 + |xi|^2) xi1^2 = 1/3 + 1/5 + 2/9.
    CHECK(sobolev_norm_monomial(u, {1, 0, 0}, 1.0, 1.0) == Approx(c * std::sqrt(1.0 / 3 + 1.0 / 5 + 2.0 / 9)).epsilon(1e-13));
}

TEST_CASE("||d2 a1||_{H^r} scales like lambda^{r+3/2}", "[quadrature][norms]") {
    const KnappParams a = slab(1), b = slab(10);
    for (double r : {-0.5, -0.25, 0.0}) {
        const double na = sobolev_norm_monomial(a.two_w(), {0, 1, 0}, 1.0, r);
        const double nb = sobolev_norm_monomial(b.two_w(), {0, 1, 0}, 1.0, r);
        CHECK(std::abs(slope(a.lambda, na, b.lambda, nb) - (r + 1.5)) <= 0.05);
    }
}

TEST_CASE("product_norm", "[quadrature][norms]") {
    SECTION("unit cubes: the tent-function closed form") {
        const Box3 u = Box3::volume({0, 1}, {0, 1}, {0, 1});
        const double exact = std::pow(2.0 * std::numbers::pi, -4.5) * std::sqrt(8.0 / 27.0);
        CHECK(product_norm(u, u, 0.0) == Approx(exact).epsilon(1e-3));
        CHECK(product_norm(u, u, 0.0) == Approx(exact).epsilon(1e-10));
    }
    SECTION("offset boxes of different sizes") {
        // chi_[0,1] * chi_[0,2] is a trapezoid on [0,3]; its square integrates to 2/3 + 1 + ... per axis:
        // int_0^1 x^2 + int_1^2 1 + int_2^3 (3-x)^2 = 1/3 + 1 + 1/3.
        const Box3 a = Box3::volume({0, 1}, {0, 1}, {0, 1});
        const Box3 b = Box3::volume({5, 7}, {5, 7}, {5, 7});
        const double per_axis = 1.0 / 3 + 1.0 + 1.0 / 3;
        const double exact = std::pow(2.0 * std::numbers::pi, -4.5) * std::pow(per_axis, 1.5);
        CHECK(product_norm(a, b, 0.0) == Approx(exact).epsilon(1e-10));
    }
    SECTION("the convolution lives on 2W + (-W')") {
        const KnappParams p = slab(2);
        const Box3 tw = p.two_w();
        const Box3 mw = p.minus_w_prime();
        const Vec3 outside{tw.axis(0).hi + mw.axis(0).hi + 1.0, tw.axis(1).mid(), tw.axis(2).mid()};
        CHECK_FALSE(admissible_eta_region(outside, tw, mw).has_value());
        const Vec3 inside{tw.axis(0).mid() + mw.axis(0).mid(), tw.axis(1).mid() + mw.axis(1).mid(),
                          tw.axis(2).mid() + mw.axis(2).mid()};
        CHECK(admissible_eta_region(inside, tw, mw).has_value());
        CHECK(product_norm(p, -0.25) > 0.0);
    }
}

TEST_CASE("output_norm_lower", "[quadrature][norms]") {
    const KnappParams p = slab(3);
    SECTION("unit amplitude gives the H^s norm of the indicator of W_samp") {
        const auto n = output_norm_lower(p, 27, [](const Vec3&) { return 1.0; });
        const Box3 ws = wsamp_box(p);
        const double ref = std::sqrt(kTwoPiCubedInv * quadrature_grid(ws, {64, 8, 8}).integrate([&](const Vec3& x) {
            return std::pow(1.0 + dot(x, x), p.s_exp);
        }));
        CHECK(n.value == Approx(ref).epsilon(1e-9));
        CHECK(n.value ==
              Approx(std::pow(p.lambda, p.s_exp) * std::sqrt(kTwoPiCubedInv * ws.measure())).epsilon(1e-5));
    }
    SECTION("full evaluation converges and is positive") {
        const auto n = output_norm_lower(p, 8);
        CHECK(n.converged);
        CHECK(n.value > 0.0);
    }
    CHECK_THROWS_AS(output_norm_lower(p, 7), invalid_parameter);
}
