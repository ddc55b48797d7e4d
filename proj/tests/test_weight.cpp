#include <cmath>

#include "doctest.h"
#include "wflab/weight.hpp"

using namespace wflab;

TEST_CASE("bracket atom evaluation") {
    CHECK(Weight::bracket_x(2.0).eval(0.0, 5.0) == doctest::Approx(1.0));
    // ⟨1⟩ = √2, so ⟨x⟩¹⟨ξ⟩¹ at (1,1) is 2
    CHECK(Weight::sigma(1.0, 1.0).eval(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Weight::bracket_joint(-3.0).eval(0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("weight algebra is exact") {
    Weight w1 = Weight::bracket_x(1.5) * Weight::bracket_xi(-2.0);
    Weight w2 = Weight::bracket_joint(0.5) * Weight::bracket_x(-0.25);
    const Real x = 3.7, xi = -11.2;
    CHECK((w1 * w2).eval(x, xi) == w1.eval(x, xi) * w2.eval(x, xi));
    CHECK(w1.inverse().eval(x, xi) == 1.0 / w1.eval(x, xi));
    CHECK((w1 / w2).eval(x, xi) == w1.eval(x, xi) / w2.eval(x, xi));
}

TEST_CASE("exponent bound is enforced") {
    CHECK_THROWS_AS(Weight::bracket_x(65.0), ContractError);
    CHECK_NOTHROW(Weight::bracket_x(64.0));
}

TEST_CASE("saturating evaluation") {
    Weight big = Weight::bracket_x(64.0) * Weight::bracket_x(64.0) * Weight::bracket_x(64.0) *
                 Weight::bracket_x(64.0);
    bool sat = false;
    const Real v = big.eval2(1e30, 0.0, 0.0, 0.0, sat);
    CHECK(sat);
    CHECK(std::isfinite(v));
}

TEST_CASE("torsion swaps the bracket slots") {
    Weight w = Weight::bracket_x(2.0) * Weight::bracket_xi(-1.0) * Weight::bracket_joint(0.5);
    Weight wt = w.torsion();
    const Real x = 1.3, xi = -2.1;
    CHECK(wt.eval(x, xi) == doctest::Approx(w.eval(-xi, x)).epsilon(1e-15));
}

TEST_CASE("moderateness certificates") {
    GridSpec g(1, 64, 16.0);
    SUBCASE("peetre pair passes") {
        auto rep = check_moderate(Weight::bracket_x(2.0), Weight::bracket_x(2.0), g);
        CHECK(rep.pass);
        CHECK(rep.max_ratio <= 4.0 + 1e-12);
    }
    SUBCASE("constant weight has ratio 1") {
        auto rep = check_moderate(Weight::one(), Weight::one(), g);
        CHECK(rep.max_ratio == doctest::Approx(1.0));
        CHECK(rep.pass);
    }
    SUBCASE("undermoderated pair fails") {
        auto rep = check_moderate(Weight::bracket_x(3.0), Weight::bracket_x(1.0), g);
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("bracket weights are joint-moderate") {
        for (Real t : {-2.0, -1.0, 1.0, 2.0})
            for (Real s : {-2.0, 1.0}) {
                Weight w = Weight::sigma(t, s);
                auto rep = check_moderate(w, Weight::bracket_joint(std::abs(t) + std::abs(s)), g);
                CHECK(rep.pass);
            }
    }
}

TEST_CASE("regularity class certificates") {
    GridSpec g(1, 256, 16.0);
    SUBCASE("bracket products pass with r=rho=1") {
        for (Real t : {-8.0, -2.0, 1.0, 8.0}) {
            auto rep = check_prr(Weight::sigma(t, -t / 2.0), 1.0, 1.0, 3, g);
            CHECK(rep.pass);
        }
    }
    SUBCASE("constant weight has vanishing higher seminorms") {
        auto rep = check_prr(Weight::one(), 1.0, 1.0, 2, g);
        CHECK(rep.pass);
        for (const auto& e : rep.seminorms) {
            if (e.ax1 + e.bx1 == 0)
                CHECK(e.value == doctest::Approx(1.0));
            else
                CHECK(e.value < 1e-6);
        }
    }
    SUBCASE("truncated super-exponential weight fails") {
        UserWeightFn fn;
        fn.name = "exp_x2_truncated";
        fn.eval = [](Real x1, Real, Real, Real) { return std::exp(std::min(x1 * x1, 40.0)); };
        auto rep = check_prr(Weight::user(fn), 1.0, 1.0, 2, g);
        CHECK_FALSE(rep.pass);
    }
}

TEST_CASE("weight literal parsing") {
    Weight w = parse_weight("bx^1.5*bxi^-2");
    CHECK(w.eval(1.0, 1.0) == doctest::Approx(std::pow(std::sqrt(2.0), 1.5 - 2.0)));
    CHECK(parse_weight("1").is_one());
    CHECK(parse_weight("bj^-3").eval(0.0, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(parse_weight("bq^2"), ConfigError);
    CHECK_THROWS_AS(parse_weight("bx^2 extra"), ConfigError);
}

TEST_CASE("joint decay sequence") {
    WeightSequence ws = joint_decay_sequence(6);
    CHECK(ws.j_max == 6);
    CHECK(ws.generator(0).is_one());
    CHECK(ws.generator(2).eval(1.0, 1.0) == doctest::Approx(1.0 / 3.0));
}
