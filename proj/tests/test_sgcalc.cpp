#include <cmath>

#include "doctest.h"
#include "wflab/sgcalc.hpp"

using namespace wflab;

namespace {

UserWeightFn heat_reference_weight() {
    UserWeightFn fn;
    fn.name = "heat_w0";
    fn.eval = [](Real, Real, Real xi1, Real xi2) {
        return std::sqrt(1.0 + xi1 * xi1 * xi1 * xi1 + xi2 * xi2);
    };
    return fn;
}

}  // namespace

TEST_CASE("expression parsing and evaluation") {
    ExprPtr heat = parse_expr("1 + xi^2 + i*tau");
    CHECK(heat->eval({0, 0}, {2.0, 3.0}) == Complex(5.0, 3.0));
    ExprPtr e2 = parse_expr("bx*bxi");
    CHECK(e2->eval({1, 0}, {1, 0}).real() == doctest::Approx(2.0));
    ExprPtr e3 = parse_expr("exp(-x^2/2)");
    CHECK(e3->eval({1.0, 0}, {0, 0}).real() == doctest::Approx(std::exp(-0.5)));
    ExprPtr e4 = parse_expr("xi/bxi");
    CHECK(e4->eval({0, 0}, {3.0, 0}).real() == doctest::Approx(3.0 / std::sqrt(10.0)));
    CHECK_THROWS_AS(parse_expr("foo+1"), ConfigError);
    CHECK_THROWS_AS(parse_expr("1+*2"), ConfigError);
}

TEST_CASE("seminorm certificates") {
    GridSpec g(1, 256, 16.0);
    SUBCASE("bxi^2 against sigma_{0,2} with r=0, rho=1") {
        Symbol a = make_symbol("bxi^2", parse_expr("bxi^2"), 0.0, 2.0, 0.0, 1.0);
        auto cert = sg_seminorm_certificate(a, 3, g);
        CHECK(cert.pass);
    }
    SUBCASE("constant symbol") {
        Symbol a = make_symbol("1", parse_expr("1"), 0.0, 0.0, 1.0, 1.0, Weight::one());
        auto cert = sg_seminorm_certificate(a, 2, g);
        CHECK(cert.pass);
        for (const auto& e : cert.entries) {
            if (e.ax1 + e.bx1 == 0)
                CHECK(e.value == doctest::Approx(1.0));
            else
                CHECK(e.value < 1e-8);
        }
    }
    SUBCASE("truncated super-exponential symbol fails against weight one") {
        Symbol a = make_symbol(
            "exp_x2", expr_user("exp_x2",
                                [](const Point& x, const Point&) {
                                    return Complex(std::exp(std::min(x[0] * x[0], 40.0)), 0.0);
                                }),
            0.0, 0.0, 1.0, 1.0, Weight::one());
        auto cert = sg_seminorm_certificate(a, 1, g);
        CHECK_FALSE(cert.pass);
    }
}

TEST_CASE("compact cutoffs") {
    GridSpec g(1, 256, 16.0);
    BallPatch patch{{1.0, 0.0}, 3.0};
    Symbol phi = make_cutoff(patch, 0.5, g);
    SUBCASE("plateau value and support") {
        CHECK(phi.eval1(1.0, 0.0).real() == doctest::Approx(1.0));
        CHECK(phi.eval1(1.0 + 1.49, 0.0).real() == doctest::Approx(1.0));
        for (int i = 0; i < g.n_per_axis; ++i) {
            const Real x = g.node(i);
            const Real v = phi.eval1(x, 0.0).real();
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (std::abs(x - 1.0) >= 3.0) CHECK(v == 0.0);
        }
    }
    SUBCASE("radial monotonicity on the transition shell") {
        Real prev = phi.eval1(1.0 + 1.5, 0.0).real();
        for (Real rr = 1.6; rr <= 3.0; rr += 0.1) {
            const Real cur = phi.eval1(1.0 + rr, 0.0).real();
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
    SUBCASE("patch validation") {
        CHECK_THROWS_AS(make_cutoff(BallPatch{{15.0, 0.0}, 3.0}, 0.5, g), ContractError);
        CHECK_THROWS_AS(make_cutoff(patch, 1.5, g), ContractError);
    }
}

TEST_CASE("directional cutoffs") {
    GridSpec g(1, 256, 16.0);
    SUBCASE("d=1 signed ramp") {
        ConePatch cone{{1.0, 0.0}, kPi / 2.0, 4.0};
        Symbol psi = make_directional_cutoff(cone, 0.5, g);
        for (Real xi = 8.0; xi < 100.0; xi += 7.3)
            CHECK(psi.eval1(0.0, xi).real() == doctest::Approx(1.0));
        for (Real xi = 0.0; xi > -100.0; xi -= 9.1)
            CHECK(psi.eval1(0.0, xi).real() == 0.0);
        // exact 0-homogeneity beyond R
        for (Real xi : {4.0, 5.0, 9.0, 30.0})
            CHECK(psi.eval1(0.0, 2.0 * xi).real() == doctest::Approx(psi.eval1(0.0, xi).real()));
    }
    SUBCASE("d=2 homogeneity on 16 rays and inner plateau") {
        GridSpec g2(2, 32, 8.0);
        ConePatch cone{{1.0, 0.0}, 0.5, 3.0};
        Symbol psi = make_directional_cutoff(cone, 0.5, g2);
        for (int k = 0; k < 16; ++k) {
            const Real th = 2.0 * kPi * k / 16.0;
            const Point xi0{5.0 * std::cos(th), 5.0 * std::sin(th)};
            const Point xi2{10.0 * std::cos(th), 10.0 * std::sin(th)};
            CHECK(psi.eval({0, 0}, xi2).real() ==
                  doctest::Approx(psi.eval({0, 0}, xi0).real()).epsilon(1e-12));
        }
        // plateau: inner cone (half-aperture 0.25) beyond R
        for (int k = 0; k < 8; ++k) {
            const Real th = 0.2 * (k / 7.0 - 0.5);  // within ±0.1 rad
            const Point xi{6.0 * std::cos(th), 6.0 * std::sin(th)};
            CHECK(psi.eval({0, 0}, xi).real() == doctest::Approx(1.0));
        }
        // support inside the cone
        const Point outside{5.0 * std::cos(0.8), 5.0 * std::sin(0.8)};
        CHECK(psi.eval({0, 0}, outside).real() == 0.0);
    }
    SUBCASE("directional cutoff is an order-(0,0) symbol with r=rho=1") {
        ConePatch cone{{1.0, 0.0}, kPi / 2.0, 4.0};
        Symbol psi = make_directional_cutoff(cone, 0.5, g);
        auto cert = sg_seminorm_certificate(psi, 3, g);
        CHECK(cert.pass);
    }
    SUBCASE("aperture below angular resolution is rejected") {
        GridSpec g2(2, 32, 8.0);
        CHECK_THROWS_AS(make_directional_cutoff(ConePatch{{1.0, 0.0}, 0.05, 3.0}, 0.5, g2),
                        ContractError);
    }
}

TEST_CASE("char margins") {
    GridSpec g(1, 256, 16.0);
    BallPatch ball{{0.0, 0.0}, 3.0};
    ConePatch cone{{1.0, 0.0}, kPi / 2.0, 4.0};
    Symbol phi = make_cutoff(ball, 0.5, g);
    Symbol psi = make_directional_cutoff(cone, 0.5, g);
    Symbol tensor = make_symbol("phi*psi", expr_binary(Expr::Kind::Mul, phi.expr, psi.expr), 0.0,
                                0.0, 1.0, 1.0, Weight::one());
    SUBCASE("plateau patches give margin 1") {
        BallPatch inner{{0.0, 0.0}, 1.2};
        ConePatch inner_cone{{1.0, 0.0}, kPi / 2.0, 8.0};
        CHECK(char_margin_psi(tensor, inner, inner_cone, g) == doctest::Approx(1.0));
    }
    SUBCASE("disjoint cone gives margin 0") {
        BallPatch inner{{0.0, 0.0}, 1.2};
        ConePatch opposite{{-1.0, 0.0}, kPi / 2.0, 8.0};
        CHECK(char_margin_psi(tensor, inner, opposite, g) == 0.0);
    }
    SUBCASE("elliptic multiplier has margin >= 1/2") {
        Symbol a = make_symbol("bxi^2", parse_expr("bxi^2"), 0.0, 2.0, 0.0, 1.0);
        CHECK(char_margin_psi(a, ball, cone, g) >= 0.5);
    }
    SUBCASE("empty region gives +inf") {
        ConePatch beyond{{1.0, 0.0}, kPi / 2.0, 0.9 * g.dual_extent()};
        BallPatch tiny{{0.0, 0.0}, 0.4 * g.step()};
        // ball so small it contains a node only at the origin; shift off-grid
        BallPatch offgrid{{0.5 * g.step(), 0.0}, 0.2 * g.step()};
        const Real m = char_margin_psi(tensor, offgrid, beyond, g);
        CHECK((m == kInf || m >= 0.0));
    }
    SUBCASE("margins are monotone under patch shrink") {
        Symbol a = parse_symbol("bx*bxi + x*xi/bj", 1.0, 1.0);
        const Real m1 = char_margin_psi(a, ball, cone, g);
        const Real m2 = char_margin_psi(a, ball.scaled(0.5), cone.with_aperture(0.3), g);
        CHECK(m2 >= m1 - 1e-15);
    }
}

TEST_CASE("characteristic sets") {
    GridSpec g(1, 256, 16.0);
    SUBCASE("constant symbol has empty characteristic sets") {
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        for (Regime r : {Regime::Psi, Regime::E, Regime::PsiE}) CHECK(char_set(one, r, g).empty());
    }
    SUBCASE("one-sided symbol is psi-characteristic exactly on the minus direction") {
        Symbol a = make_symbol("1+xi/bxi", parse_expr("1 + xi/bxi"), 0, 0, 1, 1, Weight::one());
        auto rep = char_set(a, Regime::Psi, g);
        for (const auto& tile : rep.tiles) {
            // cone index 0 is +1, index 1 is −1
            if (tile.cone_index == 1)
                CHECK(tile.characteristic);
            else
                CHECK_FALSE(tile.characteristic);
        }
    }
    SUBCASE("sigma_{1,1}-elliptic symbol has empty characteristic sets") {
        Symbol a = parse_symbol("bx*bxi", 1.0, 1.0);
        for (Regime r : {Regime::Psi, Regime::E, Regime::PsiE}) CHECK(char_set(a, r, g).empty());
    }
    SUBCASE("cutoff tensor flags exactly the support complement (one tile slack)") {
        BallPatch ball{{0.0, 0.0}, 4.0};
        ConePatch cone{{1.0, 0.0}, kPi / 2.0, 4.0};
        Symbol tensor = make_symbol(
            "c1", expr_binary(Expr::Kind::Mul, make_cutoff(ball, 0.6, g).expr,
                              make_directional_cutoff(cone, 0.5, g).expr),
            0, 0, 1, 1, Weight::one());
        auto rep = char_set(tensor, Regime::Psi, g);
        Tiling tiling = build_tiling(g, rep.resolution, false, g.extent / 4.0);
        for (const auto& tile : rep.tiles) {
            const Real c = tiling.balls[tile.compact_index].center[0];
            const bool plateau_ball =
                std::abs(c) + kCharProbeScale * tiling.balls[tile.compact_index].radius <= 2.4;
            if (tile.cone_index == 1) {
                CHECK(tile.characteristic);  // opposite direction is cut
            } else if (plateau_ball) {
                CHECK_FALSE(tile.characteristic);
            }
        }
    }
}

TEST_CASE("sg ellipticity") {
    SUBCASE("heat symbol is elliptic for its anisotropic weight") {
        GridSpec g2(2, 32, 8.0);
        Symbol heat = make_symbol("heat", parse_expr("1 + xi^2 + i*tau"), 0, 0, 1, 1,
                                  Weight::user(heat_reference_weight()));
        auto rep = is_sg_elliptic(heat, g2.extent / 4.0, g2);
        CHECK(rep.elliptic);
        CHECK(rep.c >= 0.9);
    }
    SUBCASE("the frequency coordinate is not elliptic") {
        GridSpec g(1, 256, 16.0);
        Symbol a = make_symbol("xi", parse_expr("xi"), 0.0, 1.0, 1.0, 1.0);
        auto rep = is_sg_elliptic(a, g.extent / 4.0, g);
        CHECK_FALSE(rep.elliptic);
    }
    SUBCASE("constant is elliptic with c = 1") {
        GridSpec g(1, 64, 8.0);
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        auto rep = is_sg_elliptic(one, g.extent / 4.0, g);
        CHECK(rep.elliptic);
        CHECK(rep.c == doctest::Approx(1.0));
    }
}

TEST_CASE("ellipticity agrees with empty characteristic sets on corpus symbols") {
    GridSpec g(1, 256, 16.0);
    struct Case {
        Symbol sym;
        bool expect_elliptic;
    };
    std::vector<Case> cases;
    cases.push_back({parse_symbol("bxi^2", 0.0, 2.0, 1.0, 1.0), true});
    cases.push_back({parse_symbol("bx*bxi", 1.0, 1.0), true});
    cases.push_back({make_symbol("xi", parse_expr("xi"), 0.0, 1.0, 1.0, 1.0), false});
    cases.push_back({make_symbol("x", parse_expr("x"), 1.0, 0.0, 1.0, 1.0), false});
    for (auto& c : cases) {
        const bool ell = is_sg_elliptic(c.sym, g.extent / 4.0, g).elliptic;
        CHECK(ell == c.expect_elliptic);
        bool all_empty = true;
        for (Regime r : {Regime::Psi, Regime::E, Regime::PsiE})
            all_empty = all_empty && char_set(c.sym, r, g).empty();
        CHECK(all_empty == c.expect_elliptic);
    }
}
