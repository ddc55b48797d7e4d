#include <cmath>

#include "doctest.h"
#include "wflab/quantize.hpp"
#include "wflab/sgcalc.hpp"

using namespace wflab;

namespace {

SampledField unit_gaussian(const GridSpec& g) {
    const Real c = std::pow(kPi, -0.25);
    return make_field(g, [&](const std::array<Real, 2>& x) {
        Real v = 1.0;
        for (int a = 0; a < g.d; ++a) v *= c * std::exp(-x[a] * x[a] / 2.0);
        return Complex(v, 0.0);
    });
}

Real rel_error(const SampledField& got, const SampledField& want) {
    SampledField diff = got;
    diff.values -= want.values;
    const Real base = l2_norm(want);
    return base > 0 ? l2_norm(diff) / base : l2_norm(diff);
}

}  // namespace

TEST_CASE("op_apply basics") {
    GridSpec g(1, 256, 16.0);
    SampledField f = unit_gaussian(g);
    SUBCASE("identity symbol") {
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        SampledField out = op_apply(one, {}, f);
        CHECK(rel_error(out, f) < 1e-10);
    }
    SUBCASE("frequency coordinate acts as -i d/dx") {
        Symbol xi = make_symbol("xi", parse_expr("xi"), 0.0, 1.0);
        SampledField out = op_apply(xi, {}, f);
        // analytic derivative of the gaussian: f' = -x f, so -i f' = i x f
        SampledField want = make_field(g, [&](const std::array<Real, 2>& x) {
            return kI * x[0] * std::pow(kPi, -0.25) * std::exp(-x[0] * x[0] / 2.0);
        });
        CHECK(rel_error(out, want) < 1e-8);
    }
    SUBCASE("position symbol multiplies at nodes for every quantization") {
        Symbol xs = make_symbol("x", parse_expr("x"), 1.0, 0.0);
        for (Real t : {0.0, 0.5, 1.0}) {
            SampledField out = op_apply(xs, {t}, f);
            SampledField want = f;
            for (int i = 0; i < g.n_per_axis; ++i) want.values[i] *= g.node(i);
            CHECK(rel_error(out, want) < 1e-10);
        }
    }
    SUBCASE("linearity") {
        Symbol a = parse_symbol("bxi^2", 0.0, 2.0);
        SampledField gph = make_field(g, [&](const std::array<Real, 2>& x) {
            return std::exp(Complex(0.0, 2.0 * x[0])) * std::exp(-x[0] * x[0] / 3.0);
        });
        SampledSymbol sa = SampledSymbol::sample(a, g);
        SampledField lhs(g, Domain::Space);
        lhs.values = Complex(0.3, -0.2) * f.values + Complex(1.1, 0.7) * gph.values;
        lhs = op_apply(sa, lhs);
        SampledField rhs(g, Domain::Space);
        rhs.values = Complex(0.3, -0.2) * op_apply(sa, f).values +
                     Complex(1.1, 0.7) * op_apply(sa, gph).values;
        CHECK((lhs.values - rhs.values).abs().maxCoeff() / rhs.values.abs().maxCoeff() < 1e-12);
    }
    SUBCASE("separable fast path agrees with the generic path") {
        Symbol u = make_cutoff(BallPatch{{0.0, 0.0}, 5.0}, 0.5, g);
        Symbol v = parse_symbol("bxi^-1", 0.0, -1.0);
        Symbol prod = make_symbol("u*v", expr_binary(Expr::Kind::Mul, u.expr, v.expr), 0, -1, 1, 1);
        SampledField fast = op_apply_separable(u, v, f);
        SampledField slow = op_apply(prod, {}, f);
        CHECK(rel_error(fast, slow) < 1e-10);
    }
}

TEST_CASE("change of quantization") {
    GridSpec g(1, 128, 16.0);
    SUBCASE("s = t is the identity") {
        Symbol a = parse_symbol("bx*bxi", 1.0, 1.0);
        SampledSymbol sa = SampledSymbol::sample(a, g);
        SampledSymbol out = change_quantization(sa, 0.3, 0.3);
        CHECK((out.values - sa.values).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("windowed bilinear symbol gains +i from s=0 to t=1") {
        // x·ξ times a smooth plateau that dies before the wrap
        GridSpec gq(1, 256, 16.0);
        const Real L = gq.extent, Xi = gq.dual_extent();
        Symbol a = make_symbol(
            "xxi_win", expr_user("xxi_win",
                                 [L, Xi](const Point& x, const Point& xi) {
                                     const Real px =
                                         mollifier_bridge((0.95 * L - std::abs(x[0])) / (0.45 * L));
                                     const Real pxi =
                                         mollifier_bridge((0.95 * Xi - std::abs(xi[0])) / (0.45 * Xi));
                                     return Complex(x[0] * xi[0] * px * pxi, 0.0);
                                 }),
            1.0, 1.0, 1.0, 1.0);
        SampledSymbol sa = SampledSymbol::sample(a, gq);
        SampledSymbol sb = change_quantization(sa, 0.0, 1.0);
        const int n = gq.n_per_axis;
        Real worst = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Real x = gq.node(j), xi = gq.dual_node(k);
                if (std::abs(x) > L / 8 || std::abs(xi) > Xi / 8) continue;
                const Complex want = Complex(x * xi, 1.0);
                worst = std::max(worst, std::abs(sb.values[std::int64_t(j) * n + k] - want));
            }
        CHECK(worst < 1e-6);
        SUBCASE("roundtrip returns the original") {
            SampledSymbol back = change_quantization(sb, 1.0, 0.0);
            Real w2 = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    w2 = std::max(w2, std::abs(back.values[std::int64_t(j) * n + k] -
                                               sa.values[std::int64_t(j) * n + k]));
            CHECK(w2 < 1e-10);
        }
    }
    SUBCASE("quantization consistency on interior probes") {
        GridSpec gg(1, 256, 16.0);
        Symbol a = parse_symbol("bx*bxi", 1.0, 1.0);
        SampledField f = unit_gaussian(gg);
        SampledField lhs = op_apply(a, {0.0}, f);
        SampledSymbol sa = SampledSymbol::sample(a, gg);
        SampledSymbol sb = change_quantization(sa, 0.0, 0.5);
        // apply b in the t=1/2 quantization by converting back to t=0
        SampledSymbol sb0 = change_quantization(sb, 0.5, 0.0);
        SampledField rhs = op_apply(sb0, f);
        CHECK(rel_error(rhs, lhs) < 1e-6);
    }
}

TEST_CASE("composition residuals") {
    GridSpec g(1, 256, 16.0);
    auto probes = make_probe_fields(g);
    SUBCASE("identity triple") {
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        CHECK(compose_residual(one, one, one, probes) < 1e-12);
    }
    SUBCASE("reciprocal multipliers compose exactly") {
        Symbol a = parse_symbol("bxi", 0.0, 1.0);
        Symbol b = parse_symbol("bxi^-1", 0.0, -1.0);
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        CHECK(compose_residual(a, b, one, probes) < 1e-6);
    }
    SUBCASE("nested cutoff tensors compose to the inner one, stably under refinement") {
        auto residual_at = [&](int n) {
            GridSpec gn(1, n, 16.0);
            auto pr = make_probe_fields(gn);
            BallPatch inner_ball{{0.0, 0.0}, 2.5};
            BallPatch outer_ball{{0.0, 0.0}, 10.0};
            ConePatch inner_cone{{1.0, 0.0}, kPi / 2.0, 8.0};
            ConePatch outer_cone{{1.0, 0.0}, kPi / 2.0, 2.0};
            // c1 = 1 on supp c2: outer ball plateau covers the inner ball
            Symbol c2 = make_symbol(
                "c2", expr_binary(Expr::Kind::Mul, make_cutoff(inner_ball, 0.5, gn).expr,
                                  make_directional_cutoff(inner_cone, 0.5, gn).expr),
                0, 0, 1, 1, Weight::one());
            Symbol c1 = make_symbol(
                "c1", expr_binary(Expr::Kind::Mul, make_cutoff(outer_ball, 0.8, gn).expr,
                                  make_directional_cutoff(outer_cone, 0.9, gn).expr),
                0, 0, 1, 1, Weight::one());
            return compose_residual(c2, c1, c2, pr);
        };
        const Real r1024 = residual_at(1024);
        CHECK(r1024 <= 1e-3);
        // sampling separable tensors is pointwise-exact, so the remainder is
        // the analytic smoothing term; doubling must not degrade it
        const Real r2048 = residual_at(2048);
        CHECK(r2048 <= r1024 * (1.0 + 1e-6) + 1e-12);
    }
}

TEST_CASE("neumann parametrix") {
    GridSpec g(1, 256, 16.0);
    auto probes = make_probe_fields(g);
    SUBCASE("constant symbol is its own inverse") {
        Symbol one = make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one());
        auto par = neumann_parametrix(one, Weight::one(), std::nullopt, 1, g, probes);
        CHECK(par.residual_history[0] < 1e-12);
        CHECK_FALSE(par.non_convergent);
    }
    SUBCASE("pure multiplier inverts to machine precision") {
        Symbol a = parse_symbol("bxi^2", 0.0, 2.0);
        auto par = neumann_parametrix(a, Weight::sigma(0.0, 2.0), std::nullopt, 4, g, probes);
        CHECK(par.residual_history[3] <= 1e-4);
        CHECK_FALSE(par.non_convergent);
    }
    SUBCASE("coupled elliptic symbol shows genuine neumann decay") {
        Symbol a = parse_symbol("bx*bxi", 1.0, 1.0);
        auto par = neumann_parametrix(a, Weight::sigma(1.0, 1.0), std::nullopt, 4, g, probes);
        CHECK(par.residual_history[0] > 1e-3);  // first order leaves a real remainder
        for (int j = 1; j < 4; ++j)
            CHECK(par.residual_history[j] < par.residual_history[j - 1]);
        CHECK(par.residual_history[3] < 1e-2);
        CHECK_FALSE(par.non_convergent);
    }
    SUBCASE("heat symbol on the d=2 grid") {
        GridSpec g2(2, 32, 8.0);
        auto probes2 = make_probe_fields(g2);
        UserWeightFn w0;
        w0.name = "heat_w0";
        w0.eval = [](Real, Real, Real xi1, Real xi2) {
            return std::sqrt(1.0 + xi1 * xi1 * xi1 * xi1 + xi2 * xi2);
        };
        Symbol heat = make_symbol("heat", parse_expr("1 + xi^2 + i*tau"), 0, 0, 1, 1,
                                  Weight::user(w0));
        auto par = neumann_parametrix(heat, Weight::user(w0), std::nullopt, 3, g2, probes2);
        CHECK(par.residual_history[2] <= 1e-2);
    }
    SUBCASE("vanishing symbol is refused") {
        Symbol a = make_symbol("xi", parse_expr("xi"), 0.0, 1.0);
        CHECK_THROWS_AS(neumann_parametrix(a, Weight::sigma(0.0, 1.0), std::nullopt, 2, g, probes),
                        ContractError);
    }
    SUBCASE("cutoff-localized parametrix inverts on the localized region") {
        Symbol a = parse_symbol("bx*bxi", 1.0, 1.0);
        ConePatch cone_x{{1.0, 0.0}, kPi / 2.0, 4.0};
        ConePatch cone_xi{{1.0, 0.0}, kPi / 2.0, 4.0};
        Symbol psi1 = make_directional_cutoff_slot(cone_x, 0.5, g, 0);
        Symbol psi2 = make_directional_cutoff_slot(cone_xi, 0.5, g, 1);
        auto par = neumann_parametrix(a, Weight::sigma(1.0, 1.0), std::make_pair(psi1, psi2), 3,
                                      g, probes);
        // the localized series floors at the smoothing remainder of the
        // cutoff geometry; it must not blow up across orders
        CHECK(par.residual_history[2] < 1.1 * par.residual_history[0] + 1e-12);
        CHECK_FALSE(par.non_convergent);
        // applying the factored operator reproduces the in-loop residual
        SampledField f = probes[0];
        SampledField y = op_apply(par.a, f);
        SampledField approx = apply_parametrix(par, y, 3);
        SampledField target = op_apply(*par.c, f);
        SampledField diff = approx;
        diff.values -= target.values;
        CHECK(l2_norm(diff) / l2_norm(f) == doctest::Approx(par.residual_history[2]).epsilon(0.5));
    }
}
