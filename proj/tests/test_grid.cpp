#include <cmath>

#include "doctest.h"
#include "wflab/fft.hpp"
#include "wflab/grid.hpp"

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

}  // namespace

TEST_CASE("grid spec invariants") {
    GridSpec g(1, 1024, 16.0);
    CHECK(g.step() == doctest::Approx(0.03125).epsilon(1e-15));
    CHECK(g.step() * g.n_per_axis == doctest::Approx(2.0 * g.extent).epsilon(1e-16));
    CHECK(g.dual_step() == doctest::Approx(kPi / 16.0));
    CHECK(g.dual_extent() == doctest::Approx(kPi / g.step()));
    CHECK_THROWS_AS(GridSpec(3, 64, 1.0), ContractError);
    CHECK_THROWS_AS(GridSpec(1, 100, 1.0), ContractError);
    CHECK_THROWS_AS(GridSpec(1, 4, 1.0), ContractError);
}

TEST_CASE("fourier of the unit gaussian is the unit gaussian") {
    GridSpec g(1, 256, 12.0);
    SampledField f = unit_gaussian(g);
    CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
    SampledField fh = fourier(f);
    // self-dual analytic pair under the unitary normalization
    const Real c = std::pow(kPi, -0.25);
    Real worst = 0.0;
    for (int k = 0; k < g.n_per_axis; ++k) {
        const Real xi = g.dual_node(k);
        if (std::abs(xi) > 8.0) continue;
        worst = std::max(worst, std::abs(fh.values[k] - Complex(c * std::exp(-xi * xi / 2))));
    }
    CHECK(worst < 1e-10);
    CHECK(l2_norm(fh) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
    SampledField back = inverse_fourier(fh);
    CHECK((back.values - f.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fourier trivia: zero field and single-node spike") {
    GridSpec g(1, 64, 8.0);
    SampledField z(g, Domain::Space);
    CHECK(l2_norm(fourier(z)) == 0.0);

    SampledField spike(g, Domain::Space);
    spike.values[g.n_per_axis / 2] = 1.0;  // node at x = 0
    SampledField sh = fourier(spike);
    const Real expected = g.step() / std::sqrt(2.0 * kPi);
    for (int k = 0; k < g.n_per_axis; ++k)
        CHECK(std::abs(sh.values[k]) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fourier applied four times is the identity (self-dual grid)") {
    const int n = 128;
    GridSpec g(1, n, self_dual_extent(n));
    CHECK(g.dual_extent() == doctest::Approx(g.extent).epsilon(1e-14));
    SampledField f = make_field(g, [&](const std::array<Real, 2>& x) {
        return std::exp(Complex(0.0, 1.2 * x[0])) * std::exp(-x[0] * x[0] / 3.0);
    });
    SampledField r = f;
    for (int it = 0; it < 4; ++it) {
        SampledField t = fourier(r);
        t.domain = Domain::Space;  // dual grid coincides with the primal one
        r = t;
    }
    CHECK((r.values - f.values).abs().maxCoeff() / f.values.abs().maxCoeff() < 1e-10);
}

TEST_CASE("parseval and refinement consistency") {
    GridSpec g(1, 1024, 16.0);
    SampledField f = unit_gaussian(g);
    CHECK(l2_norm(fourier(f)) == doctest::Approx(l2_norm(f)).epsilon(1e-10));

    GridSpec g2(1, 2048, 16.0);
    SampledField f2 = unit_gaussian(g2);
    CHECK(l2_norm(f2) == doctest::Approx(l2_norm(f)).epsilon(1e-8));
}

TEST_CASE("l2_norm basics") {
    GridSpec g(1, 64, 8.0);
    SampledField z(g, Domain::Space);
    CHECK(l2_norm(z) == 0.0);
    SampledField one_entry(g, Domain::Space);
    one_entry.values[5] = Complex(3.0, 4.0);
    CHECK(l2_norm(one_entry) == doctest::Approx(5.0 * std::sqrt(g.step())).epsilon(1e-14));
}

TEST_CASE("2d fourier roundtrip and parseval") {
    GridSpec g(2, 32, 8.0);
    SampledField f = make_field(g, [&](const std::array<Real, 2>& x) {
        return std::exp(Complex(0.0, 0.7 * x[0] - 0.3 * x[1])) *
               std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0);
    });
    SampledField fh = fourier(f);
    CHECK(l2_norm(fh) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
    SampledField back = inverse_fourier(fh);
    CHECK((back.values - f.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("domain tag contract") {
    GridSpec g(1, 64, 8.0);
    SampledField f(g, Domain::Frequency);
    CHECK_THROWS_AS(fourier(f), ContractError);
}

TEST_CASE("support radius and wrap diagnostics") {
    GridSpec g(1, 256, 16.0);
    SampledField gauss = unit_gaussian(g);
    const Real r = essential_support_radius(gauss);
    CHECK(r > 1.0);
    CHECK(r < 6.0);
    CHECK(wrap_discontinuity(gauss) < 2.0);

    SampledField saw = make_field(g, [&](const std::array<Real, 2>& x) { return Complex(x[0], 0.0); });
    CHECK(wrap_discontinuity(saw) > 10.0);
}
