#include "wflab/corpus.hpp"

#include <cmath>

#include "wflab/fft.hpp"
#include "wflab/sgcalc.hpp"

namespace wflab {

namespace {

Real gauss(Real u, Real s) { return std::exp(-u * u / (2.0 * s * s)); }

SampledField make_gaussian(const GridSpec& g, Real std_dev, Real center, Real xi0) {
    const Real c = std::pow(kPi * std_dev * std_dev, -0.25);
    return make_field(g, [&](const std::array<Real, 2>& x) {
        Real v = 1.0;
        for (int a = 0; a < g.d; ++a) v *= c * gauss(x[a] - center, std_dev);
        return std::exp(Complex(0.0, xi0 * x[0])) * v;
    });
}

/// f̂ = radial plateau over the frequency grid; the discrete spike surrogate.
SampledField make_spike(const GridSpec& g) {
    const Real Xi = g.dual_extent();
    const Real plateau = 0.6 * Xi, support = 0.8 * Xi;
    SampledField fh(g, Domain::Frequency);
    const int n = g.n_per_axis;
    auto profile = [&](Real rho) { return mollifier_bridge((support - rho) / (support - plateau)); };
    if (g.d == 1) {
        for (int k = 0; k < n; ++k) fh.values[k] = profile(std::abs(g.dual_node(k)));
    } else {
        std::int64_t p = 0;
        for (int k1 = 0; k1 < n; ++k1)
            for (int k2 = 0; k2 < n; ++k2, ++p)
                fh.values[p] = profile(std::hypot(g.dual_node(k1), g.dual_node(k2)));
    }
    SampledField f = inverse_fourier(fh);
    // normalize to unit mass for stable cross-grid comparisons
    const Real nrm = l2_norm(f);
    f.values /= nrm;
    return f;
}

Real node_aligned_frequency(const GridSpec& g, Real target) {
    const Real dxi = g.dual_step();
    return std::round(target / dxi) * dxi;
}

// the flat window is the whole periodic box: a node-aligned carrier is
// wrap-smooth, and any plateau edge inside the window would read as a
// genuine exit feature
SampledField make_planewave(const GridSpec& g, Real xi0) {
    return make_field(g, [&](const std::array<Real, 2>& x) {
        return std::exp(Complex(0.0, xi0 * x[0]));
    });
}

SampledField make_chirp(const GridSpec& g) {
    const Real L = g.extent;
    return make_field(g, [&](const std::array<Real, 2>& x) {
        Real r2 = 0.0;
        for (int a = 0; a < g.d; ++a) r2 += x[a] * x[a];
        const Real plateau = mollifier_bridge((0.93 * L - std::sqrt(r2)) / (0.18 * L));
        return std::exp(Complex(0.0, 0.5 * r2)) * plateau;
    });
}

SampledField make_twobump(const GridSpec& g) {
    const Real L = g.extent;
    const Real c = 0.2 * L, s = 0.06 * L;
    const Real amp = std::pow(kPi * s * s, -0.25);
    return make_field(g, [&](const std::array<Real, 2>& x) {
        Real b1 = 1.0, b2 = 1.0;
        for (int a = 0; a < g.d; ++a) {
            b1 *= amp * gauss(x[a] - c, s);
            b2 *= amp * gauss(x[a] + c, s);
        }
        return Complex(b1 + b2, 0.0);
    });
}

}  // namespace

Weight heat_reference_weight() {
    UserWeightFn fn;
    fn.name = "heat_w0";
    fn.eval = [](Real, Real, Real xi1, Real xi2) {
        return std::sqrt(1.0 + xi1 * xi1 * xi1 * xi1 + xi2 * xi2);
    };
    fn.r = 1.0;
    fn.rho = 1.0;
    return Weight::user(fn);
}

const CorpusFieldEntry& Corpus::field(const std::string& id) const {
    for (const auto& e : fields)
        if (e.id == id) return e;
    throw ConfigError("corpus: unknown field '" + id + "'");
}

const CorpusSymbolEntry& Corpus::symbol(const std::string& id) const {
    for (const auto& e : symbols)
        if (e.id == id) return e;
    throw ConfigError("corpus: unknown symbol '" + id + "'");
}

Corpus build_corpus(const GridSpec& g) {
    Corpus c;
    c.grid = g;
    const Real xi0 = node_aligned_frequency(g, 0.25 * g.extent);

    auto always = [](Real, Real) { return true; };
    const std::string decay_basis = "oracle: closed-form phase-space decay + annulus quadrature";

    c.fields.push_back({"gaussian", make_gaussian(g, 1.0, 0.0, 0.0), always, decay_basis,
                        WfClass::Empty, decay_basis, 0.0});
    c.fields.push_back({"modgauss", make_gaussian(g, 1.0, 0.0, xi0), always, decay_basis,
                        WfClass::Empty, decay_basis, xi0});
    c.fields.push_back({"spike", make_spike(g),
                        [](Real, Real s) { return s <= -1.0; },
                        "oracle: frequency-side quadrature of the plateau transform",
                        WfClass::PsiAtOrigin,
                        "oracle: x-concentration of the spike transform", 0.0});
    c.fields.push_back({"planewave", make_planewave(g, xi0),
                        [](Real t, Real) { return t <= -1.0; },
                        "oracle: x-invariant ridge at the carrier; weighted x-integral",
                        WfClass::ExitAtXi0,
                        "oracle: x-invariance of |V| at the carrier frequency", xi0});
    c.fields.push_back({"chirp", make_chirp(g),
                        [](Real t, Real s) { return t + s <= -1.0; },
                        "oracle: stationary-phase ridge ξ≈x; direct summation",
                        WfClass::PsiEDiagonal,
                        "oracle: stationary-phase ridge ξ≈x; direct summation", 0.0});
    c.fields.push_back({"twobump", make_twobump(g), always, decay_basis, WfClass::Empty,
                        decay_basis, 0.0});
    c.fields.push_back({"const1",
                        make_field(g, [](const std::array<Real, 2>&) { return Complex(1.0, 0.0); }),
                        [](Real t, Real) { return t <= -1.0; },
                        "oracle: |V| = c|φ̂(ξ)| is x-invariant; weighted x-integral",
                        WfClass::ExitAtZero,
                        "oracle: x-invariance of |V| near frequency zero", 0.0});

    c.symbols.push_back({"one", make_symbol("1", parse_expr("1"), 0, 0, 1, 1, Weight::one()),
                         true, "axiomatic"});
    c.symbols.push_back({"xi", make_symbol("xi", parse_expr("xi"), 0, 1, 1, 1), false,
                         "oracle: vanishes on the ξ=0 line at large |x|"});
    c.symbols.push_back({"x", make_symbol("x", parse_expr("x"), 1, 0, 1, 1), false,
                         "oracle: vanishes on the x=0 line at large |ξ|"});
    c.symbols.push_back({"bxi2", parse_symbol("bxi^2", 0.0, 2.0, 1.0, 1.0), true,
                         "oracle: |a|/ω₀ ≡ 1"});
    c.symbols.push_back({"bxbxi", parse_symbol("bx*bxi", 1.0, 1.0), true, "oracle: |a|/ω₀ ≡ 1"});
    {
        BallPatch ball{{0.0, 0.0}, 0.25 * g.extent};
        ConePatch cone{{1.0, 0.0}, g.d == 1 ? kPi / 2.0 : 0.5, g.extent / 4.0};
        Symbol tensor = make_symbol(
            "cutoff_tensor",
            expr_binary(Expr::Kind::Mul, make_cutoff(ball, 0.6, g).expr,
                        make_directional_cutoff(cone, 0.5, g).expr),
            0, 0, 1, 1, Weight::one());
        c.symbols.push_back({"cutoff_tensor", tensor, false,
                             "oracle: vanishes outside its support"});
    }
    if (g.d == 2) {
        c.symbols.push_back({"heat",
                             make_symbol("1 + xi^2 + i*tau", parse_expr("1 + xi^2 + i*tau"), 0, 0,
                                         1, 1, heat_reference_weight()),
                             true, "literature: elliptic for (1+|ξ|⁴+τ²)^{1/2}"});
    }

    for (Real t : {-2.0, -1.0, 0.0, 1.0, 2.0})
        for (Real s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            c.weight_exponents.emplace_back(t, s);
            c.weights.push_back(Weight::sigma(t, s));
        }
    c.sequence = joint_decay_sequence(6);
    return c;
}

namespace {

/// Independent annulus verdict from a closed-form |V| on the phase lattice,
/// p = q = 2: plain double loop, no STFT, no WeightTables.
MembershipVerdict verdict_from_closed_form(const GridSpec& g, Real t, Real s,
                                           const std::function<Real(Real, Real)>& absV,
                                           int stride = 1) {
    const Real rho0 = g.extent / 8.0;
    const int K = 3;
    std::vector<Real> nu2(K + 1, 0.0);
    const int n = g.n_per_axis;
    const Real quad = g.step() * g.dual_step() * stride * stride;
    for (int j = 0; j < n; j += stride)
        for (int k = 0; k < n; k += stride) {
            const Real x = g.node(j), xi = g.dual_node(k);
            const Real r = std::hypot(x, xi);
            if (r < 0.5 * rho0 || r >= g.extent) continue;
            const int a = static_cast<int>(std::floor(std::log2(r / rho0))) + 1;
            if (a < 0 || a > K) continue;
            const Real w = std::pow(1.0 + x * x, 0.5 * t) * std::pow(1.0 + xi * xi, 0.5 * s);
            const Real v = absV(x, xi) * w;
            nu2[a] += quad * v * v;
        }
    std::vector<Real> nu(K + 1);
    for (int a = 0; a <= K; ++a) nu[a] = std::sqrt(nu2[a]);
    return verdict_from_annuli(nu);
}

Complex gaussian_stft_closed_form(Real x, Real xi, Real amp, Real center, Real std_dev) {
    // window std 1; analyzed gaussian amp·e^{-(y-c)²/(2s²)}
    const Real a = 1.0 / (2.0 * std_dev * std_dev), b = 0.5;
    const Real sum = a + b;
    const Real Y = (a * center + b * x) / sum;
    const Real mag = amp * std::pow(kPi, -0.25) / std::sqrt(2.0 * kPi) * std::sqrt(kPi / sum) *
                     std::exp(-a * b * (center - x) * (center - x) / sum) *
                     std::exp(-xi * xi / (4.0 * sum));
    return mag * std::exp(Complex(0.0, -Y * xi));
}

}  // namespace

std::vector<OracleOutcome> run_oracles(const Corpus& corpus, bool quick) {
    std::vector<OracleOutcome> out;
    const GridSpec& g = corpus.grid;
    if (g.d != 1) return out;  // oracle closed forms are one-dimensional
    const int n = g.n_per_axis;
    Window window = gaussian_window(g, 1.0);
    MixedNormSpec l2(2.0, 2.0);
    const int stride = quick ? 4 : 2;

    // --- gaussian: closed-form STFT photograph
    {
        const auto& entry = corpus.field("gaussian");
        PhaseField V = stft(entry.field, window);
        Real worst = 0.0;
        for (int j = 0; j < n; j += 17)
            for (int k = 0; k < n; k += 17) {
                const Real x = g.node(j), xi = g.dual_node(k);
                if (std::abs(x) > 6.0 || std::abs(xi) > 6.0) continue;
                const Real expect = std::exp(-(x * x + xi * xi) / 4.0) / std::sqrt(2.0 * kPi);
                worst = std::max(worst, std::abs(std::abs(V.values[V.index(j, k)]) - expect));
            }
        out.push_back({"gaussian", "closed-form STFT", worst < 1e-8, worst});
    }

    // --- membership truths re-derived from closed-form |V|
    auto check_membership_truth = [&](const std::string& id,
                                      const std::function<Real(Real, Real)>& absV,
                                      const std::string& which, int str) {
        const auto& entry = corpus.field(id);
        int disagree = 0;
        for (size_t wi = 0; wi < corpus.weights.size(); ++wi) {
            const auto [t, s] = corpus.weight_exponents[wi];
            auto oracle_verdict = verdict_from_closed_form(g, t, s, absV, str);
            const bool declared = entry.member_rule(t, s);
            auto measured = estimate_membership(entry.field, window, corpus.weights[wi], l2);
            if (oracle_verdict.member != declared) ++disagree;
            if (measured.member != declared) ++disagree;
        }
        out.push_back({id, which, disagree == 0, static_cast<Real>(disagree)});
    };

    const Real inv_sqrt2pi = 1.0 / std::sqrt(2.0 * kPi);
    check_membership_truth(
        "gaussian",
        [&](Real x, Real xi) { return inv_sqrt2pi * std::exp(-(x * x + xi * xi) / 4.0); },
        "annulus verdicts from the closed form", 1);
    {
        const Real xi0 = corpus.field("modgauss").xi0;
        check_membership_truth(
            "modgauss",
            [&](Real x, Real xi) {
                return inv_sqrt2pi * std::exp(-(x * x + (xi - xi0) * (xi - xi0)) / 4.0);
            },
            "annulus verdicts from the closed form", 1);
    }
    {
        const Real c = std::pow(kPi, -0.25) * inv_sqrt2pi;
        check_membership_truth(
            "const1", [&](Real, Real xi) { return c * std::exp(-xi * xi / 2.0); },
            "annulus verdicts from the closed form", 1);
        const Real xi0 = corpus.field("planewave").xi0;
        // the plateau reaches 0.9L; treat the ridge as x-invariant inside it
        check_membership_truth(
            "planewave",
            [&](Real x, Real xi) {
                const Real plateau =
                    mollifier_bridge((0.99 * g.extent - std::abs(x)) / (0.09 * g.extent));
                return c * plateau * std::exp(-(xi - xi0) * (xi - xi0) / 2.0);
            },
            "annulus verdicts from the x-invariant ridge form", 1);
    }
    {
        // two-bump: complex sum of two shifted-gaussian transforms
        const Real L = g.extent, s0 = 0.06 * L, c0 = 0.2 * L;
        const Real amp = std::pow(kPi * s0 * s0, -0.25);
        check_membership_truth(
            "twobump",
            [&](Real x, Real xi) {
                return std::abs(gaussian_stft_closed_form(x, xi, amp, c0, s0) +
                                gaussian_stft_closed_form(x, xi, amp, -c0, s0));
            },
            "annulus verdicts from the closed form", 1);
    }
    {
        // spike: |V(x,ξ)| = |V_{φ̂}f̂(ξ,−x)| via direct frequency-side quadrature
        const Real Xi = g.dual_extent();
        const Real plateau = 0.6 * Xi, support = 0.8 * Xi;
        const Real spike_scale = [&] {
            // the recipe normalizes to unit L²; recompute that factor
            Real acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const Real rho = std::abs(g.dual_node(k));
                const Real p = mollifier_bridge((support - rho) / (support - plateau));
                acc += p * p * g.dual_step();
            }
            return 1.0 / std::sqrt(acc);
        }();
        const Real wamp = std::pow(kPi, -0.25);
        auto absV = [&](Real x, Real xi) {
            Complex acc = 0.0;
            for (int k = 0; k < n; k += 2) {
                const Real eta = g.dual_node(k);
                const Real p = mollifier_bridge((support - std::abs(eta)) / (support - plateau));
                if (p == 0.0) continue;
                acc += p * wamp * std::exp(-(eta - xi) * (eta - xi) / 2.0) *
                       std::exp(Complex(0.0, eta * x));
            }
            return spike_scale * inv_sqrt2pi * std::abs(acc) * 2.0 * g.dual_step();
        };
        check_membership_truth("spike", absV, "frequency-side direct quadrature", stride * 2);
    }
    {
        // chirp: direct STFT sums on a decimated lattice
        const auto& entry = corpus.field("chirp");
        auto absV = [&](Real x, Real xi) {
            Complex acc = 0.0;
            for (int y = 0; y < n; y += 2) {
                const Real yy = g.node(y);
                const Real win = std::pow(kPi, -0.25) * std::exp(-(yy - x) * (yy - x) / 2.0);
                if (win < 1e-14) continue;
                acc += entry.field.values[y] * win * std::exp(Complex(0.0, -yy * xi));
            }
            return inv_sqrt2pi * std::abs(acc) * 2.0 * g.step();
        };
        check_membership_truth("chirp", absV, "direct-summation STFT lattice", stride * 2);
    }

    // --- twisted convolution against the n=8 double sum
    {
        GridSpec g8(1, 8, 3.0);
        PhaseField F(g8), G(g8);
        for (std::int64_t i = 0; i < F.values.size(); ++i) {
            F.values[i] = Complex(std::sin(0.37 * i + 0.2), std::cos(0.91 * i));
            G.values[i] = Complex(std::cos(0.53 * i), std::sin(0.11 * i - 1.0));
        }
        PhaseField fast = twisted_convolution(F, G);
        const Real quad = g8.step() * g8.dual_step() / std::sqrt(2.0 * kPi);
        Real worst = 0.0;
        const int n8 = 8;
        for (int a = 0; a < n8; ++a)
            for (int b = 0; b < n8; ++b) {
                Complex acc = 0.0;
                for (int y = 0; y < n8; ++y)
                    for (int e = 0; e < n8; ++e) {
                        const int dx = ((a - y + n8 / 2) % n8 + n8) % n8;
                        const int dxi = ((b - e + n8 / 2) % n8 + n8) % n8;
                        acc += F.values[F.index(dx, dxi)] * G.values[G.index(y, e)] *
                               std::exp(Complex(0.0, -g8.node(dx) * g8.dual_node(e)));
                    }
                worst = std::max(worst, std::abs(acc * quad - fast.values[fast.index(a, b)]));
            }
        out.push_back({"twisted", "n=8 double-sum equivalence", worst < 1e-10, worst});
    }

    // --- delta-surrogate scaling: unit-norm single-node spike grows ∝ n
    if (!quick) {
        auto norm_at = [&](int nn) {
            GridSpec gn(1, nn, g.extent);
            SampledField sp(gn, Domain::Space);
            sp.values[nn / 2] = 1.0 / std::sqrt(gn.step());
            Window w = gaussian_window(gn, 1.0);
            return modulation_norm(sp, w, Weight::bracket_xi(1.0), l2);
        };
        const Real r = norm_at(512), r2 = norm_at(1024);
        const Real ratio = r2 / r;
        out.push_back({"delta-surrogate", "modulation norm doubles with n", std::abs(ratio - 2.0) < 0.2,
                       ratio});
    }

    // --- symbol ellipticity truths
    for (const auto& se : corpus.symbols) {
        auto rep = is_sg_elliptic(se.symbol, g.extent / 4.0, g);
        out.push_back({se.id, "ellipticity truth", rep.elliptic == se.elliptic, rep.c});
    }

    // --- cutoff tensor margin on its plateau
    {
        const auto& tensor = corpus.symbol("cutoff_tensor").symbol;
        BallPatch inner{{0.0, 0.0}, 0.12 * g.extent};
        ConePatch inner_cone{{1.0, 0.0}, kPi / 2.0, g.extent / 2.0};
        const Real m = char_margin_psi(tensor, inner, inner_cone, g);
        out.push_back({"cutoff_tensor", "plateau margin = 1", std::abs(m - 1.0) < 1e-12, m});
    }
    return out;
}

}  // namespace wflab
