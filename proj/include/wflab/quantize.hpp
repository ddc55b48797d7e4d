#pragma once

#include <optional>
#include <vector>

#include "wflab/symbol.hpp"

namespace wflab {

/// t = 0 is Kohn-Nirenberg, t = 1/2 Weyl.
struct Quantization {
    Real t = 0.0;
};

/// Symbol sampled on the phase product grid (x outer, ξ inner).
struct SampledSymbol {
    GridSpec grid;
    CArray values;
    bool spectral_tail_warning = false;

    static SampledSymbol sample(const Symbol& a, const GridSpec& g);
};

/// Kohn-Nirenberg pseudospectral application,
///   (Op(a)f)(x) = (2π)^{-d/2} Σ_ξ a(x,ξ) f̂(ξ) e^{i⟨x,ξ⟩} (π/L)^d;
/// general t routes through change_quantization to t = 0 first.
SampledField op_apply(const Symbol& a, const Quantization& q, const SampledField& f);
SampledField op_apply(const SampledSymbol& a0, const SampledField& f);

/// Fast path for a(x,ξ) = u(x)·v(ξ): u · (v(D) f).
SampledField op_apply_separable(const Symbol& u_of_x, const Symbol& v_of_xi,
                                const SampledField& f);

/// Structural check that the expression only touches one slot.
bool expr_depends_on(const ExprPtr& e, int slot);

/// The unique b with Op_s(a) = Op_t(b): spectral multiplier
/// e^{−i(t−s)⟨ζ_x,ζ_ξ⟩} on the symbol's own (doubled) dual grid, with
/// periodic wrap; flags symbols whose spectral tail exceeds 1e−3 of energy.
SampledSymbol change_quantization(const SampledSymbol& a, Real s, Real t);

/// max over probes of ‖Op(a)Op(b)f − Op(c)f‖₂ / ‖f‖₂.
Real compose_residual(const Symbol& a, const Symbol& b, const Symbol& c,
                      const std::vector<SampledField>& probes);

/// The five fixed band-limited probe fields of the operator test-bench.
std::vector<SampledField> make_probe_fields(const GridSpec& g);

struct ParametrixResult {
    int order_j = 0;
    std::vector<Real> residual_history;  // residual at orders 1..j
    bool non_convergent = false;
    // factored operator state
    SampledSymbol b1;                  // c/a
    SampledSymbol a;                   // the symbol
    std::optional<SampledSymbol> c;    // localizer tensor; empty → identity
};

/// Neumann-series parametrix from the composition remainder:
///   Op(b_j) = Σ_{k<j} (−1)^k Op(h₁)^k Op(b₁),  b₁ = c/a,
///   Op(h₁) = Op(b₁)Op(a) − Op(c) (measured operationally on probes).
/// Refuses when min |a|/ω₀ over the cutoff region (or the whole grid) is
/// below the invertibility threshold.
ParametrixResult neumann_parametrix(const Symbol& a, const Weight& omega0,
                                    const std::optional<std::pair<Symbol, Symbol>>& cutoffs,
                                    int j_max, const GridSpec& grid,
                                    const std::vector<SampledField>& probes);

/// Apply the factored Op(b_j) at a given truncation order.
SampledField apply_parametrix(const ParametrixResult& par, const SampledField& g, int order);

}  // namespace wflab
