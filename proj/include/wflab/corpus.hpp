#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wflab/symbol.hpp"
#include "wflab/tfa.hpp"

namespace wflab {

/// How the field is expected to flag when it fails membership.
enum class WfClass {
    Empty,        // rapidly decaying in phase space; never flags
    ExitAtZero,   // e-flags at frequency balls containing 0 (both exits)
    ExitAtXi0,    // e-flags at frequency balls containing the carrier ξ₀
    PsiAtOrigin,  // ψ-flags at space balls containing 0 (both directions)
    PsiEDiagonal  // ψe-flags on equal direction pairs
};

struct CorpusFieldEntry {
    std::string id;
    SampledField field;
    /// Desk-scale truth: membership of the entry for ⟨x⟩^t⟨ξ⟩^s at p=q=2.
    std::function<bool(Real t, Real s)> member_rule;
    std::string member_basis;
    WfClass wf_class = WfClass::Empty;
    std::string wf_basis;
    Real xi0 = 0.0;  // carrier frequency where applicable
};

struct CorpusSymbolEntry {
    std::string id;
    Symbol symbol;
    bool elliptic = false;
    std::string basis;
};

struct Corpus {
    GridSpec grid;
    std::vector<CorpusFieldEntry> fields;
    std::vector<CorpusSymbolEntry> symbols;
    std::vector<std::pair<Real, Real>> weight_exponents;  // (t, s) registry
    std::vector<Weight> weights;                          // ⟨x⟩^t⟨ξ⟩^s in the same order
    WeightSequence sequence;                              // ⟨(x,ξ)⟩^{−j}, j ≤ 6

    const CorpusFieldEntry& field(const std::string& id) const;
    const CorpusSymbolEntry& symbol(const std::string& id) const;
};

/// Deterministic corpus on the given grid: gaussian, modulated gaussian,
/// band-limited spike, plane wave times plateau, chirp times plateau,
/// two-bump, constant-one; symbols 1, ξ, x, ⟨ξ⟩², ⟨x⟩⟨ξ⟩, a cutoff tensor and
/// (d=2) the heat symbol; the 5×5 bracket weight registry and the joint-decay
/// sequence.
Corpus build_corpus(const GridSpec& g);

/// The anisotropic reference weight (1+|ξ|⁴+τ²)^{1/2} of the heat symbol.
Weight heat_reference_weight();

struct OracleOutcome {
    std::string entry;
    std::string oracle;
    bool match = false;
    Real detail = 0.0;  // worst deviation or disagreement count
};

/// Re-derives every oracle-based truth in the corpus through independent
/// code paths (closed forms, direct summation, scaling studies) and compares
/// with the library's fast paths and the declared truth table.
std::vector<OracleOutcome> run_oracles(const Corpus& corpus, bool quick = false);

}  // namespace wflab
