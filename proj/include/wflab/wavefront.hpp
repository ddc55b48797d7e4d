#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wflab/quantize.hpp"
#include "wflab/sgcalc.hpp"
#include "wflab/tfa.hpp"

namespace wflab {

/// Identifies one phase-space tile of a wave-front report.
struct PhasePatchKey {
    Regime regime = Regime::Psi;
    int compact_index = 0;  // ball tile (ψ: space side; e: frequency side)
    int cone_index = 0;     // direction tile (ψ: frequency; e/ψe: space)
    int cone_index2 = 0;    // second direction (ψe: frequency)

    bool operator==(const PhasePatchKey& o) const {
        return regime == o.regime && compact_index == o.compact_index &&
               cone_index == o.cone_index && cone_index2 == o.cone_index2;
    }
};

struct WFEntry {
    PhasePatchKey key;
    BallPatch ball;          // valid for ψ/e tiles
    ConePatch cone;          // ψ: freq dir; e/ψe: space dir
    ConePatch cone2;         // ψe: freq dir
    MembershipVerdict verdict;
    bool flagged = false;
};

/// φ·ψ(D)f applies the frequency cutoff first and multiplies afterwards
/// (the definition's reading); the swapped order ψ(D)(φ·f) is the
/// order-invariance comparison partner.
enum class LocalizerOrder { FilterThenMultiply, MultiplyThenFilter };
enum class SupInfMode { Sup, Inf };

struct WfOptions {
    TilingResolution resolution;
    LocalizerOrder order = LocalizerOrder::FilterThenMultiply;
    /// plateau fraction of ball cutoffs / inner-aperture fraction of cones;
    /// the wide transition keeps the localizers' own spectral tails decaying
    /// well inside the annulus horizon
    Real localizer_plateau = 0.15;
    /// ball localizers widen their support by this factor over the tile ball
    /// (overlapping localizers are fine; the transition shell must be wide)
    Real localizer_ball_scale = 1.5;
    /// extra scaling of the tile patch before building localizers (< 1 gives
    /// the nested shrunk family used by the monotonicity checks)
    Real shrink = 1.0;
    MembershipParams membership;
    Real window_std = 1.0;
};

struct WFReport {
    std::string field_id;
    Weight weight;
    std::string weight_str;
    std::string mode = "fixed";  // fixed | sup | inf
    MixedNormSpec spec;
    TilingResolution resolution;
    GridSpec grid;
    std::string window_id;
    std::vector<WFEntry> entries;
    std::vector<std::string> warnings;

    bool empty() const {
        for (const auto& e : entries)
            if (e.flagged) return false;
        return true;
    }
    int flag_count() const {
        int c = 0;
        for (const auto& e : entries) c += e.flagged ? 1 : 0;
        return c;
    }
    const WFEntry* find(const PhasePatchKey& k) const {
        for (const auto& e : entries)
            if (e.key == k) return &e;
        return nullptr;
    }
};

/// One regime slice of the wave-front report: per tile, localize
/// (ψ: φ·f then ψ(D); e: ψ(x)·f then φ(D); ψe: ψ₁(x)·f then ψ₂(D)) and run
/// the membership estimator on the localized field.
WFReport wf_component(const SampledField& f, Regime regime, const Weight& w,
                      const MixedNormSpec& spec, const WfOptions& opt = {});

/// All three regimes; the union view is the entry list itself.
WFReport wf_global(const SampledField& f, const Weight& w, const MixedNormSpec& spec,
                   const WfOptions& opt = {});

/// Shared-localization variant: one localization + STFT pass per tile,
/// evaluated against every weight. reports[i] corresponds to ws[i].
std::vector<WFReport> wf_global_multi(const SampledField& f, const std::vector<Weight>& ws,
                                      const MixedNormSpec& spec, const WfOptions& opt = {});

/// Per tile: flag iff non-member for some j (sup) / every j (inf).
WFReport wf_supinf(const SampledField& f, const WeightSequence& ws, SupInfMode mode,
                   const MixedNormSpec& spec, const WfOptions& opt = {});

/// Map tile keys by the torsion T(x,ξ) = (−ξ,x): ψ ↦ e (direction negated),
/// e ↦ ψ (ball reflected), ψe ↦ ψe; weight ↦ ω_T, iterated order swapped.
WFReport torsion_transport(const WFReport& rep);

/// Tile adjacency (same regime, ≤ 1 tile apart in every index).
bool tiles_adjacent(const PhasePatchKey& a, const PhasePatchKey& b, const TilingResolution& res,
                    int d);

/// Every flagged tile of `inner` is flagged within one tile of slack in
/// `outer` (optionally also excused by characteristic tiles of `chars`).
bool included_with_slack(const WFReport& inner, const WFReport& outer,
                         const std::vector<CharSetReport>* chars, int d);

/// Tiles in the symmetric difference must have a flagged neighbour in the
/// other report (boundary tiles).
bool equal_with_slack(const WFReport& a, const WFReport& b, int d);

struct CrosscheckTile {
    PhasePatchKey key;
    bool wf_flag = false;
    bool char_flag = false;  // characteristic for every member-producing symbol
};

struct CrosscheckReport {
    bool indeterminate = false;  // Ω̂ empty
    int family_members = 0;      // |Ω̂|
    Real agreement = 0.0;
    std::vector<CrosscheckTile> tiles;
};

/// Compares wave-front flags with ∩_{a∈Ω̂} char-tiles, Ω̂ = symbols of the
/// family whose Op(a)f passes the membership estimate at weight ω/ω₀.
CrosscheckReport charset_crosscheck(const SampledField& f, const std::vector<Symbol>& family,
                                    const Weight& w, const Weight& omega0,
                                    const MixedNormSpec& spec, const WfOptions& opt = {});

}  // namespace wflab
