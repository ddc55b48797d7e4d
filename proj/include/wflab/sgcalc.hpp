#pragma once

#include <vector>

#include "wflab/symbol.hpp"

namespace wflab {

enum class Regime { Psi, E, PsiE };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Psi: return "psi";
        case Regime::E: return "e";
        case Regime::PsiE: return "psi_e";
    }
    return "?";
}

inline constexpr Real kCharMarginMin = 1e-3;

/// Probe patches are the tiles scaled by this factor: small enough to sit
/// inside a localizer plateau (fraction 0.75), large enough that probe
/// regions still cover the tiled domain (tile radius is 0.75 of a cell).
inline constexpr Real kCharProbeScale = 0.7;

struct SgCertificateEntry {
    int ax1 = 0, ax2 = 0, bx1 = 0, bx2 = 0;
    Real value = 0.0;
};

struct SgCertificate {
    std::vector<SgCertificateEntry> entries;
    Real bound = 1e6;
    bool pass = false;
};

/// Sampled certificate for the global symbol estimates: per (α,β) reports
/// sup ⟨x⟩^{r|α|}⟨ξ⟩^{ρ|β|}|∂^α_x ∂^β_ξ a| / ω₀ over a decimated lattice of
/// the phase grid, 4th-order central differences at grid step.
SgCertificate sg_seminorm_certificate(const Symbol& a, int max_order, const GridSpec& grid);

/// Smooth compact cutoff: 1 on the concentric ball of radius
/// plateau_fraction·radius, supported inside `patch`. x-slot symbol.
Symbol make_cutoff(const BallPatch& patch, Real plateau_fraction, const GridSpec& grid);

/// Directional cutoff in the ξ slot: supp ⊆ Γ, 0-homogeneous beyond
/// radius_R, ≡ 1 on the inner cone (aperture × inner_aperture_fraction)
/// beyond radius_R.
Symbol make_directional_cutoff(const ConePatch& patch, Real inner_aperture_fraction,
                               const GridSpec& grid);

/// Slot-generic variants (slot 0 = x, 1 = ξ) used to assemble localizers.
Symbol make_cutoff_slot(const BallPatch& patch, Real plateau_fraction, const GridSpec& grid,
                        int slot);
Symbol make_directional_cutoff_slot(const ConePatch& patch, Real inner_aperture_fraction,
                                    const GridSpec& grid, int slot);

/// min over grid nodes of |a(x,ξ)|/ω₀(x,ξ) on the regime's region
/// (ψ: X × {ξ∈Γ, |ξ|≥R}; e: {x∈Γ, |x|≥R} × X; ψe: both conical), clipped to
/// the grid; +∞ when the discretized region is empty.
Real char_margin(const Symbol& a, Regime regime, const BallPatch* space_ball,
                 const ConePatch* space_cone, const BallPatch* freq_ball,
                 const ConePatch* freq_cone, const GridSpec& grid);

/// Convenience overloads matching the regime's patch types.
Real char_margin_psi(const Symbol& a, const BallPatch& X, const ConePatch& G, const GridSpec& g);
Real char_margin_e(const Symbol& a, const ConePatch& G, const BallPatch& X, const GridSpec& g);
Real char_margin_psie(const Symbol& a, const ConePatch& G1, const ConePatch& G2, const GridSpec& g);

/// Phase-space tiling shared by the characteristic-set and wave-front
/// estimators: balls covering [−L/2, L/2]^d and cones covering the sphere.
struct Tiling {
    std::vector<BallPatch> balls;
    std::vector<ConePatch> cones;  // radius_R = localization ramp radius
    int balls_per_axis = 4;
    int n_directions = 2;
    Real span = 0.0;  // balls cover [-span/2, span/2]^d
};

struct TilingResolution {
    int balls_per_axis = 4;
    int n_directions = 0;  // 0 → default (2 for d=1, 8 for d=2)
};

Tiling build_tiling(const GridSpec& g, const TilingResolution& res, bool freq_side_balls,
                    Real cone_ramp_radius);

bool balls_adjacent(const Tiling& t, int i, int j, int d);
bool cones_adjacent(const Tiling& t, int i, int j, int d);

struct CharTileEntry {
    Regime regime;
    int compact_index = 0;  // ball tile
    int cone_index = 0;     // direction tile (first slot for ψe)
    int cone_index2 = 0;    // second direction (ψe only)
    Real margin = 0.0;
    bool characteristic = false;
};

struct CharSetReport {
    Regime regime;
    std::vector<CharTileEntry> tiles;
    Real c_min = kCharMarginMin;
    TilingResolution resolution;

    bool empty() const {
        for (const auto& t : tiles)
            if (t.characteristic) return false;
        return true;
    }
};

/// Tiles the regime's domain and evaluates char_margin on the inner half of
/// each tile's patches (the probe realizing the existential neighbourhood).
CharSetReport char_set(const Symbol& a, Regime regime, const GridSpec& grid,
                       const TilingResolution& res = {});

struct EllipticityReport {
    Real c = 0.0;
    bool elliptic = false;
};

/// min |a|/ω₀ over grid nodes with |x| ≥ radius or |ξ| ≥ radius.
EllipticityReport is_sg_elliptic(const Symbol& a, Real compact_exclusion_radius,
                                 const GridSpec& grid);

}  // namespace wflab
