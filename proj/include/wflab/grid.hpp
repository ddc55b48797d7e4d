#pragma once

#include <array>
#include <cstdint>

#include "wflab/types.hpp"

namespace wflab {

/// Uniform periodic grid on [-L, L)^d, d ∈ {1,2}, n samples per axis
/// (power of two). The dual grid covers [-π/h, π/h) with step π/L.
struct GridSpec {
    int d = 1;
    int n_per_axis = 1024;
    Real extent = 16.0;

    GridSpec() = default;
    GridSpec(int dim, int n, Real L);

    Real step() const { return 2.0 * extent / n_per_axis; }
    Real dual_step() const { return kPi / extent; }
    Real dual_extent() const { return kPi / step(); }

    /// Grid with the same n whose nodes are the frequency nodes of this one.
    GridSpec dual() const { return GridSpec(d, n_per_axis, dual_extent()); }

    std::int64_t nodes() const;        // n^d
    std::int64_t phase_nodes() const;  // n^{2d}

    Real node(int i) const { return -extent + i * step(); }
    Real dual_node(int i) const { return -dual_extent() + i * dual_step(); }

    bool operator==(const GridSpec& o) const {
        return d == o.d && n_per_axis == o.n_per_axis && extent == o.extent;
    }
};

/// Extent that makes the dual grid coincide with the primal one.
Real self_dual_extent(int n);

enum class Domain : std::uint8_t { Space = 0, Frequency = 1, PhaseSpace = 2 };

/// Complex samples of a distribution surrogate. Row-major over the grid
/// nodes; phase-space fields hold n^{2d} values (x index outer, ξ inner).
struct SampledField {
    GridSpec grid;
    Domain domain = Domain::Space;
    CArray values;

    SampledField() = default;
    SampledField(const GridSpec& g, Domain dom);

    /// Node index → flat offset, d=1.
    std::int64_t idx(int i) const { return i; }
    /// Node index → flat offset, d=2 (row-major, axis 0 outer).
    std::int64_t idx(int i, int j) const { return std::int64_t(i) * grid.n_per_axis + j; }

    void require_finite() const;
};

/// Field filled by evaluating fn at the grid nodes. Fn: (const std::array<Real,2>&) -> Complex.
template <typename Fn>
SampledField make_field(const GridSpec& g, Fn&& fn) {
    SampledField f(g, Domain::Space);
    const int n = g.n_per_axis;
    if (g.d == 1) {
        for (int i = 0; i < n; ++i) f.values[i] = fn(std::array<Real, 2>{g.node(i), 0.0});
    } else {
        std::int64_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) f.values[p] = fn(std::array<Real, 2>{g.node(i), g.node(j)});
    }
    return f;
}

/// Unitary Fourier transform matching (2π)^{-d/2} ∫ f(x) e^{-i⟨x,ξ⟩} dx with
/// quadrature weight h^d; output samples live on the dual grid, ascending ξ.
SampledField fourier(const SampledField& f);
SampledField inverse_fourier(const SampledField& f);

/// √(h^d Σ|values|²) — rectangle-rule L² norm on the periodic grid.
Real l2_norm(const SampledField& f);

/// Quadrature weight per node (h^d for space, (π/L)^d for frequency;
/// h^d·(π/L)^d for phase space).
Real node_weight(const SampledField& f);

/// Smallest r such that the relative L² mass outside |x| ≤ r is below tol.
Real essential_support_radius(const SampledField& f, Real tol = 1e-3);

/// Relative size of the jump across the periodic boundary; ~0 for fields
/// that are smooth across the wrap.
Real wrap_discontinuity(const SampledField& f);

}  // namespace wflab
