#pragma once

#include <string>

#include "wflab/grid.hpp"
#include "wflab/weight.hpp"

namespace wflab {

/// V_φf samples on the n^d × n^d product grid; x index outer, ξ inner.
struct PhaseField {
    GridSpec grid;  // the base grid
    CArray values;
    std::string window_id;

    PhaseField() = default;
    explicit PhaseField(const GridSpec& g) : grid(g) { values = CArray::Zero(g.phase_nodes()); }

    std::int64_t index(std::int64_t x_flat, std::int64_t xi_flat) const {
        return x_flat * grid.nodes() + xi_flat;
    }
};

/// Weighted mixed-norm specification. InnerXOuterXi integrates over x first
/// (the M^{p,q} convention); InnerXiOuterX integrates over ξ first (W^{p,q}).
struct MixedNormSpec {
    Real p = 2.0;
    Real q = 2.0;
    enum class Order { InnerXOuterXi, InnerXiOuterX } order = Order::InnerXOuterXi;

    MixedNormSpec() = default;
    MixedNormSpec(Real p_, Real q_, Order o = Order::InnerXOuterXi) : p(p_), q(q_), order(o) {
        if (!(p >= 1.0) || !(q >= 1.0)) throw ContractError("MixedNormSpec: p,q must be >= 1");
    }

    MixedNormSpec torsion() const {
        MixedNormSpec s = *this;
        s.order = order == Order::InnerXOuterXi ? Order::InnerXiOuterX : Order::InnerXOuterXi;
        return s;
    }
};

/// Weighted iterated quadrature norm of F·w in the declared order;
/// p or q = ∞ is the exact max over nodes.
Real mixed_norm(const PhaseField& F, const MixedNormSpec& spec, const Weight& w);

}  // namespace wflab
