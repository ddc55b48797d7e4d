#pragma once

#include "wflab/grid.hpp"
#include "wflab/weight.hpp"

namespace wflab {

/// Fast per-node weight evaluation over the phase grid of a base grid:
/// separable bracket factors are tabulated per axis; joint/user factors are
/// evaluated pointwise.
class WeightTables {
public:
    WeightTables(const Weight& w, const GridSpec& g);

    Real eval(std::int64_t x_flat, std::int64_t xi_flat) const {
        Real v = wx_[x_flat] * wxi_[xi_flat];
        if (joint_u_ != 0.0)
            v *= std::pow(1.0 + r2x_[x_flat] + r2xi_[xi_flat], 0.5 * joint_u_);
        if (has_user_) v *= user_factor(x_flat, xi_flat);
        return v;
    }

    /// |（x,ξ)|² of the node pair — shared with the annulus logic.
    Real radius2(std::int64_t x_flat, std::int64_t xi_flat) const {
        return r2x_[x_flat] + r2xi_[xi_flat];
    }
    Real radius2_x(std::int64_t x_flat) const { return r2x_[x_flat]; }
    Real radius2_xi(std::int64_t xi_flat) const { return r2xi_[xi_flat]; }

private:
    Real user_factor(std::int64_t x_flat, std::int64_t xi_flat) const;

    const GridSpec grid_;
    Weight user_part_;
    RArray wx_, wxi_;    // separable bracket factors per flat node
    RArray r2x_, r2xi_;  // |x|², |ξ|² per flat node
    Real joint_u_ = 0.0;
    bool has_user_ = false;
};

}  // namespace wflab
