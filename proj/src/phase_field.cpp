#include "wflab/phase_field.hpp"

#include <cmath>

#include "wflab/weight_tables.hpp"

namespace wflab {

WeightTables::WeightTables(const Weight& w, const GridSpec& g) : grid_(g) {
    Real t, s, u;
    w.net_exponents(t, s, u);
    joint_u_ = u;
    // strip user atoms into their own weight
    Weight users;
    std::vector<std::pair<WeightAtom, int>> atoms;
    w.collect(atoms);
    for (const auto& [a, sign] : atoms)
        if (a.kind == WeightAtom::Kind::User) {
            users = sign > 0 ? users * Weight::user(*a.user) : users / Weight::user(*a.user);
        }
    user_part_ = users;
    has_user_ = !w.bracket_only();

    const std::int64_t N = g.nodes();
    wx_.resize(N);
    wxi_.resize(N);
    r2x_.resize(N);
    r2xi_.resize(N);
    const int n = g.n_per_axis;
    if (g.d == 1) {
        for (int i = 0; i < n; ++i) {
            const Real x = g.node(i), xi = g.dual_node(i);
            r2x_[i] = x * x;
            r2xi_[i] = xi * xi;
            wx_[i] = t == 0.0 ? 1.0 : std::pow(1.0 + x * x, 0.5 * t);
            wxi_[i] = s == 0.0 ? 1.0 : std::pow(1.0 + xi * xi, 0.5 * s);
        }
    } else {
        std::int64_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) {
                const Real x1 = g.node(i), x2 = g.node(j);
                const Real xi1 = g.dual_node(i), xi2 = g.dual_node(j);
                r2x_[p] = x1 * x1 + x2 * x2;
                r2xi_[p] = xi1 * xi1 + xi2 * xi2;
                wx_[p] = t == 0.0 ? 1.0 : std::pow(1.0 + r2x_[p], 0.5 * t);
                wxi_[p] = s == 0.0 ? 1.0 : std::pow(1.0 + r2xi_[p], 0.5 * s);
            }
    }
}

Real WeightTables::user_factor(std::int64_t x_flat, std::int64_t xi_flat) const {
    const int n = grid_.n_per_axis;
    Real x1, x2 = 0.0, xi1, xi2 = 0.0;
    if (grid_.d == 1) {
        x1 = grid_.node(static_cast<int>(x_flat));
        xi1 = grid_.dual_node(static_cast<int>(xi_flat));
    } else {
        x1 = grid_.node(static_cast<int>(x_flat / n));
        x2 = grid_.node(static_cast<int>(x_flat % n));
        xi1 = grid_.dual_node(static_cast<int>(xi_flat / n));
        xi2 = grid_.dual_node(static_cast<int>(xi_flat % n));
    }
    return user_part_.eval2(x1, x2, xi1, xi2);
}

namespace {

struct PowerAccumulator {
    Real p;
    Real acc = 0.0;  // sum for finite p, max for p = ∞
    void add(Real v, Real quad_weight) {
        if (p == kInf)
            acc = std::max(acc, v);
        else
            acc += quad_weight * std::pow(v, p);
    }
    Real finish() const { return p == kInf ? acc : std::pow(acc, 1.0 / p); }
};

}  // namespace

Real mixed_norm(const PhaseField& F, const MixedNormSpec& spec, const Weight& w) {
    const GridSpec& g = F.grid;
    const std::int64_t N = g.nodes();
    const Real wq_x = std::pow(g.step(), g.d);
    const Real wq_xi = std::pow(g.dual_step(), g.d);
    WeightTables tables(w, g);

    const bool inner_is_x = spec.order == MixedNormSpec::Order::InnerXOuterXi;
    const Real inner_quad = inner_is_x ? wq_x : wq_xi;
    const Real outer_quad = inner_is_x ? wq_xi : wq_x;

    PowerAccumulator outer{spec.q};
    for (std::int64_t o = 0; o < N; ++o) {
        PowerAccumulator inner{spec.p};
        for (std::int64_t i = 0; i < N; ++i) {
            const std::int64_t x_flat = inner_is_x ? i : o;
            const std::int64_t xi_flat = inner_is_x ? o : i;
            const Real v = std::abs(F.values[F.index(x_flat, xi_flat)]) * tables.eval(x_flat, xi_flat);
            inner.add(v, inner_quad);
        }
        outer.add(inner.finish(), outer_quad);
    }
    return outer.finish();
}

}  // namespace wflab
