#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wflab/grid.hpp"
#include "wflab/types.hpp"

namespace wflab {

/// A positive, grid-evaluable factor with declared regularity class; used for
/// weights that are not products of bracket atoms (e.g. (1+|ξ|⁴+τ²)^{1/2}).
struct UserWeightFn {
    std::string name;
    std::function<Real(Real, Real, Real, Real)> eval;  // (x1,x2,xi1,xi2) -> positive
    Real r = 1.0, rho = 1.0;                           // declared regularity class
    Real moderate_bound = 16.0;                        // declared constant for the moderateness test
};

/// One multiplicative factor: ⟨x⟩^t, ⟨ξ⟩^s, ⟨(x,ξ)⟩^u or a user factor.
struct WeightAtom {
    enum class Kind { BracketX, BracketXi, BracketJoint, User } kind = Kind::BracketX;
    Real exponent = 0.0;
    std::shared_ptr<const UserWeightFn> user;
};

/// Symbolic weight ω(x,ξ), structured as a product/reciprocal tree over
/// atoms so the algebra identities eval(w1*w2) = eval(w1)*eval(w2) and
/// eval(1/w) = 1/eval(w) hold exactly in floating point.
class Weight {
public:
    Weight() : op_(Op::One) {}  // the constant weight 1

    static Weight one() { return Weight(); }
    static Weight bracket_x(Real t);
    static Weight bracket_xi(Real s);
    static Weight bracket_joint(Real u);
    /// σ_{m,μ}(x,ξ) = ⟨x⟩^m ⟨ξ⟩^μ.
    static Weight sigma(Real m, Real mu);
    static Weight user(UserWeightFn fn);

    Weight operator*(const Weight& o) const;
    Weight inverse() const;
    Weight operator/(const Weight& o) const { return *this * o.inverse(); }

    Real eval(Real x, Real xi) const { return eval2(x, 0.0, xi, 0.0); }
    Real eval2(Real x1, Real x2, Real xi1, Real xi2) const;
    Real eval2(Real x1, Real x2, Real xi1, Real xi2, bool& saturated) const;

    /// ω∘T with the torsion T(x,ξ) = (−ξ, x).
    Weight torsion() const;

    bool is_one() const;
    bool bracket_only() const;
    /// Signed flat view: (atom, +1) for numerator factors, (atom, −1) below.
    void collect(std::vector<std::pair<WeightAtom, int>>& out, int sign = 1) const;
    /// Sum over bracket atoms of |exponent|.
    Real abs_exponent_sum() const;
    /// Net exponents (t, s, u) of the bracket atoms; user atoms ignored.
    void net_exponents(Real& t, Real& s, Real& u) const;

    std::string str() const;

private:
    enum class Op { One, Atom, Product, Inverse };
    Op op_;
    WeightAtom atom_;
    std::shared_ptr<const Weight> lhs_, rhs_;

    static Weight atom(WeightAtom a);
    Real eval_raw(Real x1, Real x2, Real xi1, Real xi2) const;
    static void check_exponent(Real e);
};

/// j ↦ ω_j for j in {0,…,j_max}.
struct WeightSequence {
    std::string id;
    int j_max = 0;
    std::function<Weight(int)> generator;
};

/// Sequence (⟨(x,ξ)⟩^{−j})_{j=0..j_max}.
WeightSequence joint_decay_sequence(int j_max);

struct ModerateReport {
    Real max_ratio = 0.0;
    Real threshold = 0.0;
    bool pass = false;
};

/// Sampled certificate for ω(z+w) ≤ C ω(z) v(w) over lattice pairs plus
/// `sample_budget` random pairs (fixed seed). Threshold 2^{Σ|exponents|}
/// for bracket weights.
ModerateReport check_moderate(const Weight& w, const Weight& v, const GridSpec& grid,
                              int sample_budget = 1000);

struct SeminormEntry {
    int ax1 = 0, ax2 = 0, bx1 = 0, bx2 = 0;  // derivative multi-indices (α, β)
    Real value = 0.0;
};

struct PrrReport {
    std::vector<SeminormEntry> seminorms;
    Real bound = 1e3;
    bool pass = false;
};

/// Finite-difference certificate for membership in the weight class with
/// parameters (r, ρ): sup ⟨x⟩^{r|α|}⟨ξ⟩^{ρ|β|} |∂^α_x ∂^β_ξ ω| / ω over a
/// decimated lattice of the grid, total derivative order |α|+|β| ≤ order.
PrrReport check_prr(const Weight& w, Real r, Real rho, int order, const GridSpec& grid);

/// Parse the weight literal syntax, e.g. "bx^1.5*bxi^-2", "bj^-3", "1".
Weight parse_weight(const std::string& text);

}  // namespace wflab
