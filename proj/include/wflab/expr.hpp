#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "wflab/types.hpp"

namespace wflab {

using Point = std::array<Real, 2>;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Closed-form expression tree over (x, ξ); evaluable at arbitrary
/// (off-grid) points so finite differences can be formed on refined grids.
class Expr {
public:
    enum class Kind {
        Const,
        Coord,       // slot/axis coordinate
        Bracket,     // ⟨x⟩, ⟨ξ⟩ or ⟨(x,ξ)⟩ of the full vectors
        Add, Sub, Mul, Div, Neg,
        Pow,         // lhs ^ rhs
        Exp,
        RadialBump, DirectionalBump,
        UserFn
    };

    Kind kind;

    // Const
    Complex value{};
    // Coord: slot 0 = x, 1 = ξ; axis 0/1
    int slot = 0, axis = 0;
    // Bracket: 0 = ⟨x⟩, 1 = ⟨ξ⟩, 2 = ⟨(x,ξ)⟩
    int bracket_kind = 0;
    // children
    ExprPtr lhs, rhs;
    // RadialBump / DirectionalBump parameters
    Point center{0.0, 0.0};
    Point direction{1.0, 0.0};
    Real radius_inner = 0.0, radius_outer = 0.0;  // radial plateau/support
    Real cone_R = 0.0;                            // radial ramp ends at R
    Real cos_inner = 0.0, cos_outer = 0.0;        // angular plateau/support (d=2)
    int dim = 1;
    // UserFn
    std::string user_name;
    std::function<Complex(const Point&, const Point&)> user_fn;

    Complex eval(const Point& x, const Point& xi) const;
};

ExprPtr expr_const(Complex v);
ExprPtr expr_coord(int slot, int axis);
ExprPtr expr_bracket(int which);
ExprPtr expr_binary(Expr::Kind k, ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_exp(ExprPtr a);
ExprPtr expr_user(std::string name, std::function<Complex(const Point&, const Point&)> fn);

/// Smooth bump: 1 on |u−c| <= r_inner, 0 on |u−c| >= r_outer, built from the
/// exp(−1/t) mollifier bridge. slot 0 acts on x, slot 1 on ξ.
ExprPtr expr_radial_bump(int slot, int dim, Point center, Real r_inner, Real r_outer);

/// Smooth directional cutoff: supported in the cone of half-angle
/// acos(cos_outer) around `direction`, equal to 1 on the inner cone beyond
/// radius R, exactly 0-homogeneous for |u| >= R. d=1 uses the signed ramp.
ExprPtr expr_directional_bump(int slot, int dim, Point direction, Real R, Real cos_inner,
                              Real cos_outer);

/// exp(−1/t) bridge: 0 for t <= 0, 1 for t >= 1, C^∞ monotone in between.
Real mollifier_bridge(Real t);

/// Parse the CLI symbol syntax: infix over x, t, xi, tau, x1, x2, xi1, xi2,
/// bx, bxi, bj, exp, i, pi and numeric literals.
ExprPtr parse_expr(const std::string& text);

}  // namespace wflab
