#pragma once

#include <string>

#include "wflab/expr.hpp"
#include "wflab/grid.hpp"
#include "wflab/weight.hpp"

namespace wflab {

/// Grid-evaluable symbol a(x,ξ) with declared orders (m,μ), regularity class
/// (r,ρ) and reference weight ω₀ (defaults to σ_{m,μ}).
struct Symbol {
    std::string name;
    ExprPtr expr;
    Real m = 0.0, mu = 0.0;
    Real r = 1.0, rho = 1.0;
    Weight omega0;

    Complex eval(const Point& x, const Point& xi) const { return expr->eval(x, xi); }
    Complex eval1(Real x, Real xi) const { return expr->eval({x, 0.0}, {xi, 0.0}); }
};

Symbol make_symbol(std::string name, ExprPtr e, Real m, Real mu, Real r = 1.0, Real rho = 1.0);
Symbol make_symbol(std::string name, ExprPtr e, Real m, Real mu, Real r, Real rho, Weight omega0);
/// Parse from the CLI syntax with orders (m,μ) and default ω₀ = σ_{m,μ}.
Symbol parse_symbol(const std::string& text, Real m, Real mu, Real r = 1.0, Real rho = 1.0);

/// Compact neighbourhood X: a closed ball.
struct BallPatch {
    Point center{0.0, 0.0};
    Real radius = 1.0;

    bool contains(const Point& u, int dim) const {
        Real d2 = 0.0;
        for (int a = 0; a < dim; ++a) d2 += (u[a] - center[a]) * (u[a] - center[a]);
        return d2 <= radius * radius;
    }
    BallPatch scaled(Real f) const { return {center, radius * f}; }
    BallPatch reflected() const { return {{-center[0], -center[1]}, radius}; }
};

/// Open conical neighbourhood Γ with inner radius R: direction, half-angle
/// aperture (d=2) or sign selector via direction[0] = ±1 (d=1).
struct ConePatch {
    Point direction{1.0, 0.0};
    Real aperture = kPi / 2.0;
    Real radius_R = 1.0;

    bool contains(const Point& u, int dim) const {
        if (dim == 1) return u[0] * direction[0] >= radius_R;
        const Real rho = std::hypot(u[0], u[1]);
        if (rho < radius_R) return false;
        const Real c = (u[0] * direction[0] + u[1] * direction[1]) / rho;
        return c >= std::cos(aperture);
    }
    ConePatch with_aperture(Real a) const { return {direction, a, radius_R}; }
    ConePatch negated() const { return {{-direction[0], -direction[1]}, aperture, radius_R}; }
};

void validate_ball(const BallPatch& b, const GridSpec& g, bool freq_side);
void validate_cone(const ConePatch& c, const GridSpec& g, bool freq_side);

}  // namespace wflab
