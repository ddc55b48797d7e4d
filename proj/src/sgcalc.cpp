#include "wflab/sgcalc.hpp"

#include <cmath>
#include <sstream>

namespace wflab {

Symbol make_symbol(std::string name, ExprPtr e, Real m, Real mu, Real r, Real rho) {
    return make_symbol(std::move(name), std::move(e), m, mu, r, rho, Weight::sigma(m, mu));
}

Symbol make_symbol(std::string name, ExprPtr e, Real m, Real mu, Real r, Real rho, Weight omega0) {
    Symbol s;
    s.name = std::move(name);
    s.expr = std::move(e);
    s.m = m;
    s.mu = mu;
    s.r = r;
    s.rho = rho;
    s.omega0 = std::move(omega0);
    return s;
}

Symbol parse_symbol(const std::string& text, Real m, Real mu, Real r, Real rho) {
    return make_symbol(text, parse_expr(text), m, mu, r, rho);
}

void validate_ball(const BallPatch& b, const GridSpec& g, bool freq_side) {
    if (!(b.radius > 0.0)) throw ContractError("BallPatch: radius must be positive");
    const Real L = freq_side ? g.dual_extent() : g.extent;
    for (int a = 0; a < g.d; ++a)
        if (std::abs(b.center[a]) + b.radius > L)
            throw ContractError("BallPatch: ball exceeds the grid domain");
}

void validate_cone(const ConePatch& c, const GridSpec& g, bool freq_side) {
    Real n2 = 0.0;
    for (int a = 0; a < g.d; ++a) n2 += c.direction[a] * c.direction[a];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw ContractError("ConePatch: direction must be unit-norm");
    if (!(c.aperture > 0.0) || c.aperture > kPi / 2.0)
        throw ContractError("ConePatch: aperture must be in (0, pi/2]");
    const Real L = freq_side ? g.dual_extent() : g.extent;
    if (!(c.radius_R > 0.0) || c.radius_R >= L)
        throw ContractError("ConePatch: radius_R must be in (0, extent)");
}

namespace {

/// 4th-order central first difference, iterated for higher orders.
template <typename Fn>
Complex cfd(const Fn& f, Real x, int order, Real h) {
    if (order == 0) return f(x);
    auto g = [&](Real y) { return cfd(f, y, order - 1, h); };
    return (-g(x + 2 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2 * h)) / (12.0 * h);
}

}  // namespace

SgCertificate sg_seminorm_certificate(const Symbol& a, int max_order, const GridSpec& grid) {
    if (max_order < 0 || max_order > 3) throw ContractError("sg_seminorm_certificate: max_order <= 3");
    SgCertificate cert;
    const Real hx = grid.step();
    const Real hxi = grid.dual_step();
    const int m = std::min(grid.n_per_axis, grid.d == 1 ? 33 : 11);
    const Real L = grid.extent, Xi = grid.dual_extent();

    struct MIdx {
        int a1, a2;
        int total() const { return a1 + a2; }
    };
    std::vector<MIdx> midx;
    if (grid.d == 1)
        for (int k = 0; k <= max_order; ++k) midx.push_back({k, 0});
    else
        for (int a1 = 0; a1 <= max_order; ++a1)
            for (int a2 = 0; a2 + a1 <= max_order; ++a2) midx.push_back({a1, a2});

    const int m2 = grid.d == 2 ? m : 1;
    for (const auto& al : midx)
        for (const auto& be : midx) {
            if (al.total() + be.total() > max_order) continue;
            Real sup = 0.0;
            for (int i1 = 0; i1 < m; ++i1)
                for (int i2 = 0; i2 < m2; ++i2)
                    for (int k1 = 0; k1 < m; ++k1)
                        for (int k2 = 0; k2 < m2; ++k2) {
                            Point x{-L + 2.0 * L * (i1 + 0.5) / m,
                                    grid.d == 2 ? -L + 2.0 * L * (i2 + 0.5) / m : 0.0};
                            Point xi{-Xi + 2.0 * Xi * (k1 + 0.5) / m,
                                     grid.d == 2 ? -Xi + 2.0 * Xi * (k2 + 0.5) / m : 0.0};
                            auto f4 = [&](Real q) {
                                auto f3 = [&](Real p) {
                                    auto f2 = [&](Real y) {
                                        auto f1 = [&](Real z) {
                                            return a.eval({z, y}, {p, q});
                                        };
                                        return cfd(f1, x[0], al.a1, hx);
                                    };
                                    return cfd(f2, x[1], al.a2, hx);
                                };
                                return cfd(f3, xi[0], be.a1, hxi);
                            };
                            const Complex deriv = cfd(f4, xi[1], be.a2, hxi);
                            const Real w0 = a.omega0.eval2(x[0], x[1], xi[0], xi[1]);
                            if (w0 <= 0.0) continue;
                            const Real fac =
                                std::pow(bracket2(x[0], x[1]), a.r * al.total()) *
                                std::pow(bracket2(xi[0], xi[1]), a.rho * be.total());
                            sup = std::max(sup, fac * std::abs(deriv) / w0);
                        }
            cert.entries.push_back({al.a1, al.a2, be.a1, be.a2, sup});
        }
    cert.pass = true;
    for (const auto& e : cert.entries)
        if (!(e.value <= cert.bound)) cert.pass = false;
    return cert;
}

Symbol make_cutoff_slot(const BallPatch& patch, Real plateau_fraction, const GridSpec& grid,
                        int slot) {
    if (!(plateau_fraction > 0.0 && plateau_fraction < 1.0))
        throw ContractError("make_cutoff: plateau_fraction in (0,1)");
    validate_ball(patch, grid, slot == 1);
    ExprPtr e = expr_radial_bump(slot, grid.d, patch.center, plateau_fraction * patch.radius,
                                 patch.radius);
    std::ostringstream name;
    name << (slot == 0 ? "cutoff_x" : "cutoff_xi") << "(c=" << patch.center[0];
    if (grid.d == 2) name << "," << patch.center[1];
    name << ",r=" << patch.radius << ")";
    return make_symbol(name.str(), e, 0.0, 0.0, 1.0, 1.0, Weight::one());
}

Symbol make_cutoff(const BallPatch& patch, Real plateau_fraction, const GridSpec& grid) {
    return make_cutoff_slot(patch, plateau_fraction, grid, 0);
}

Symbol make_directional_cutoff_slot(const ConePatch& patch, Real inner_aperture_fraction,
                                    const GridSpec& grid, int slot) {
    if (!(inner_aperture_fraction > 0.0 && inner_aperture_fraction < 1.0))
        throw ContractError("make_directional_cutoff: inner_aperture_fraction in (0,1)");
    validate_cone(patch, grid, slot == 1);
    if (grid.d == 2) {
        // angular resolution guard: aperture must span at least 2 angular
        // cells of the grid at the ramp radius
        const Real step = slot == 1 ? grid.dual_step() : grid.step();
        const Real cell = std::atan2(step, patch.radius_R);
        if (patch.aperture < 2.0 * cell)
            throw ContractError("make_directional_cutoff: aperture below angular grid resolution");
    }
    const Real cos_outer = std::cos(patch.aperture);
    const Real cos_inner = std::cos(inner_aperture_fraction * patch.aperture);
    ExprPtr e = expr_directional_bump(slot, grid.d, patch.direction, patch.radius_R, cos_inner,
                                      cos_outer);
    std::ostringstream name;
    name << (slot == 0 ? "dircut_x" : "dircut_xi") << "(d=" << patch.direction[0];
    if (grid.d == 2) name << "," << patch.direction[1];
    name << ",R=" << patch.radius_R << ")";
    return make_symbol(name.str(), e, 0.0, 0.0, 1.0, 1.0, Weight::one());
}

Symbol make_directional_cutoff(const ConePatch& patch, Real inner_aperture_fraction,
                               const GridSpec& grid) {
    return make_directional_cutoff_slot(patch, inner_aperture_fraction, grid, 1);
}

namespace {

/// Nodes of one slot lying in a ball / cone region.
std::vector<std::pair<std::int64_t, Point>> region_nodes(const GridSpec& g, bool freq_side,
                                                         const BallPatch* ball,
                                                         const ConePatch* cone) {
    std::vector<std::pair<std::int64_t, Point>> out;
    const int n = g.n_per_axis;
    auto coord = [&](int i) { return freq_side ? g.dual_node(i) : g.node(i); };
    auto admit = [&](std::int64_t flat, const Point& u) {
        if (ball && !ball->contains(u, g.d)) return;
        if (cone && !cone->contains(u, g.d)) return;
        out.emplace_back(flat, u);
    };
    if (g.d == 1) {
        for (int i = 0; i < n; ++i) admit(i, {coord(i), 0.0});
    } else {
        std::int64_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) admit(p, {coord(i), coord(j)});
    }
    return out;
}

}  // namespace

Real char_margin(const Symbol& a, Regime regime, const BallPatch* space_ball,
                 const ConePatch* space_cone, const BallPatch* freq_ball,
                 const ConePatch* freq_cone, const GridSpec& grid) {
    switch (regime) {
        case Regime::Psi:
            if (!space_ball || !freq_cone) throw ContractError("char_margin: psi needs Ball x Cone");
            break;
        case Regime::E:
            if (!space_cone || !freq_ball) throw ContractError("char_margin: e needs Cone x Ball");
            break;
        case Regime::PsiE:
            if (!space_cone || !freq_cone) throw ContractError("char_margin: psi_e needs Cone x Cone");
            break;
    }
    auto xs = region_nodes(grid, false, space_ball, space_cone);
    auto xis = region_nodes(grid, true, freq_ball, freq_cone);
    if (xs.empty() || xis.empty()) return kInf;
    Real mn = kInf;
    for (const auto& [xf, x] : xs)
        for (const auto& [kf, xi] : xis) {
            const Real w0 = a.omega0.eval2(x[0], x[1], xi[0], xi[1]);
            if (w0 <= 0.0) continue;
            mn = std::min(mn, std::abs(a.eval(x, xi)) / w0);
        }
    return mn;
}

Real char_margin_psi(const Symbol& a, const BallPatch& X, const ConePatch& G, const GridSpec& g) {
    return char_margin(a, Regime::Psi, &X, nullptr, nullptr, &G, g);
}
Real char_margin_e(const Symbol& a, const ConePatch& G, const BallPatch& X, const GridSpec& g) {
    return char_margin(a, Regime::E, nullptr, &G, &X, nullptr, g);
}
Real char_margin_psie(const Symbol& a, const ConePatch& G1, const ConePatch& G2, const GridSpec& g) {
    return char_margin(a, Regime::PsiE, nullptr, &G1, nullptr, &G2, g);
}

Tiling build_tiling(const GridSpec& g, const TilingResolution& res, bool freq_side_balls,
                    Real cone_ramp_radius) {
    TilingResolution r = res;
    if (r.n_directions == 0) r.n_directions = g.d == 1 ? 2 : 8;
    if (r.balls_per_axis < 4) throw ContractError("tiling: need >= 4 ball patches per axis");
    if (g.d == 1 && r.n_directions < 2) throw ContractError("tiling: need >= 2 directions");
    if (g.d == 2 && r.n_directions < 8) throw ContractError("tiling: need >= 8 directions (d=2)");

    Tiling t;
    t.balls_per_axis = r.balls_per_axis;
    t.n_directions = r.n_directions;
    // balls cover the compact window [-L/2, L/2]^d in both slots (the
    // frequency-side window uses the primal scale so torsion acts on tiles)
    const Real span = std::min(g.extent, g.dual_extent());
    (void)freq_side_balls;
    t.span = span;
    const int nb = r.balls_per_axis;
    const Real cell = span / nb;
    const Real radius = 0.75 * cell * (g.d == 2 ? std::sqrt(2.0) : 1.0);
    if (g.d == 1) {
        for (int i = 0; i < nb; ++i)
            t.balls.push_back({{-span / 2 + (i + 0.5) * cell, 0.0}, radius});
    } else {
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
                t.balls.push_back(
                    {{-span / 2 + (i + 0.5) * cell, -span / 2 + (j + 0.5) * cell}, radius});
    }
    if (g.d == 1) {
        t.cones.push_back({{1.0, 0.0}, kPi / 2.0, cone_ramp_radius});
        t.cones.push_back({{-1.0, 0.0}, kPi / 2.0, cone_ramp_radius});
        if (r.n_directions != 2) t.n_directions = 2;
    } else {
        const int nd = r.n_directions;
        const Real half = kPi / nd;  // sector half-width
        for (int k = 0; k < nd; ++k) {
            const Real th = 2.0 * kPi * k / nd;
            t.cones.push_back({{std::cos(th), std::sin(th)}, std::min(1.5 * half, kPi / 2.0),
                               cone_ramp_radius});
        }
    }
    return t;
}

bool balls_adjacent(const Tiling& t, int i, int j, int d) {
    if (i == j) return true;
    if (d == 1) return std::abs(i - j) <= 1;
    const int nb = t.balls_per_axis;
    const int i1 = i / nb, i2 = i % nb, j1 = j / nb, j2 = j % nb;
    return std::abs(i1 - j1) <= 1 && std::abs(i2 - j2) <= 1;
}

bool cones_adjacent(const Tiling& t, int i, int j, int d) {
    if (i == j) return true;
    if (d == 1) return false;
    const int nd = t.n_directions;
    const int diff = std::abs(i - j);
    return diff == 1 || diff == nd - 1;
}

CharSetReport char_set(const Symbol& a, Regime regime, const GridSpec& grid,
                       const TilingResolution& res) {
    CharSetReport rep;
    rep.regime = regime;
    rep.resolution = res;
    const Real ramp_space = grid.extent / 4.0;
    const Real ramp_freq = grid.dual_extent() / 4.0;
    // probe cones keep the sgcalc asymptotic radius; probe balls/cone
    // apertures are the inner half of the tile patch
    Tiling space_balls = build_tiling(grid, res, false, ramp_space);
    Tiling freq_balls = build_tiling(grid, res, true, ramp_freq);

    auto probe_ball = [](const BallPatch& b) { return b.scaled(kCharProbeScale); };
    auto probe_cone = [](const ConePatch& c) { return c.with_aperture(c.aperture * kCharProbeScale); };

    if (regime == Regime::Psi) {
        for (size_t bi = 0; bi < space_balls.balls.size(); ++bi)
            for (size_t ci = 0; ci < freq_balls.cones.size(); ++ci) {
                BallPatch B = probe_ball(space_balls.balls[bi]);
                ConePatch C = probe_cone(freq_balls.cones[ci]);
                const Real m = char_margin_psi(a, B, C, grid);
                rep.tiles.push_back({regime, static_cast<int>(bi), static_cast<int>(ci), 0, m,
                                     m < rep.c_min});
            }
    } else if (regime == Regime::E) {
        for (size_t ci = 0; ci < space_balls.cones.size(); ++ci)
            for (size_t bi = 0; bi < freq_balls.balls.size(); ++bi) {
                ConePatch C = probe_cone(space_balls.cones[ci]);
                BallPatch B = probe_ball(freq_balls.balls[bi]);
                const Real m = char_margin_e(a, C, B, grid);
                rep.tiles.push_back({regime, static_cast<int>(bi), static_cast<int>(ci), 0, m,
                                     m < rep.c_min});
            }
    } else {
        for (size_t c1 = 0; c1 < space_balls.cones.size(); ++c1)
            for (size_t c2 = 0; c2 < freq_balls.cones.size(); ++c2) {
                ConePatch C1 = probe_cone(space_balls.cones[c1]);
                ConePatch C2 = probe_cone(freq_balls.cones[c2]);
                const Real m = char_margin_psie(a, C1, C2, grid);
                rep.tiles.push_back({regime, 0, static_cast<int>(c1), static_cast<int>(c2), m,
                                     m < rep.c_min});
            }
    }
    return rep;
}

EllipticityReport is_sg_elliptic(const Symbol& a, Real compact_exclusion_radius,
                                 const GridSpec& grid) {
    const int n = grid.n_per_axis;
    Real mn = kInf;
    auto visit = [&](const Point& x, const Point& xi) {
        const Real rx = grid.d == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        const Real rxi = grid.d == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
        if (rx < compact_exclusion_radius && rxi < compact_exclusion_radius) return;
        const Real w0 = a.omega0.eval2(x[0], x[1], xi[0], xi[1]);
        if (w0 <= 0.0) return;
        mn = std::min(mn, std::abs(a.eval(x, xi)) / w0);
    };
    if (grid.d == 1) {
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) visit({grid.node(i), 0.0}, {grid.dual_node(k), 0.0});
    } else {
        const int stride = n > 32 ? n / 32 : 1;
        for (int i1 = 0; i1 < n; i1 += stride)
            for (int i2 = 0; i2 < n; i2 += stride)
                for (int k1 = 0; k1 < n; k1 += stride)
                    for (int k2 = 0; k2 < n; k2 += stride)
                        visit({grid.node(i1), grid.node(i2)},
                              {grid.dual_node(k1), grid.dual_node(k2)});
    }
    EllipticityReport rep;
    rep.c = mn == kInf ? 0.0 : mn;
    rep.elliptic = rep.c >= kCharMarginMin;
    return rep;
}

}  // namespace wflab
