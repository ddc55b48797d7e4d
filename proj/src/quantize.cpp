#include "wflab/quantize.hpp"

#include <cmath>

#include "wflab/fft.hpp"
#include "wflab/sgcalc.hpp"

namespace wflab {

SampledSymbol SampledSymbol::sample(const Symbol& a, const GridSpec& g) {
    SampledSymbol s;
    s.grid = g;
    s.values.resize(g.phase_nodes());
    const int n = g.n_per_axis;
    const std::int64_t N = g.nodes();
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) {
            const Point x{g.node(j), 0.0};
            for (int k = 0; k < n; ++k) s.values[std::int64_t(j) * N + k] = a.eval(x, {g.dual_node(k), 0.0});
        }
    } else {
        std::int64_t p = 0;
        for (int j1 = 0; j1 < n; ++j1)
            for (int j2 = 0; j2 < n; ++j2) {
                const Point x{g.node(j1), g.node(j2)};
                for (int k1 = 0; k1 < n; ++k1)
                    for (int k2 = 0; k2 < n; ++k2, ++p)
                        s.values[p] = a.eval(x, {g.dual_node(k1), g.dual_node(k2)});
            }
    }
    if (!s.values.isFinite().all()) throw ContractError("SampledSymbol: non-finite values");
    return s;
}

bool expr_depends_on(const ExprPtr& e, int slot) {
    if (!e) return false;
    switch (e->kind) {
        case Expr::Kind::Const: return false;
        case Expr::Kind::Coord: return e->slot == slot;
        case Expr::Kind::Bracket:
            return e->bracket_kind == 2 || e->bracket_kind == slot;
        case Expr::Kind::RadialBump:
        case Expr::Kind::DirectionalBump: return e->slot == slot;
        case Expr::Kind::UserFn: return true;
        default: return expr_depends_on(e->lhs, slot) || expr_depends_on(e->rhs, slot);
    }
}

namespace {

/// Aliasing guard: the symbol must be resolvable on the dual grid — compare
/// midpoint values with neighbour means on a few probe rows.
void check_alias(const Symbol& a, const GridSpec& g) {
    const int n = g.n_per_axis;
    int bad = 0, total = 0;
    const int rows[3] = {0, n / 2, n - 1};
    for (int r : rows) {
        const Point x = g.d == 1 ? Point{g.node(r), 0.0} : Point{g.node(r), g.node(n / 3)};
        for (int k = 0; k + 1 < n; k += 2) {
            const Point xi0 = g.d == 1 ? Point{g.dual_node(k), 0.0} : Point{g.dual_node(k), 0.0};
            const Point xi1 = g.d == 1 ? Point{g.dual_node(k + 1), 0.0}
                                       : Point{g.dual_node(k + 1), 0.0};
            const Point xim{0.5 * (xi0[0] + xi1[0]), 0.5 * (xi0[1] + xi1[1])};
            const Complex v0 = a.eval(x, xi0), v1 = a.eval(x, xi1), vm = a.eval(x, xim);
            const Real scale = std::abs(v0) + std::abs(v1) + std::abs(vm) + 1e-12;
            if (std::abs(vm - 0.5 * (v0 + v1)) / scale > 0.5) ++bad;
            ++total;
        }
    }
    if (bad > total / 4)
        throw ContractError("op_apply: symbol varies faster than the dual grid resolves (aliasing)");
}

}  // namespace

SampledField op_apply(const SampledSymbol& a0, const SampledField& f) {
    if (f.domain != Domain::Space) throw ContractError("op_apply: field must be space-domain");
    if (!(a0.grid == f.grid)) throw ContractError("op_apply: grid mismatch");
    const GridSpec& g = f.grid;
    const std::int64_t N = g.nodes();
    SampledField fh = fourier(f);
    SampledField out(g, Domain::Space);
    CArray row(N), inv(N);
    for (std::int64_t j = 0; j < N; ++j) {
        row = a0.values.segment(j * N, N) * fh.values;
        if (g.d == 1)
            centered_ifft(row, inv, g.extent);
        else {
            inv = row;
            centered_fft_2d(inv, g.n_per_axis, g.extent, true);
        }
        out.values[j] = inv[j];
    }
    return out;
}

SampledField op_apply(const Symbol& a, const Quantization& q, const SampledField& f) {
    check_alias(a, f.grid);
    SampledSymbol s = SampledSymbol::sample(a, f.grid);
    if (q.t != 0.0) s = change_quantization(s, q.t, 0.0);
    return op_apply(s, f);
}

SampledField op_apply_separable(const Symbol& u_of_x, const Symbol& v_of_xi,
                                const SampledField& f) {
    if (expr_depends_on(u_of_x.expr, 1) || expr_depends_on(v_of_xi.expr, 0))
        throw ContractError("op_apply_separable: factors must be single-slot");
    const GridSpec& g = f.grid;
    const int n = g.n_per_axis;
    SampledField fh = fourier(f);
    if (g.d == 1) {
        for (int k = 0; k < n; ++k) fh.values[k] *= v_of_xi.eval({0, 0}, {g.dual_node(k), 0.0});
    } else {
        std::int64_t p = 0;
        for (int k1 = 0; k1 < n; ++k1)
            for (int k2 = 0; k2 < n; ++k2, ++p)
                fh.values[p] *= v_of_xi.eval({0, 0}, {g.dual_node(k1), g.dual_node(k2)});
    }
    SampledField out = inverse_fourier(fh);
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) out.values[j] *= u_of_x.eval({g.node(j), 0.0}, {0, 0});
    } else {
        std::int64_t p = 0;
        for (int j1 = 0; j1 < n; ++j1)
            for (int j2 = 0; j2 < n; ++j2, ++p)
                out.values[p] *= u_of_x.eval({g.node(j1), g.node(j2)}, {0, 0});
    }
    return out;
}

SampledSymbol change_quantization(const SampledSymbol& a, Real s, Real t) {
    SampledSymbol out = a;
    if (s == t) return out;
    const GridSpec& g = a.grid;
    const int n = g.n_per_axis;
    const Real L = g.extent;
    const Real Xi = g.dual_extent();
    const int axes = 2 * g.d;  // (x axes..., ξ axes...)

    // forward centered transform along every axis of the 2d-dim symbol array
    auto transform_axis = [&](CArray& data, int axis, bool inverse) {
        const Real ext = axis < g.d ? L : Xi;
        std::int64_t stride = 1;
        for (int a2 = axes - 1; a2 > axis; --a2) stride *= n;
        std::int64_t outer_count = 1;
        for (int a2 = 0; a2 < axis; ++a2) outer_count *= n;
        const std::int64_t block = stride * n;
        CArray line(n), res(n);
        for (std::int64_t o = 0; o < outer_count; ++o)
            for (std::int64_t inner = 0; inner < stride; ++inner) {
                const std::int64_t base = o * block + inner;
                for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
                inverse ? centered_ifft(line, res, ext) : centered_fft(line, res, ext);
                for (int i = 0; i < n; ++i) data[base + i * stride] = res[i];
            }
    };

    for (int ax = 0; ax < axes; ++ax) transform_axis(out.values, ax, false);

    // dual axes: ζ_x on the dual of the x axis, ζ_ξ on the dual of the ξ axis
    const Real zeta_x_step = kPi / L, zeta_xi_step = kPi / Xi;
    const Real zeta_x0 = -kPi / (2.0 * L / n);  // = -Ξ
    const Real zeta_xi0 = -kPi / (2.0 * Xi / n);
    Real tail = 0.0, total = 0.0;
    const Real phase_scale = -(t - s);
    if (g.d == 1) {
        std::int64_t p = 0;
        for (int zx = 0; zx < n; ++zx)
            for (int zxi = 0; zxi < n; ++zxi, ++p) {
                const Real a1 = zeta_x0 + zx * zeta_x_step;
                const Real a2 = zeta_xi0 + zxi * zeta_xi_step;
                const Real e = std::norm(out.values[p]);
                total += e;
                if (std::abs(a1) > 0.5 * (-zeta_x0) || std::abs(a2) > 0.5 * (-zeta_xi0)) tail += e;
                out.values[p] *= std::exp(Complex(0.0, phase_scale * a1 * a2));
            }
    } else {
        std::int64_t p = 0;
        for (int u1 = 0; u1 < n; ++u1)
            for (int u2 = 0; u2 < n; ++u2)
                for (int v1 = 0; v1 < n; ++v1)
                    for (int v2 = 0; v2 < n; ++v2, ++p) {
                        const Real zx1 = zeta_x0 + u1 * zeta_x_step;
                        const Real zx2 = zeta_x0 + u2 * zeta_x_step;
                        const Real zxi1 = zeta_xi0 + v1 * zeta_xi_step;
                        const Real zxi2 = zeta_xi0 + v2 * zeta_xi_step;
                        const Real e = std::norm(out.values[p]);
                        total += e;
                        if (std::max(std::abs(zx1), std::abs(zx2)) > 0.5 * (-zeta_x0) ||
                            std::max(std::abs(zxi1), std::abs(zxi2)) > 0.5 * (-zeta_xi0))
                            tail += e;
                        out.values[p] *=
                            std::exp(Complex(0.0, phase_scale * (zx1 * zxi1 + zx2 * zxi2)));
                    }
    }
    out.spectral_tail_warning = total > 0.0 && tail > 1e-3 * total;

    for (int ax = 0; ax < axes; ++ax) transform_axis(out.values, ax, true);
    return out;
}

Real compose_residual(const Symbol& a, const Symbol& b, const Symbol& c,
                      const std::vector<SampledField>& probes) {
    if (probes.empty()) throw ContractError("compose_residual: no probes");
    const GridSpec& g = probes.front().grid;
    SampledSymbol sa = SampledSymbol::sample(a, g);
    SampledSymbol sb = SampledSymbol::sample(b, g);
    SampledSymbol sc = SampledSymbol::sample(c, g);
    Real worst = 0.0;
    for (const auto& f : probes) {
        SampledField lhs = op_apply(sa, op_apply(sb, f));
        SampledField rhs = op_apply(sc, f);
        SampledField diff = lhs;
        diff.values -= rhs.values;
        const Real nf = l2_norm(f);
        if (nf > 0.0) worst = std::max(worst, l2_norm(diff) / nf);
    }
    return worst;
}

std::vector<SampledField> make_probe_fields(const GridSpec& g) {
    const Real L = g.extent;
    const Real dxi = g.dual_step();
    const Real xi0 = std::round(0.25 * L / dxi) * dxi;
    auto gauss = [](Real u, Real s) { return std::exp(-u * u / (2.0 * s * s)); };
    auto radial = [&](const std::array<Real, 2>& x, auto&& f1) {
        Real v = 1.0;
        for (int a2 = 0; a2 < g.d; ++a2) v *= f1(x[a2]);
        return v;
    };
    std::vector<SampledField> probes;
    probes.push_back(make_field(g, [&](const std::array<Real, 2>& x) {
        return Complex(radial(x, [&](Real u) { return gauss(u, 1.0); }), 0.0);
    }));
    probes.push_back(make_field(g, [&](const std::array<Real, 2>& x) {
        return Complex(radial(x, [&](Real u) { return gauss(u - 0.15 * L, 1.5); }), 0.0);
    }));
    probes.push_back(make_field(g, [&](const std::array<Real, 2>& x) {
        return std::exp(Complex(0.0, xi0 * x[0])) * radial(x, [&](Real u) { return gauss(u, 1.0); });
    }));
    probes.push_back(make_field(g, [&](const std::array<Real, 2>& x) {
        Real r2 = 0.0;
        for (int a2 = 0; a2 < g.d; ++a2) r2 += x[a2] * x[a2];
        const Real plateau = mollifier_bridge((0.9 * L - std::sqrt(r2)) / (0.2 * L));
        return std::exp(Complex(0.0, 0.5 * r2)) * plateau;
    }));
    probes.push_back(make_field(g, [&](const std::array<Real, 2>& x) {
        const Real b1 = radial(x, [&](Real u) { return gauss(u - 0.2 * L, 0.06 * L); });
        const Real b2 = radial(x, [&](Real u) { return gauss(u + 0.2 * L, 0.06 * L); });
        return Complex(b1 + b2, 0.0);
    }));
    return probes;
}

ParametrixResult neumann_parametrix(const Symbol& a, const Weight& omega0,
                                    const std::optional<std::pair<Symbol, Symbol>>& cutoffs,
                                    int j_max, const GridSpec& grid,
                                    const std::vector<SampledField>& probes) {
    if (j_max < 1) throw ContractError("neumann_parametrix: j_max >= 1");
    ParametrixResult par;
    par.order_j = j_max;
    par.a = SampledSymbol::sample(a, grid);

    CArray cvals;
    if (cutoffs) {
        Symbol cx = cutoffs->first, cxi = cutoffs->second;
        if (expr_depends_on(cx.expr, 1) || expr_depends_on(cxi.expr, 0))
            throw ContractError("neumann_parametrix: cutoffs must be (x-slot, ξ-slot)");
        Symbol tensor = make_symbol("c", expr_binary(Expr::Kind::Mul, cx.expr, cxi.expr), 0, 0,
                                    1, 1, Weight::one());
        par.c = SampledSymbol::sample(tensor, grid);
        cvals = par.c->values;
    }

    // invertibility precheck on the region where b1 divides by a
    const std::int64_t M = par.a.values.size();
    const int n = grid.n_per_axis;
    const std::int64_t N = grid.nodes();
    Real margin = kInf;
    for (std::int64_t p = 0; p < M; ++p) {
        if (cutoffs && std::abs(cvals[p]) == 0.0) continue;
        const std::int64_t j = p / N, k = p % N;
        Point x, xi;
        if (grid.d == 1) {
            x = {grid.node(static_cast<int>(j)), 0.0};
            xi = {grid.dual_node(static_cast<int>(k)), 0.0};
        } else {
            x = {grid.node(static_cast<int>(j / n)), grid.node(static_cast<int>(j % n))};
            xi = {grid.dual_node(static_cast<int>(k / n)), grid.dual_node(static_cast<int>(k % n))};
        }
        const Real w0 = omega0.eval2(x[0], x[1], xi[0], xi[1]);
        if (w0 > 0.0) margin = std::min(margin, std::abs(par.a.values[p]) / w0);
    }
    if (!(margin >= kCharMarginMin))
        throw ContractError("neumann_parametrix: |a|/omega0 below the invertibility threshold on the cutoff region");

    par.b1 = par.a;
    for (std::int64_t p = 0; p < M; ++p)
        par.b1.values[p] = (cutoffs ? cvals[p] : Complex(1.0, 0.0)) / par.a.values[p];

    auto op_c = [&](const SampledField& f) {
        return cutoffs ? op_apply(*par.c, f) : f;
    };
    auto op_h1 = [&](const SampledField& f) {
        SampledField r = op_apply(par.b1, op_apply(par.a, f));
        r.values -= op_c(f).values;
        return r;
    };

    par.residual_history.assign(j_max, 0.0);
    for (const auto& f : probes) {
        const Real nf = l2_norm(f);
        if (nf <= 0.0) continue;
        SampledField y = op_apply(par.a, f);
        SampledField target = op_c(f);
        SampledField term = op_apply(par.b1, y);
        SampledField acc = term;
        for (int j = 1; j <= j_max; ++j) {
            SampledField diff = acc;
            diff.values -= target.values;
            par.residual_history[j - 1] = std::max(par.residual_history[j - 1], l2_norm(diff) / nf);
            if (j < j_max) {
                SampledField next = op_h1(term);
                next.values = -next.values;
                term = next;
                acc.values += term.values;
            }
        }
    }
    for (size_t j = 1; j < par.residual_history.size(); ++j) {
        const Real prev = par.residual_history[j - 1], cur = par.residual_history[j];
        if (cur > prev * 1.05 && cur > 1e-12) par.non_convergent = true;
    }
    return par;
}

SampledField apply_parametrix(const ParametrixResult& par, const SampledField& g, int order) {
    if (order < 1) throw ContractError("apply_parametrix: order >= 1");
    SampledField term = op_apply(par.b1, g);
    SampledField acc = term;
    for (int k = 1; k < order; ++k) {
        SampledField h = op_apply(par.b1, op_apply(par.a, term));
        if (par.c)
            h.values -= op_apply(*par.c, term).values;
        else
            h.values -= term.values;
        h.values = -h.values;
        term = h;
        acc.values += term.values;
    }
    return acc;
}

}  // namespace wflab
