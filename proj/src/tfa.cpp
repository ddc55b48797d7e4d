#include "wflab/tfa.hpp"

#include <cmath>

#include "wflab/fft.hpp"
#include "wflab/weight_tables.hpp"

namespace wflab {

namespace {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

/// g(y) = f(y)·conj(φ(y − x_slice)) for one x node; periodic shift.
void windowed_slice(const SampledField& f, const SampledField& win, std::int64_t x_flat,
                    CArray& out) {
    const int n = f.grid.n_per_axis;
    if (f.grid.d == 1) {
        const int j = static_cast<int>(x_flat);
        for (int i = 0; i < n; ++i)
            out[i] = f.values[i] * std::conj(win.values[wrap(i - j + n / 2, n)]);
    } else {
        const int j1 = static_cast<int>(x_flat / n), j2 = static_cast<int>(x_flat % n);
        std::int64_t p = 0;
        for (int i1 = 0; i1 < n; ++i1) {
            const int m1 = wrap(i1 - j1 + n / 2, n);
            for (int i2 = 0; i2 < n; ++i2, ++p)
                out[p] = f.values[p] * std::conj(win.values[std::int64_t(m1) * n + wrap(i2 - j2 + n / 2, n)]);
        }
    }
}

void slice_fft(CArray& slice, CArray& out, const GridSpec& g) {
    if (g.d == 1) {
        centered_fft(slice, out, g.extent);
    } else {
        out = slice;
        centered_fft_2d(out, g.n_per_axis, g.extent, false);
    }
}

void check_window(const SampledField& f, const SampledField& win) {
    if (f.domain != Domain::Space) throw ContractError("stft: field must be space-domain");
    if (!(win.grid == f.grid)) throw ContractError("stft: window grid mismatch");
    f.require_finite();
}

}  // namespace

PhaseField stft_raw(const SampledField& f, const SampledField& window) {
    check_window(f, window);
    const GridSpec& g = f.grid;
    const std::int64_t N = g.nodes();
    PhaseField V(g);
    V.window_id = "raw";
    CArray slice(N), row(N);
    for (std::int64_t j = 0; j < N; ++j) {
        windowed_slice(f, window, j, slice);
        slice_fft(slice, row, g);
        V.values.segment(j * N, N) = row;
    }
    return V;
}

PhaseField stft(const SampledField& f, const Window& phi) {
    PhaseField V = stft_raw(f, phi.samples);
    V.window_id = phi.id;
    return V;
}

PhaseField twisted_convolution(const PhaseField& F, const PhaseField& G) {
    if (!(F.grid == G.grid)) throw ContractError("twisted_convolution: grid mismatch");
    const GridSpec& g = F.grid;
    const int n = g.n_per_axis;
    const std::int64_t N = g.nodes();

    // ℱ₂⁻¹ along the ξ index of each x-row
    auto partial_inverse = [&](const PhaseField& P) {
        CMatrix A(N, N);  // A(x, y)
        CArray row(N), out(N);
        for (std::int64_t x = 0; x < N; ++x) {
            row = P.values.segment(x * N, N);
            if (g.d == 1)
                centered_ifft(row, out, g.extent);
            else {
                out = row;
                centered_fft_2d(out, n, g.extent, true);
            }
            for (std::int64_t y = 0; y < N; ++y) A(x, y) = out[y];
        }
        return A;
    };

    // index of the coordinate difference u_a − u_b on the same grid:
    // (a−b)·step lives at node a−b+n/2 (periodically wrapped)
    auto diff_flat = [&](std::int64_t a, std::int64_t b) -> std::int64_t {
        if (g.d == 1) return wrap(static_cast<int>(a - b) + n / 2, n);
        const int a1 = static_cast<int>(a / n), a2 = static_cast<int>(a % n);
        const int b1 = static_cast<int>(b / n), b2 = static_cast<int>(b % n);
        return std::int64_t(wrap(a1 - b1 + n / 2, n)) * n + wrap(a2 - b2 + n / 2, n);
    };

    CMatrix A2 = partial_inverse(F);
    CMatrix B2 = partial_inverse(G);

    // kernels K(y,z) = (ℱ₂⁻¹P)(y−z, y), composed with quadrature weight h^d
    CMatrix KA(N, N), KB(N, N);
    for (std::int64_t y = 0; y < N; ++y)
        for (std::int64_t z = 0; z < N; ++z) {
            KA(y, z) = A2(diff_flat(y, z), y);
            KB(y, z) = B2(diff_flat(y, z), y);
        }
    const Real hq = std::pow(g.step(), g.d);
    CMatrix KC = hq * (KA * KB);

    PhaseField C(g);
    C.window_id = F.window_id;
    CArray row(N), out(N);
    for (std::int64_t x = 0; x < N; ++x) {
        for (std::int64_t y = 0; y < N; ++y) row[y] = KC(y, diff_flat(y, x));
        if (g.d == 1)
            centered_fft(row, out, g.extent);
        else {
            out = row;
            centered_fft_2d(out, n, g.extent, false);
        }
        C.values.segment(x * N, N) = out;
    }
    return C;
}

Real modulation_norm(const SampledField& f, const Window& phi, const Weight& w,
                     const MixedNormSpec& spec) {
    return mixed_norm(stft(f, phi), spec, w);
}

Real fourier_bf_norm(const SampledField& f, const Weight& w, const MixedNormSpec& spec_1d) {
    if (f.domain != Domain::Space) throw ContractError("fourier_bf_norm: field must be space-domain");
    SampledField fh = fourier(f);
    const GridSpec& g = f.grid;
    const int n = g.n_per_axis;
    const Real dxi = g.dual_step();
    auto weight_at = [&](Real xi1, Real xi2) { return w.eval2(0.0, 0.0, xi1, xi2); };

    if (g.d == 1) {
        if (spec_1d.p == kInf) {
            Real mx = 0.0;
            for (int k = 0; k < n; ++k)
                mx = std::max(mx, std::abs(fh.values[k]) * weight_at(g.dual_node(k), 0.0));
            return mx;
        }
        Real acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += dxi * std::pow(std::abs(fh.values[k]) * weight_at(g.dual_node(k), 0.0), spec_1d.p);
        return std::pow(acc, 1.0 / spec_1d.p);
    }

    // d=2: axis 2 inner with p, axis 1 outer with q
    Real outer = 0.0;
    for (int k1 = 0; k1 < n; ++k1) {
        Real inner = 0.0;
        for (int k2 = 0; k2 < n; ++k2) {
            const Real v = std::abs(fh.values[fh.idx(k1, k2)]) *
                           weight_at(g.dual_node(k1), g.dual_node(k2));
            if (spec_1d.p == kInf)
                inner = std::max(inner, v);
            else
                inner += dxi * std::pow(v, spec_1d.p);
        }
        const Real iv = spec_1d.p == kInf ? inner : std::pow(inner, 1.0 / spec_1d.p);
        if (spec_1d.q == kInf)
            outer = std::max(outer, iv);
        else
            outer += dxi * std::pow(iv, spec_1d.q);
    }
    return spec_1d.q == kInf ? outer : std::pow(outer, 1.0 / spec_1d.q);
}

MembershipVerdict verdict_from_annuli(const std::vector<Real>& nu) {
    MembershipVerdict v;
    v.annulus_norms = nu;
    const int K = static_cast<int>(nu.size()) - 1;
    Real mx = 0.0;
    for (Real x : nu) mx = std::max(mx, x);
    if (mx <= 0.0) {
        v.degenerate = true;
        v.member = true;
        v.growth_exponent = kDegenerateExponent;
        v.tail_ratio = 0.0;
        return v;
    }
    const Real floor_val = 1e-15 * mx;
    // least squares slope of log2(nu_k) against k
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = K + 1;
    for (int k = 0; k <= K; ++k) {
        const Real y = std::log2(std::max(nu[k], floor_val));
        sx += k;
        sy += y;
        sxx += Real(k) * k;
        sxy += k * y;
    }
    v.growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    v.tail_ratio = nu[K - 1] > 0.0 ? nu[K] / nu[K - 1] : (nu[K] > 0.0 ? kInf : 0.0);
    v.member = v.growth_exponent < kMembershipSlopeThreshold || v.tail_ratio < kTailRatioThreshold;
    return v;
}

namespace {

/// Annulus index of a phase node, or -1 outside the analysis window.
inline int annulus_of(Real r2, Real rho0, int K) {
    if (r2 <= 0.0) return -1;
    const Real r = std::sqrt(r2);
    if (r < 0.5 * rho0) return -1;
    const int k = static_cast<int>(std::floor(std::log2(r / rho0))) + 1;
    return (k >= 0 && k <= K) ? k : -1;
}

}  // namespace

std::vector<MembershipVerdict> estimate_membership_multi(const SampledField& f, const Window& phi,
                                                         const std::vector<Weight>& ws,
                                                         const MixedNormSpec& spec,
                                                         const MembershipParams& params) {
    if (f.domain != Domain::Space) throw ContractError("estimate_membership: space-domain field required");
    if (!(phi.grid() == f.grid)) throw ContractError("estimate_membership: window grid mismatch");
    if (ws.empty()) throw ContractError("estimate_membership: no weights");
    const GridSpec& g = f.grid;
    const std::int64_t N = g.nodes();
    const Real rho0 = params.rho0 > 0.0 ? params.rho0 : g.extent / 8.0;
    const int K = params.K;
    const size_t W = ws.size();
    std::vector<WeightTables> tables;
    tables.reserve(W);
    for (const auto& w : ws) tables.emplace_back(w, g);
    const Real wq_x = std::pow(g.step(), g.d);
    const Real wq_xi = std::pow(g.dual_step(), g.d);

    const bool inner_is_x = spec.order == MixedNormSpec::Order::InnerXOuterXi;
    const Real inner_quad = inner_is_x ? wq_x : wq_xi;
    const Real outer_quad = inner_is_x ? wq_xi : wq_x;

    // inner accumulators per weight: (annulus, outer index); for the inner-ξ
    // order the outer index is x so only the running slice is live
    std::vector<std::vector<RArray>> inner(W, std::vector<RArray>(K + 1));
    for (auto& per_w : inner)
        for (auto& a : per_w) a = RArray::Zero(inner_is_x ? N : 1);
    std::vector<std::vector<Real>> outer(W, std::vector<Real>(K + 1, 0.0));

    auto node_r2 = [&](std::int64_t j, std::int64_t k) {
        switch (params.geometry) {
            case AnnulusGeometry::FreqOnly: return tables[0].radius2_xi(k);
            case AnnulusGeometry::SpaceOnly: return tables[0].radius2_x(j);
            default: return tables[0].radius2(j, k);
        }
    };
    CArray slice(N), row(N);
    std::vector<Real> acc((K + 1) * W);
    for (std::int64_t j = 0; j < N; ++j) {
        windowed_slice(f, phi.samples, j, slice);
        slice_fft(slice, row, g);
        if (inner_is_x) {
            for (std::int64_t k = 0; k < N; ++k) {
                const int a = annulus_of(node_r2(j, k), rho0, K);
                if (a < 0) continue;
                const Real amp = std::abs(row[k]);
                for (size_t wi = 0; wi < W; ++wi) {
                    const Real v = amp * tables[wi].eval(j, k);
                    if (spec.p == kInf)
                        inner[wi][a][k] = std::max(inner[wi][a][k], v);
                    else
                        inner[wi][a][k] += inner_quad * std::pow(v, spec.p);
                }
            }
        } else {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::int64_t k = 0; k < N; ++k) {
                const int a = annulus_of(node_r2(j, k), rho0, K);
                if (a < 0) continue;
                const Real amp = std::abs(row[k]);
                for (size_t wi = 0; wi < W; ++wi) {
                    const Real v = amp * tables[wi].eval(j, k);
                    Real& slot = acc[wi * (K + 1) + a];
                    if (spec.p == kInf)
                        slot = std::max(slot, v);
                    else
                        slot += inner_quad * std::pow(v, spec.p);
                }
            }
            for (size_t wi = 0; wi < W; ++wi)
                for (int a = 0; a <= K; ++a) {
                    const Real raw = acc[wi * (K + 1) + a];
                    const Real iv = spec.p == kInf ? raw : std::pow(raw, 1.0 / spec.p);
                    if (spec.q == kInf)
                        outer[wi][a] = std::max(outer[wi][a], iv);
                    else
                        outer[wi][a] += outer_quad * std::pow(iv, spec.q);
                }
        }
    }

    std::vector<MembershipVerdict> verdicts(W);
    for (size_t wi = 0; wi < W; ++wi) {
        std::vector<Real> nu(K + 1, 0.0);
        if (inner_is_x) {
            for (int a = 0; a <= K; ++a) {
                Real o = 0.0;
                for (std::int64_t k = 0; k < N; ++k) {
                    const Real iv =
                        spec.p == kInf ? inner[wi][a][k] : std::pow(inner[wi][a][k], 1.0 / spec.p);
                    if (spec.q == kInf)
                        o = std::max(o, iv);
                    else
                        o += outer_quad * std::pow(iv, spec.q);
                }
                nu[a] = spec.q == kInf ? o : std::pow(o, 1.0 / spec.q);
            }
        } else {
            for (int a = 0; a <= K; ++a)
                nu[a] = spec.q == kInf ? outer[wi][a] : std::pow(outer[wi][a], 1.0 / spec.q);
        }
        verdicts[wi] = verdict_from_annuli(nu);
    }
    return verdicts;
}

MembershipVerdict estimate_membership(const SampledField& f, const Window& phi, const Weight& w,
                                      const MixedNormSpec& spec, const MembershipParams& params) {
    return estimate_membership_multi(f, phi, {w}, spec, params)[0];
}

MembershipVerdict fourier_bf_membership(const SampledField& f, const Weight& w,
                                        const MixedNormSpec& spec_1d,
                                        const MembershipParams& params) {
    if (f.domain != Domain::Space)
        throw ContractError("fourier_bf_membership: space-domain field required");
    SampledField fh = fourier(f);
    const GridSpec& g = f.grid;
    const int n = g.n_per_axis;
    const Real rho0 = params.rho0 > 0.0 ? params.rho0 : g.extent / 8.0;
    const int K = params.K;
    const Real dq = std::pow(g.dual_step(), g.d);

    std::vector<Real> acc(K + 1, 0.0);
    auto add = [&](Real xi1, Real xi2, Real amp) {
        const int a = annulus_of(xi1 * xi1 + xi2 * xi2, rho0, K);
        if (a < 0) return;
        const Real v = amp * w.eval2(0.0, 0.0, xi1, xi2);
        if (spec_1d.p == kInf)
            acc[a] = std::max(acc[a], v);
        else
            acc[a] += dq * std::pow(v, spec_1d.p);
    };
    if (g.d == 1) {
        for (int k = 0; k < n; ++k) add(g.dual_node(k), 0.0, std::abs(fh.values[k]));
    } else {
        std::int64_t p = 0;
        for (int k1 = 0; k1 < n; ++k1)
            for (int k2 = 0; k2 < n; ++k2, ++p)
                add(g.dual_node(k1), g.dual_node(k2), std::abs(fh.values[p]));
    }
    std::vector<Real> nu(K + 1, 0.0);
    for (int a = 0; a <= K; ++a)
        nu[a] = spec_1d.p == kInf ? acc[a] : std::pow(acc[a], 1.0 / spec_1d.p);
    return verdict_from_annuli(nu);
}

}  // namespace wflab
