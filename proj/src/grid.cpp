#include "wflab/grid.hpp"

#include <cmath>

#include "wflab/fft.hpp"

namespace wflab {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(int dim, int n, Real L) : d(dim), n_per_axis(n), extent(L) {
    if (d != 1 && d != 2) throw ContractError("GridSpec: d must be 1 or 2");
    if (n_per_axis < 8 || !is_pow2(n_per_axis))
        throw ContractError("GridSpec: n_per_axis must be a power of two >= 8");
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw ContractError("GridSpec: extent must be positive and finite");
}

std::int64_t GridSpec::nodes() const {
    std::int64_t m = n_per_axis;
    return d == 1 ? m : m * m;
}

std::int64_t GridSpec::phase_nodes() const {
    const std::int64_t m = nodes();
    return m * m;
}

Real self_dual_extent(int n) { return std::sqrt(n * kPi / 2.0); }

SampledField::SampledField(const GridSpec& g, Domain dom) : grid(g), domain(dom) {
    values = CArray::Zero(dom == Domain::PhaseSpace ? g.phase_nodes() : g.nodes());
}

void SampledField::require_finite() const {
    if (!values.isFinite().all()) throw ContractError("SampledField: non-finite values");
}

SampledField fourier(const SampledField& f) {
    if (f.domain != Domain::Space) throw ContractError("fourier: field must be space-domain");
    SampledField out(f.grid, Domain::Frequency);
    if (f.grid.d == 1) {
        centered_fft(f.values, out.values, f.grid.extent);
    } else {
        out.values = f.values;
        centered_fft_2d(out.values, f.grid.n_per_axis, f.grid.extent, false);
    }
    return out;
}

SampledField inverse_fourier(const SampledField& f) {
    if (f.domain != Domain::Frequency)
        throw ContractError("inverse_fourier: field must be frequency-domain");
    SampledField out(f.grid, Domain::Space);
    if (f.grid.d == 1) {
        centered_ifft(f.values, out.values, f.grid.extent);
    } else {
        out.values = f.values;
        centered_fft_2d(out.values, f.grid.n_per_axis, f.grid.extent, true);
    }
    return out;
}

Real node_weight(const SampledField& f) {
    const Real h = f.grid.step();
    const Real dxi = f.grid.dual_step();
    switch (f.domain) {
        case Domain::Space: return std::pow(h, f.grid.d);
        case Domain::Frequency: return std::pow(dxi, f.grid.d);
        case Domain::PhaseSpace: return std::pow(h * dxi, f.grid.d);
    }
    return 0.0;
}

Real l2_norm(const SampledField& f) {
    // fixed summation order: flat index ascending
    Real acc = 0.0;
    for (std::int64_t i = 0; i < f.values.size(); ++i) acc += std::norm(f.values[i]);
    return std::sqrt(node_weight(f) * acc);
}

Real essential_support_radius(const SampledField& f, Real tol) {
    if (f.domain == Domain::PhaseSpace)
        throw ContractError("essential_support_radius: space/frequency fields only");
    const int n = f.grid.n_per_axis;
    const Real total = f.values.abs2().sum();
    if (total <= 0.0) return 0.0;
    // accumulate mass per radial shell (step-sized bins)
    const int nbins = n;
    RArray mass = RArray::Zero(nbins);
    const Real h = f.domain == Domain::Space ? f.grid.step() : f.grid.dual_step();
    const Real L = f.domain == Domain::Space ? f.grid.extent : f.grid.dual_extent();
    auto coord = [&](int i) { return -L + i * h; };
    if (f.grid.d == 1) {
        for (int i = 0; i < n; ++i) {
            int b = std::min<int>(nbins - 1, static_cast<int>(std::abs(coord(i)) / h));
            mass[b] += std::norm(f.values[i]);
        }
    } else {
        std::int64_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) {
                const Real r = std::hypot(coord(i), coord(j));
                int b = std::min<int>(nbins - 1, static_cast<int>(r / h));
                mass[b] += std::norm(f.values[p]);
            }
    }
    Real outside = total;
    for (int b = 0; b < nbins; ++b) {
        outside -= mass[b];
        if (outside <= tol * tol * total) return (b + 1) * h;
    }
    return nbins * h;
}

Real wrap_discontinuity(const SampledField& f) {
    if (f.domain == Domain::PhaseSpace) return 0.0;
    const int n = f.grid.n_per_axis;
    const Real peak = f.values.abs().maxCoeff();
    if (peak <= 0.0) return 0.0;
    // wrap jump measured against the largest interior neighbour jump, so
    // smooth oscillatory fields (plane waves) do not read as discontinuous
    Real wrap = 0.0, interior = 0.0;
    if (f.grid.d == 1) {
        wrap = std::abs(f.values[0] - f.values[n - 1]);
        for (int i = 0; i + 1 < n; ++i)
            interior = std::max(interior, std::abs(f.values[i + 1] - f.values[i]));
    } else {
        for (int i = 0; i < n; ++i) {
            wrap = std::max(wrap, std::abs(f.values[f.idx(i, 0)] - f.values[f.idx(i, n - 1)]));
            wrap = std::max(wrap, std::abs(f.values[f.idx(0, i)] - f.values[f.idx(n - 1, i)]));
            for (int j = 0; j + 1 < n; ++j)
                interior = std::max(interior, std::abs(f.values[f.idx(i, j + 1)] - f.values[f.idx(i, j)]));
        }
    }
    if (interior <= 1e-300) return wrap > 1e-12 * peak ? 1e9 : 0.0;
    return wrap / interior;
}

}  // namespace wflab
