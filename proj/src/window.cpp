#include "wflab/window.hpp"

#include <cmath>
#include <sstream>

namespace wflab {

namespace {

Window finalize(SampledField f, const std::string& id) {
    f.require_finite();
    const Real nrm = l2_norm(f);
    if (nrm <= 0.0) throw ContractError("window: zero field");
    f.values /= nrm;

    const GridSpec& g = f.grid;
    const int n = g.n_per_axis;
    const Real half = g.extent / 2.0;
    Real far_peak = 0.0;
    if (g.d == 1) {
        for (int i = 0; i < n; ++i)
            if (std::abs(g.node(i)) >= half) far_peak = std::max(far_peak, std::abs(f.values[i]));
    } else {
        std::int64_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p)
                if (std::hypot(g.node(i), g.node(j)) >= half)
                    far_peak = std::max(far_peak, std::abs(f.values[p]));
    }
    if (far_peak > 1e-3) throw ContractError("window '" + id + "' wider than grid");

    Window w;
    w.id = id;
    w.samples = std::move(f);
    w.tight_support = far_peak < 1e-12;
    return w;
}

}  // namespace

Window gaussian_window(const GridSpec& grid, Real std_dev) {
    if (!(std_dev > 0.0)) throw ContractError("gaussian_window: std must be positive");
    const Real c = std::pow(kPi * std_dev * std_dev, -0.25);
    SampledField f = make_field(grid, [&](const std::array<Real, 2>& x) {
        Real v = 1.0;
        for (int a = 0; a < grid.d; ++a) v *= c * std::exp(-x[a] * x[a] / (2.0 * std_dev * std_dev));
        return Complex(v, 0.0);
    });
    std::ostringstream id;
    id << "gaussian(std=" << std_dev << ")";
    return finalize(std::move(f), id.str());
}

Window hann_window(const GridSpec& grid, Real support_radius) {
    if (!(support_radius > 0.0) || support_radius >= grid.extent)
        throw ContractError("hann_window: radius must be in (0, L)");
    SampledField f = make_field(grid, [&](const std::array<Real, 2>& x) {
        Real v = 1.0;
        for (int a = 0; a < grid.d; ++a) {
            if (std::abs(x[a]) >= support_radius) return Complex(0.0, 0.0);
            const Real c = std::cos(kPi * x[a] / (2.0 * support_radius));
            v *= c * c;
        }
        return Complex(v, 0.0);
    });
    std::ostringstream id;
    id << "hann(radius=" << support_radius << ")";
    return finalize(std::move(f), id.str());
}

Window custom_window(const SampledField& samples, const std::string& id) {
    if (samples.domain != Domain::Space) throw ContractError("custom_window: space-domain field required");
    return finalize(samples, id);
}

}  // namespace wflab
