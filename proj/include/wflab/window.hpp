#pragma once

#include <string>

#include "wflab/grid.hpp"

namespace wflab {

/// L²-normalized analysis window sampled on a grid.
struct Window {
    std::string id;
    SampledField samples;       // space domain, centered at x = 0
    bool tight_support = true;  // |φ| < 1e-12 everywhere at distance >= L/2

    const GridSpec& grid() const { return samples.grid; }
};

/// φ(y) = (π std²)^{-d/4} e^{-|y|²/(2 std²)}, renormalized on the grid.
Window gaussian_window(const GridSpec& grid, Real std_dev = 1.0);

/// Tensor cos² (Hann) bump supported in |y_i| <= support_radius.
Window hann_window(const GridSpec& grid, Real support_radius);

/// Any finite field, renormalized; rejects windows that fail the decay
/// contract (|φ| > 1e-3 at distance >= L/2 from the center).
Window custom_window(const SampledField& samples, const std::string& id = "custom");

}  // namespace wflab
