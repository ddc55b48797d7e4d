#pragma once

#include "wflab/types.hpp"

namespace wflab {

/// Raw DFT, F[k] = Σ_j f[j] e^{-2πi jk/n}; inverse includes the 1/n factor.
/// Plans are cached per length (thread-local).
void dft(const CArray& in, CArray& out);
void idft(const CArray& in, CArray& out);

/// Centered unitary transform between the grid [-L, L) (step h = 2L/n) and
/// its dual [-π/h, π/h) (step π/L), both in ascending node order:
///   F[k] = (2π)^{-1/2} h Σ_j f[j] e^{-i x_j ξ_k}.
/// Requires n ≡ 0 (mod 4) so the global phase e^{-inπ/2} is 1.
void centered_fft(const CArray& in, CArray& out, Real extent);
void centered_ifft(const CArray& in, CArray& out, Real extent);

/// In-place centered transform along one axis of a row-major n×n block.
void centered_fft_2d(CArray& data, int n, Real extent, bool inverse);

}  // namespace wflab
