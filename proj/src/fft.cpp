#include "wflab/fft.hpp"

#include <map>
#include <memory>

#include <unsupported/Eigen/FFT>

namespace wflab {

namespace {

Eigen::FFT<Real>& plan_for(int n) {
    thread_local std::map<int, std::unique_ptr<Eigen::FFT<Real>>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Eigen::FFT<Real>>();
    return *slot;
}

}  // namespace

void dft(const CArray& in, CArray& out) {
    const int n = static_cast<int>(in.size());
    out.resize(n);
    Eigen::VectorXcd tmp_in = in.matrix();
    Eigen::VectorXcd tmp_out(n);
    plan_for(n).fwd(tmp_out, tmp_in);
    out = tmp_out.array();
}

void idft(const CArray& in, CArray& out) {
    const int n = static_cast<int>(in.size());
    out.resize(n);
    Eigen::VectorXcd tmp_in = in.matrix();
    Eigen::VectorXcd tmp_out(n);
    plan_for(n).inv(tmp_out, tmp_in);
    out = tmp_out.array();
}

// x_j ξ_k = nπ/2 - πj - πk + 2πjk/n on the centered grids, so the centered
// transform is an alternating-sign conjugation of the plain DFT.
void centered_fft(const CArray& in, CArray& out, Real extent) {
    const int n = static_cast<int>(in.size());
    if (n % 4 != 0) throw ContractError("centered_fft: n must be a multiple of 4");
    const Real h = 2.0 * extent / n;
    CArray tmp(n);
    for (int j = 0; j < n; ++j) tmp[j] = (j & 1) ? -in[j] : in[j];
    CArray freq;
    dft(tmp, freq);
    const Real scale = h / std::sqrt(2.0 * kPi);
    out.resize(n);
    for (int k = 0; k < n; ++k) out[k] = ((k & 1) ? -scale : scale) * freq[k];
}

void centered_ifft(const CArray& in, CArray& out, Real extent) {
    const int n = static_cast<int>(in.size());
    if (n % 4 != 0) throw ContractError("centered_ifft: n must be a multiple of 4");
    const Real dxi = kPi / extent;
    CArray tmp(n);
    for (int k = 0; k < n; ++k) tmp[k] = (k & 1) ? -in[k] : in[k];
    CArray space;
    idft(tmp, space);
    const Real scale = n * dxi / std::sqrt(2.0 * kPi);
    out.resize(n);
    for (int j = 0; j < n; ++j) out[j] = ((j & 1) ? -scale : scale) * space[j];
}

void centered_fft_2d(CArray& data, int n, Real extent, bool inverse) {
    CArray row(n), out(n);
    // axis 1 (contiguous rows)
    for (int i = 0; i < n; ++i) {
        row = data.segment(std::int64_t(i) * n, n);
        inverse ? centered_ifft(row, out, extent) : centered_fft(row, out, extent);
        data.segment(std::int64_t(i) * n, n) = out;
    }
    // axis 0 (strided columns)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) row[i] = data[std::int64_t(i) * n + j];
        inverse ? centered_ifft(row, out, extent) : centered_fft(row, out, extent);
        for (int i = 0; i < n; ++i) data[std::int64_t(i) * n + j] = out[i];
    }
}

}  // namespace wflab
