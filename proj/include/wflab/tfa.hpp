#pragma once

#include <vector>

#include "wflab/phase_field.hpp"
#include "wflab/window.hpp"

namespace wflab {

/// Short-time Fourier transform
///   V_φf(x,ξ) = (2π)^{-d/2} h^d Σ_y f(y) conj(φ(y−x)) e^{-i⟨y,ξ⟩},
/// one FFT per x-slice, window shifted with periodic wrap.
PhaseField stft(const SampledField& f, const Window& phi);

/// Same transform with an arbitrary finite window field (not necessarily
/// normalized); used by the STFT algebra identities.
PhaseField stft_raw(const SampledField& f, const SampledField& window);

/// Discrete twisted convolution
///   (F ⍟ G)(x,ξ) = (2π)^{-d/2} ∬ F(x−y,ξ−η) G(y,η) e^{-i⟨x−y,η⟩} dy dη
/// with periodic wrap and quadrature weight h^d (π/L)^d, computed through the
/// kernel correspondence (twisted convolution = operator composition).
PhaseField twisted_convolution(const PhaseField& F, const PhaseField& G);

/// ‖V_φ f · ω‖ in the declared mixed-norm order.
Real modulation_norm(const SampledField& f, const Window& phi, const Weight& w,
                     const MixedNormSpec& spec);

/// Weighted quadrature norm of f̂ · ω(x₀,·) over the frequency grid
/// (x₀ = 0); d=2 iterates axis 2 with p, axis 1 with q.
Real fourier_bf_norm(const SampledField& f, const Weight& w, const MixedNormSpec& spec_1d);

/// Which radius the dyadic annuli measure: the joint phase-space radius, or
/// the single slot that carries the regime's asymptotics (ψ-localized fields
/// are x-compact, e-localized ones ξ-compact).
enum class AnnulusGeometry { Joint, FreqOnly, SpaceOnly };

struct MembershipParams {
    Real rho0 = 0.0;  // 0 → extent/8
    int K = 3;
    AnnulusGeometry geometry = AnnulusGeometry::Joint;
};

inline constexpr Real kMembershipSlopeThreshold = -0.5;
inline constexpr Real kTailRatioThreshold = 0.75;
inline constexpr Real kDegenerateExponent = -9e99;

struct MembershipVerdict {
    Real growth_exponent = kDegenerateExponent;
    Real tail_ratio = 0.0;
    bool member = true;
    bool degenerate = false;
    std::vector<Real> annulus_norms;
};

/// Verdict from dyadic-annulus norms: least-squares slope of log₂ ν_k vs k
/// (annuli floored at 1e−15·max), member iff slope < −0.5 or tail ratio
/// ν_K/ν_{K−1} < 0.75.
MembershipVerdict verdict_from_annuli(const std::vector<Real>& nu);

/// Discrete stand-in for "f ∈ M(ω,B)": weighted mixed norms over the dyadic
/// phase-space annuli {2^{k−1}ρ₀ ≤ |(x,ξ)| < 2^kρ₀}, k = 0..K, regressed as
/// in verdict_from_annuli. Streams the STFT slice by slice.
MembershipVerdict estimate_membership(const SampledField& f, const Window& phi, const Weight& w,
                                      const MixedNormSpec& spec, const MembershipParams& params = {});

/// Same STFT pass evaluated against several weights at once.
std::vector<MembershipVerdict> estimate_membership_multi(const SampledField& f, const Window& phi,
                                                         const std::vector<Weight>& ws,
                                                         const MixedNormSpec& spec,
                                                         const MembershipParams& params = {});

/// Frequency-side analogue on dyadic shells of the frequency grid, used by
/// the local-equivalence check for compactly supported fields.
MembershipVerdict fourier_bf_membership(const SampledField& f, const Weight& w,
                                        const MixedNormSpec& spec_1d,
                                        const MembershipParams& params = {});

}  // namespace wflab
