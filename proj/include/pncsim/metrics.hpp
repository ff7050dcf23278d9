#pragma once

#include <cstddef>
#include <span>

#include "pncsim/channel.hpp"
#include "pncsim/relay.hpp"
#include "pncsim/signal.hpp"

namespace pncsim {

/// Result of splitting y into a component correlated with x and an
/// uncorrelated residual: y = gain * (x + e_u).
struct UncorrelatedDecomposition {
    ComplexSample gain;   // E[x* y] / E|x|^2
    double msue = 0.0;    // E|e_u|^2
    double gsnr = 0.0;    // E|x|^2 / MSUE; +inf when msue == 0
    std::size_t n_samples = 0;
};

/// Empirical uncorrelated-error decomposition over paired sample sequences.
/// Throws on length mismatch, empty input, or vanishing empirical correlation.
UncorrelatedDecomposition decompose(std::span<const ComplexSample> x,
                                    std::span<const ComplexSample> y);

/// Streaming form of decompose: accumulate paired samples, then reduce.
/// Fixed accumulation order keeps results deterministic.
class DecompAccumulator {
  public:
    void add(ComplexSample x, ComplexSample y);
    UncorrelatedDecomposition result() const;  // same error conditions as decompose

  private:
    std::complex<long double> corr_{};
    long double px_ = 0.0L;
    long double py_ = 0.0L;
    std::size_t n_ = 0;
};

/// MAP relay error-class probabilities: imaginary part only wrong (eps0),
/// real part only (eps1), both (eps2).
struct EpsilonTriple {
    double eps0 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
};

/// Estimates the epsilon triple by running n uplink draws through the MAP
/// relay and comparing against the true XOR symbol.
EpsilonTriple epsilon_monte_carlo(const ChannelState& cs, std::size_t n,
                                  RandomStream& rng);

/// Closed-form MAP relay MSUE: 2/(1 - eps0 - eps1 - 2*eps2)^2 - 2.
/// Throws when the correlation factor is nonpositive.
double msue_map_closed(const EpsilonTriple& eps);

/// The linear PNCI relay's uncorrelated error is exactly the channel noise.
double msue_linear_pnci();

/// Estimated expectations feeding the MMSE closed-form MSUE.
struct MmseAnalyticTerms {
    ComplexSample lambda;        // the lambda of the closed form
    double second_moment = 0.0;  // E|posterior mean|^2
};

/// Monte Carlo estimation of the terms over n posterior-mean samples of the
/// matching scheme. Scheme must be MMSE_PNCF or MMSE_PNCI.
MmseAnalyticTerms estimate_mmse_terms(SchemeId scheme, const ChannelState& cs,
                                      std::size_t n, RandomStream& rng);

/// Closed-form MSUE for the MMSE schemes:
/// P*(2*Re(lambda) + 1) - |lambda* + 1|^2 * E|posterior mean|^2,
/// with P = 2 for PNCF and P = 2(|h13|^2 + |h23|^2) for PNCI.
double msue_mmse_closed(const MmseAnalyticTerms& terms, SchemeId scheme,
                        const ChannelState& cs);

/// Destination GSNR predicted from the relay MSUE, PNCF processing.
double gsnr_dest_pncf(double msue_relay, ComplexSample h_down,
                      NoiseConvention nc = NoiseConvention::Resolved);

/// Destination GSNR predicted from the relay MSUE, PNCI processing.
double gsnr_dest_pnci(double msue_relay, ComplexSample h_down,
                      ComplexSample h_partner_up, const ChannelState& cs,
                      NoiseConvention nc = NoiseConvention::Resolved);

/// Relay-side GSNR: signal power of the scheme's target over its MSUE.
double relay_gsnr(double msue_relay, SchemeId scheme, const ChannelState& cs);

}  // namespace pncsim
