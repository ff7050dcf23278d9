#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pncsim/channel.hpp"
#include "pncsim/signal.hpp"

namespace pncsim {

/// One received uplink sample together with the uplink coefficients.
struct RelayInput {
    ComplexSample y3;
    ComplexSample h13;
    ComplexSample h23;
};

enum class SchemeId { MAP_PNCF, MMSE_PNCF, LINEAR_PNCI, MMSE_PNCI };

bool is_pncf(SchemeId s);
std::string_view scheme_name(SchemeId s);

/// "+1" vs "+2" in the linear-MMSE denominator: Resolved uses the noise
/// power E|n|^2 = 2 implied by the unit-variance-per-dimension convention;
/// PaperPrinted keeps the literal printed constant 1 for comparison runs.
enum class NoiseConvention { Resolved, PaperPrinted };

double noise_power(NoiseConvention nc);

/// A relayed packet plus the realized power-normalization gain.
struct RelayOutput {
    std::vector<ComplexSample> symbols;
    double norm_gain = 1.0;
    SchemeId scheme = SchemeId::MAP_PNCF;
};

/// Likelihood of y3 under the hypothesis x1 = a+jb, x2 = c+jd.
double pair_likelihood(const RelayInput& in, int a, int b, int c, int d);

/// MAP decision on the XOR symbol: argmax over the four XOR classes of the
/// summed pair likelihoods. Ties break by alphabet order.
QpskSymbol map_pncf(const RelayInput& in);

/// Threshold form of the MAP decision for h13 = h23 = h0 real.
QpskSymbol map_pncf_sync(ComplexSample y3, double h0);

/// Exact conditional expectation of x1 (+) x2 given y3. Components in [-1,1].
ComplexSample mmse_pncf_posterior_mean(const RelayInput& in);

/// Closed form of the PNCF posterior mean for h13 = h23 = h0 real; equals
/// mmse_pncf_posterior_mean / 2 at the same inputs.
ComplexSample mmse_pncf_sync(ComplexSample y3, double h0);

/// Scaled pass-through of y3 (the amplify-and-forward relay).
ComplexSample linear_pnci(const RelayInput& in,
                          NoiseConvention nc = NoiseConvention::Resolved);

/// Exact conditional expectation of h13*x1 + h23*x2 given y3.
ComplexSample mmse_pnci_posterior_mean(const RelayInput& in);

/// Per-component 3-point mixture form of the PNCI posterior mean for
/// h13 = h23 = h0 real; proportional to mmse_pnci_posterior_mean.
ComplexSample mmse_pnci_sync(ComplexSample y3, double h0);

/// Scales a packet to mean power exactly 2; returns the applied gain.
/// Throws on an empty or all-zero packet.
std::pair<std::vector<ComplexSample>, double> normalize_packet(
    std::span<const ComplexSample> raw);

/// Applies one scheme to a whole received packet and normalizes the output.
RelayOutput relay_map(SchemeId scheme, std::span<const ComplexSample> packet_y3,
                      const ChannelState& cs);

}  // namespace pncsim
