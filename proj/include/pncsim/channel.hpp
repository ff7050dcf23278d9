#pragma once

#include "pncsim/signal.hpp"

namespace pncsim {

/// The four complex path-loss coefficients of the two-way relay channel.
/// All coefficients must be nonzero.
struct ChannelState {
    ComplexSample h13;
    ComplexSample h23;
    ComplexSample h31;
    ComplexSample h32;

    ChannelState(ComplexSample h13_, ComplexSample h23_, ComplexSample h31_,
                 ComplexSample h32_);
};

/// Per-link dB qualities and carrier phases defining one simulated point.
/// With symmetric set, |h13|=|h23| and |h31|=|h32| after realization.
struct OperatingPoint {
    double uplink_snr_db = 0.0;
    double downlink_snr_db = 0.0;
    double phase13 = 0.0;
    double phase23 = 0.0;
    double phase31 = 0.0;
    double phase32 = 0.0;
    bool symmetric = true;

    ChannelState realize() const;
};

/// h with |h| = 10^(snr_db/20) and argument phase_rad. With QPSK power 2 and
/// noise power 2, the per-link receive SNR is |h|^2 exactly.
ComplexSample snr_to_coeff(double snr_db, double phase_rad);

/// Multiple-access uplink: h13*x1 + h23*x2 + n3.
ComplexSample uplink(const QpskSymbol& x1, const QpskSymbol& x2,
                     const ChannelState& cs, RandomStream& rng);
ComplexSample uplink_noiseless(const QpskSymbol& x1, const QpskSymbol& x2,
                               const ChannelState& cs);

/// Broadcast downlink: h*x3 + n.
ComplexSample downlink(ComplexSample x3, ComplexSample h, RandomStream& rng);
ComplexSample downlink_noiseless(ComplexSample x3, ComplexSample h);

}  // namespace pncsim
