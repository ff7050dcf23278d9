#include "pncsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace pncsim {

ChannelState::ChannelState(ComplexSample h13_, ComplexSample h23_,
                           ComplexSample h31_, ComplexSample h32_)
    : h13(h13_), h23(h23_), h31(h31_), h32(h32_) {
    if (h13 == ComplexSample{} || h23 == ComplexSample{} ||
        h31 == ComplexSample{} || h32 == ComplexSample{}) {
        throw std::invalid_argument("ChannelState: coefficients must be nonzero");
    }
}

ChannelState OperatingPoint::realize() const {
    return ChannelState(snr_to_coeff(uplink_snr_db, phase13),
                        snr_to_coeff(uplink_snr_db, phase23),
                        snr_to_coeff(downlink_snr_db, phase31),
                        snr_to_coeff(downlink_snr_db, phase32));
}

ComplexSample snr_to_coeff(double snr_db, double phase_rad) {
    return std::polar(std::pow(10.0, snr_db / 20.0), phase_rad);
}

ComplexSample uplink_noiseless(const QpskSymbol& x1, const QpskSymbol& x2,
                               const ChannelState& cs) {
    return cs.h13 * x1.value() + cs.h23 * x2.value();
}

ComplexSample uplink(const QpskSymbol& x1, const QpskSymbol& x2,
                     const ChannelState& cs, RandomStream& rng) {
    return uplink_noiseless(x1, x2, cs) + draw_noise(rng);
}

ComplexSample downlink_noiseless(ComplexSample x3, ComplexSample h) {
    return h * x3;
}

ComplexSample downlink(ComplexSample x3, ComplexSample h, RandomStream& rng) {
    return h * x3 + draw_noise(rng);
}

}  // namespace pncsim
