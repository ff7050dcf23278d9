#include "pncsim/endnode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pncsim {

namespace {

double sign_plus(double x) { return x < 0.0 ? -1.0 : 1.0; }  // sign(0) = +1

}  // namespace

SelfInfo::SelfInfo(QpskSymbol own, ComplexSample hd, ComplexSample hsu,
                   ComplexSample hpu, double gain)
    : own_symbol(own), h_down(hd), h_self_up(hsu), h_partner_up(hpu),
      relay_gain(gain) {
    if (hd == ComplexSample{} || hsu == ComplexSample{} || hpu == ComplexSample{}) {
        throw std::invalid_argument("SelfInfo: channel coefficients must be nonzero");
    }
    if (!(gain > 0.0)) {
        throw std::invalid_argument("SelfInfo: relay_gain must be positive");
    }
}

DetectionResult detect_partner_pncf(ComplexSample y, const SelfInfo& info) {
    const ComplexSample z = y * std::conj(info.h_down);
    const QpskSymbol relayed(sign_plus(z.real()), sign_plus(z.imag()));
    DetectionResult res;
    res.partner_symbol = xor_code(relayed, info.own_symbol);
    const ComplexSample p = z / (std::norm(info.h_down) * info.relay_gain);
    // XOR-demap of the continuous sample: multiply componentwise by the own
    // symbol's signs (self-inverse), leaving the partner symbol linear in p.
    res.processed_sample = ComplexSample(p.real() * info.own_symbol.re(),
                                         p.imag() * info.own_symbol.im());
    return res;
}

DetectionResult detect_partner_pnci(ComplexSample y, const SelfInfo& info) {
    const ComplexSample scale = info.h_down * info.relay_gain;
    const ComplexSample z = y - scale * info.h_self_up * info.own_symbol.value();
    const ComplexSample partner_coeff = scale * info.h_partner_up;
    DetectionResult res;
    res.processed_sample = z;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : QpskSymbol::alphabet()) {
        const double d = std::norm(z - partner_coeff * s.value());
        if (d < best) {  // ties keep the earliest symbol
            best = d;
            res.partner_symbol = s;
        }
    }
    return res;
}

std::pair<std::size_t, std::size_t> count_bit_errors(
    std::span<const QpskSymbol> estimates, std::span<const QpskSymbol> truth) {
    if (estimates.size() != truth.size()) {
        throw std::invalid_argument("count_bit_errors: length mismatch");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const BitPair a = demodulate(estimates[i]);
        const BitPair b = demodulate(truth[i]);
        errors += static_cast<std::size_t>(a.b_re != b.b_re) +
                  static_cast<std::size_t>(a.b_im != b.b_im);
    }
    return {errors, 2 * truth.size()};
}

}  // namespace pncsim
