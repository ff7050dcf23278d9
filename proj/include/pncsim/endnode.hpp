#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "pncsim/relay.hpp"
#include "pncsim/signal.hpp"

namespace pncsim {

/// Everything an end node knows besides the received sample: its own symbol,
/// the channel coefficients, and the relay's normalization gain.
struct SelfInfo {
    QpskSymbol own_symbol;
    ComplexSample h_down;      // h_3i
    ComplexSample h_self_up;   // h_i3
    ComplexSample h_partner_up;  // h_i'3
    double relay_gain = 1.0;

    SelfInfo(QpskSymbol own, ComplexSample hd, ComplexSample hsu,
             ComplexSample hpu, double gain);
};

struct DetectionResult {
    QpskSymbol partner_symbol;
    /// The processed sample with the partner symbol linearly present,
    /// retained for GSNR measurement.
    ComplexSample processed_sample;
};

/// PNCF destination: coherent detection of the relayed XOR symbol, then XOR
/// with the node's own symbol. The processed sample is the scaled coherent
/// sample XOR-demapped against the own symbol, componentwise.
DetectionResult detect_partner_pncf(ComplexSample y, const SelfInfo& info);

/// PNCI destination: cancel the self term, then nearest-hypothesis detection
/// of the partner symbol. The processed sample is the cancelled signal.
DetectionResult detect_partner_pnci(ComplexSample y, const SelfInfo& info);

/// Componentwise bit comparison after demodulation. bits = 2 * length.
std::pair<std::size_t, std::size_t> count_bit_errors(
    std::span<const QpskSymbol> estimates, std::span<const QpskSymbol> truth);

}  // namespace pncsim
