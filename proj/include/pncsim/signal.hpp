#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace pncsim {

/// Complex baseband value. Both components must stay finite.
using ComplexSample = std::complex<double>;

/// One QPSK symbol worth of uncoded information.
struct BitPair {
    int b_re = 0;  // drives the real component
    int b_im = 0;  // drives the imaginary component

    friend bool operator==(const BitPair&, const BitPair&) = default;
};

/// A ComplexSample constrained to {+-1 +-j}. |value|^2 == 2 always.
class QpskSymbol {
  public:
    QpskSymbol() : value_(1.0, 1.0) {}
    QpskSymbol(double re, double im);
    explicit QpskSymbol(ComplexSample v) : QpskSymbol(v.real(), v.imag()) {}

    ComplexSample value() const { return value_; }
    double re() const { return value_.real(); }
    double im() const { return value_.imag(); }

    friend bool operator==(const QpskSymbol&, const QpskSymbol&) = default;

    /// The four symbols in the canonical (tie-breaking) order.
    static const std::array<QpskSymbol, 4>& alphabet();

  private:
    ComplexSample value_;
};

QpskSymbol modulate(BitPair b);
BitPair demodulate(const QpskSymbol& s);

/// Componentwise sign product; the GF(2) network code on QPSK symbols.
QpskSymbol xor_code(const QpskSymbol& s1, const QpskSymbol& s2);

/// Circular complex Gaussian density with variance sigma2 per real dimension:
/// (1 / 2*pi*sigma2) * exp(-|mu|^2 / (2*sigma2)). Throws on sigma2 <= 0.
double gaussian_pdf(ComplexSample mu, double sigma2);

/// Deterministic seeded generator. Equal (seed, label) gives equal draw
/// sequences; distinct labels give independent substreams. Not shareable
/// between concurrent tasks -- derive one substream per task.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::string_view label);

    /// Substream keyed by an extra label component, independent of how many
    /// draws have been made on this stream.
    RandomStream substream(std::string_view label) const;

    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    double normal();   // standard normal, polar method

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }

  private:
    std::uint64_t seed_;
    std::string label_;
    std::uint64_t state_[4];  // xoshiro256** state
};

QpskSymbol draw_symbol(RandomStream& rng);

/// Complex Gaussian noise, unit variance per real dimension (E|n|^2 = 2).
ComplexSample draw_noise(RandomStream& rng);

}  // namespace pncsim
