#include "pncsim/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace pncsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64, used to expand (seed, label) into generator state.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

QpskSymbol::QpskSymbol(double re, double im) : value_(re, im) {
    if ((re != 1.0 && re != -1.0) || (im != 1.0 && im != -1.0)) {
        throw std::invalid_argument("QpskSymbol components must be +-1");
    }
}

const std::array<QpskSymbol, 4>& QpskSymbol::alphabet() {
    static const std::array<QpskSymbol, 4> a = {
        QpskSymbol(1.0, 1.0), QpskSymbol(1.0, -1.0),
        QpskSymbol(-1.0, 1.0), QpskSymbol(-1.0, -1.0)};
    return a;
}

QpskSymbol modulate(BitPair b) {
    return QpskSymbol(1.0 - 2.0 * b.b_re, 1.0 - 2.0 * b.b_im);
}

BitPair demodulate(const QpskSymbol& s) {
    return BitPair{s.re() < 0.0 ? 1 : 0, s.im() < 0.0 ? 1 : 0};
}

QpskSymbol xor_code(const QpskSymbol& s1, const QpskSymbol& s2) {
    return QpskSymbol(s1.re() * s2.re(), s1.im() * s2.im());
}

double gaussian_pdf(ComplexSample mu, double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("gaussian_pdf: sigma2 must be positive");
    }
    const double m2 = std::norm(mu);
    return std::exp(-m2 / (2.0 * sigma2)) / (kTwoPi * sigma2);
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label) {
    std::uint64_t x = seed ^ rotl(fnv1a(label_), 17);
    for (auto& s : state_) s = splitmix64(x);
}

RandomStream RandomStream::substream(std::string_view label) const {
    std::string combined = label_;
    combined += '/';
    combined += label;
    return RandomStream(seed_, combined);
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    // Marsaglia polar method; one variate per accepted pair, spare discarded
    // to keep the draw count per call fixed at "until acceptance".
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

QpskSymbol draw_symbol(RandomStream& rng) {
    return QpskSymbol::alphabet()[rng.next_u64() >> 62];
}

ComplexSample draw_noise(RandomStream& rng) {
    const double re = rng.normal();
    const double im = rng.normal();
    return ComplexSample(re, im);
}

}  // namespace pncsim
