#include "pncsim/relay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pncsim {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214582;

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

double log_add_exp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// The 16 uplink hypotheses for fixed coefficients: superposed points and the
// index of the XOR class each hypothesis belongs to (alphabet order).
struct HypothesisSet {
    ComplexSample point[16];
    int xor_class[16];

    HypothesisSet(ComplexSample h13, ComplexSample h23) {
        static constexpr double sg[2] = {1.0, -1.0};
        int k = 0;
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib)
                for (int ic = 0; ic < 2; ++ic)
                    for (int id = 0; id < 2; ++id) {
                        const ComplexSample x1(sg[ia], sg[ib]);
                        const ComplexSample x2(sg[ic], sg[id]);
                        point[k] = h13 * x1 + h23 * x2;
                        const double xr = sg[ia] * sg[ic];
                        const double xi = sg[ib] * sg[id];
                        xor_class[k] = (xr < 0 ? 2 : 0) + (xi < 0 ? 1 : 0);
                        ++k;
                    }
    }

    // Likelihood weights with the max exponent factored out.
    void weights(ComplexSample y3, double w[16]) const {
        double ll[16];
        double mx = -1e300;
        for (int k = 0; k < 16; ++k) {
            ll[k] = -0.5 * std::norm(y3 - point[k]);
            mx = std::max(mx, ll[k]);
        }
        for (int k = 0; k < 16; ++k) w[k] = std::exp(ll[k] - mx);
    }
};

QpskSymbol map_decide(const HypothesisSet& hs, ComplexSample y3) {
    double w[16];
    hs.weights(y3, w);
    double cls[4] = {0, 0, 0, 0};
    for (int k = 0; k < 16; ++k) cls[hs.xor_class[k]] += w[k];
    int best = 0;
    for (int c = 1; c < 4; ++c)
        if (cls[c] > cls[best]) best = c;  // ties keep the earliest class
    return QpskSymbol::alphabet()[best];
}

ComplexSample pncf_mean(const HypothesisSet& hs, ComplexSample y3) {
    static const ComplexSample xor_val[4] = {
        {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    double w[16];
    hs.weights(y3, w);
    ComplexSample num{};
    double den = 0.0;
    for (int k = 0; k < 16; ++k) {
        num += w[k] * xor_val[hs.xor_class[k]];
        den += w[k];
    }
    return num / den;
}

ComplexSample pnci_mean(const HypothesisSet& hs, ComplexSample y3) {
    double w[16];
    hs.weights(y3, w);
    ComplexSample num{};
    double den = 0.0;
    for (int k = 0; k < 16; ++k) {
        num += w[k] * hs.point[k];
        den += w[k];
    }
    return num / den;
}

// sinh(A) / (cosh(A) + exp(B)) without overflow.
double sinh_over_cosh_plus_exp(double a, double b) {
    if (a == 0.0) return 0.0;
    const double aa = std::abs(a);
    const double ls = aa + std::log1p(-std::exp(-2.0 * aa)) - kLn2;
    const double ld = log_add_exp(log_cosh(a), b);
    return std::copysign(std::exp(ls - ld), a);
}

}  // namespace

bool is_pncf(SchemeId s) {
    return s == SchemeId::MAP_PNCF || s == SchemeId::MMSE_PNCF;
}

std::string_view scheme_name(SchemeId s) {
    switch (s) {
        case SchemeId::MAP_PNCF: return "map-pncf";
        case SchemeId::MMSE_PNCF: return "mmse-pncf";
        case SchemeId::LINEAR_PNCI: return "linear-pnci";
        case SchemeId::MMSE_PNCI: return "mmse-pnci";
    }
    return "?";
}

double noise_power(NoiseConvention nc) {
    return nc == NoiseConvention::Resolved ? 2.0 : 1.0;
}

double pair_likelihood(const RelayInput& in, int a, int b, int c, int d) {
    const ComplexSample x1(a, b);
    const ComplexSample x2(c, d);
    return gaussian_pdf(in.y3 - in.h13 * x1 - in.h23 * x2, 1.0);
}

QpskSymbol map_pncf(const RelayInput& in) {
    return map_decide(HypothesisSet(in.h13, in.h23), in.y3);
}

QpskSymbol map_pncf_sync(ComplexSample y3, double h0) {
    // sign of phi(y-2h0,1) + phi(y+2h0,1) - 2*phi(y,1), per component; the
    // common factor exp(-y^2/2 - 2h0^2) reduces it to cosh(2h0*y) vs exp(2h0^2).
    const double b = 2.0 * h0 * h0;
    const double re = log_cosh(2.0 * h0 * y3.real()) - b >= 0.0 ? 1.0 : -1.0;
    const double im = log_cosh(2.0 * h0 * y3.imag()) - b >= 0.0 ? 1.0 : -1.0;
    return QpskSymbol(re, im);
}

ComplexSample mmse_pncf_posterior_mean(const RelayInput& in) {
    return pncf_mean(HypothesisSet(in.h13, in.h23), in.y3);
}

ComplexSample mmse_pncf_sync(ComplexSample y3, double h0) {
    // (cosh A - e^B) / (cosh A + e^B) = tanh((log cosh A - B)/2), halved.
    const double b = 2.0 * h0 * h0;
    const double re = std::tanh(0.5 * (log_cosh(2.0 * h0 * y3.real()) - b));
    const double im = std::tanh(0.5 * (log_cosh(2.0 * h0 * y3.imag()) - b));
    return 0.5 * ComplexSample(re, im);
}

ComplexSample linear_pnci(const RelayInput& in, NoiseConvention nc) {
    const double p = 2.0 * (std::norm(in.h13) + std::norm(in.h23)) + noise_power(nc);
    return std::sqrt(2.0 / p) * in.y3;
}

ComplexSample mmse_pnci_posterior_mean(const RelayInput& in) {
    return pnci_mean(HypothesisSet(in.h13, in.h23), in.y3);
}

ComplexSample mmse_pnci_sync(ComplexSample y3, double h0) {
    // Per component the sum s in {-2h0, 0, +2h0} has priors {1/4, 1/2, 1/4};
    // E[s | y] = 2h0 * sinh(2h0*y) / (cosh(2h0*y) + exp(2h0^2)).
    const double b = 2.0 * h0 * h0;
    const double re = 2.0 * h0 * sinh_over_cosh_plus_exp(2.0 * h0 * y3.real(), b);
    const double im = 2.0 * h0 * sinh_over_cosh_plus_exp(2.0 * h0 * y3.imag(), b);
    return ComplexSample(re, im);
}

std::pair<std::vector<ComplexSample>, double> normalize_packet(
    std::span<const ComplexSample> raw) {
    if (raw.empty()) throw std::invalid_argument("normalize_packet: empty packet");
    long double power = 0.0L;
    for (const auto& s : raw) power += std::norm(s);
    const double mean = static_cast<double>(power / raw.size());
    if (mean == 0.0) {
        throw std::invalid_argument("normalize_packet: all-zero packet");
    }
    const double g = std::sqrt(2.0 / mean);
    std::vector<ComplexSample> scaled(raw.begin(), raw.end());
    for (auto& s : scaled) s *= g;
    return {std::move(scaled), g};
}

RelayOutput relay_map(SchemeId scheme, std::span<const ComplexSample> packet_y3,
                      const ChannelState& cs) {
    if (packet_y3.empty()) throw std::invalid_argument("relay_map: empty packet");
    RelayOutput out;
    out.scheme = scheme;
    const HypothesisSet hs(cs.h13, cs.h23);
    if (scheme == SchemeId::MAP_PNCF) {
        out.symbols.reserve(packet_y3.size());
        for (const auto& y : packet_y3) out.symbols.push_back(map_decide(hs, y).value());
        out.norm_gain = 1.0;
        return out;
    }
    std::vector<ComplexSample> raw;
    raw.reserve(packet_y3.size());
    for (const auto& y : packet_y3) {
        switch (scheme) {
            case SchemeId::MMSE_PNCF: raw.push_back(pncf_mean(hs, y)); break;
            case SchemeId::LINEAR_PNCI: raw.push_back(y); break;
            case SchemeId::MMSE_PNCI: raw.push_back(pnci_mean(hs, y)); break;
            default: break;
        }
    }
    auto [scaled, gain] = normalize_packet(raw);
    out.symbols = std::move(scaled);
    out.norm_gain = gain;
    return out;
}

}  // namespace pncsim
