#include "pncsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pncsim {

namespace {

double pncf_signal_power() { return 2.0; }

double pnci_signal_power(const ChannelState& cs) {
    return 2.0 * (std::norm(cs.h13) + std::norm(cs.h23));
}

}  // namespace

UncorrelatedDecomposition decompose(std::span<const ComplexSample> x,
                                    std::span<const ComplexSample> y) {
    if (x.size() != y.size()) throw std::invalid_argument("decompose: length mismatch");
    if (x.empty()) throw std::invalid_argument("decompose: empty input");
    std::complex<long double> corr = 0.0L;
    long double px = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        corr += std::complex<long double>(std::conj(x[i]) * y[i]);
        px += std::norm(x[i]);
    }
    if (corr == std::complex<long double>{} || px == 0.0L) {
        throw std::domain_error("decompose: vanishing empirical correlation");
    }
    UncorrelatedDecomposition d;
    d.n_samples = x.size();
    d.gain = static_cast<ComplexSample>(corr / px);
    long double pe = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) pe += std::norm(y[i] / d.gain - x[i]);
    d.msue = static_cast<double>(pe / x.size());
    const double mean_px = static_cast<double>(px / x.size());
    d.gsnr = d.msue == 0.0 ? std::numeric_limits<double>::infinity()
                           : mean_px / d.msue;
    return d;
}

void DecompAccumulator::add(ComplexSample x, ComplexSample y) {
    corr_ += std::complex<long double>(std::conj(x) * y);
    px_ += std::norm(x);
    py_ += std::norm(y);
    ++n_;
}

UncorrelatedDecomposition DecompAccumulator::result() const {
    if (n_ == 0) throw std::invalid_argument("DecompAccumulator: empty input");
    if (corr_ == std::complex<long double>{} || px_ == 0.0L) {
        throw std::domain_error("DecompAccumulator: vanishing empirical correlation");
    }
    UncorrelatedDecomposition d;
    d.n_samples = n_;
    d.gain = static_cast<ComplexSample>(corr_ / px_);
    const long double mean_px = px_ / n_;
    const long double mean_py = py_ / n_;
    // E|y/g - x|^2 = E|y|^2/|g|^2 - E|x|^2 when g is the correlation gain.
    const long double g2 = std::norm(std::complex<long double>(d.gain));
    d.msue = std::max(0.0, static_cast<double>(mean_py / g2 - mean_px));
    d.gsnr = d.msue == 0.0 ? std::numeric_limits<double>::infinity()
                           : static_cast<double>(mean_px) / d.msue;
    return d;
}

EpsilonTriple epsilon_monte_carlo(const ChannelState& cs, std::size_t n,
                                  RandomStream& rng) {
    std::size_t c0 = 0, c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const QpskSymbol x1 = draw_symbol(rng);
        const QpskSymbol x2 = draw_symbol(rng);
        const ComplexSample y3 = uplink(x1, x2, cs, rng);
        const QpskSymbol est = map_pncf({y3, cs.h13, cs.h23});
        const QpskSymbol truth = xor_code(x1, x2);
        const bool re_bad = est.re() != truth.re();
        const bool im_bad = est.im() != truth.im();
        if (re_bad && im_bad) ++c2;
        else if (re_bad) ++c1;
        else if (im_bad) ++c0;
    }
    const double dn = static_cast<double>(n);
    return {c0 / dn, c1 / dn, c2 / dn};
}

double msue_map_closed(const EpsilonTriple& eps) {
    const double c = 1.0 - eps.eps0 - eps.eps1 - 2.0 * eps.eps2;
    if (!(c > 0.0)) {
        throw std::domain_error("msue_map_closed: nonpositive correlation factor");
    }
    return 2.0 / (c * c) - 2.0;
}

double msue_linear_pnci() { return 2.0; }

MmseAnalyticTerms estimate_mmse_terms(SchemeId scheme, const ChannelState& cs,
                                      std::size_t n, RandomStream& rng) {
    if (scheme != SchemeId::MMSE_PNCF && scheme != SchemeId::MMSE_PNCI) {
        throw std::invalid_argument("estimate_mmse_terms: not an MMSE scheme");
    }
    std::complex<long double> corr = 0.0L;
    long double pm = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const QpskSymbol x1 = draw_symbol(rng);
        const QpskSymbol x2 = draw_symbol(rng);
        const ComplexSample y3 = uplink(x1, x2, cs, rng);
        const RelayInput in{y3, cs.h13, cs.h23};
        ComplexSample target, m;
        if (scheme == SchemeId::MMSE_PNCF) {
            target = xor_code(x1, x2).value();
            m = mmse_pncf_posterior_mean(in);
        } else {
            target = cs.h13 * x1.value() + cs.h23 * x2.value();
            m = mmse_pnci_posterior_mean(in);
        }
        corr += std::complex<long double>(std::conj(target) * m);
        pm += std::norm(m);
    }
    const double p = scheme == SchemeId::MMSE_PNCF ? pncf_signal_power()
                                                   : pnci_signal_power(cs);
    const ComplexSample mean_corr = static_cast<ComplexSample>(
        corr / static_cast<long double>(n));
    MmseAnalyticTerms t;
    t.lambda = std::conj(p / mean_corr - 1.0);
    t.second_moment = static_cast<double>(pm / static_cast<long double>(n));
    return t;
}

double msue_mmse_closed(const MmseAnalyticTerms& terms, SchemeId scheme,
                        const ChannelState& cs) {
    if (scheme != SchemeId::MMSE_PNCF && scheme != SchemeId::MMSE_PNCI) {
        throw std::invalid_argument("msue_mmse_closed: not an MMSE scheme");
    }
    const double p = scheme == SchemeId::MMSE_PNCF ? pncf_signal_power()
                                                   : pnci_signal_power(cs);
    const ComplexSample lstar = std::conj(terms.lambda);
    return p * (2.0 * terms.lambda.real() + 1.0) -
           std::norm(lstar + 1.0) * terms.second_moment;
}

double gsnr_dest_pncf(double msue_relay, ComplexSample h_down,
                      NoiseConvention nc) {
    const double d = std::norm(h_down);
    if (nc == NoiseConvention::PaperPrinted) {
        const double b2 = 4.0 / (2.0 + msue_relay);
        return 2.0 * b2 * d / (b2 * d * msue_relay + 1.0);
    }
    const double b2 = 2.0 / (2.0 + msue_relay);
    return 2.0 * b2 * d / (b2 * d * msue_relay + 2.0);
}

double gsnr_dest_pnci(double msue_relay, ComplexSample h_down,
                      ComplexSample h_partner_up, const ChannelState& cs,
                      NoiseConvention nc) {
    const double d = std::norm(h_down);
    const double u = std::norm(h_partner_up);
    const double h2 = std::norm(cs.h13) + std::norm(cs.h23);
    if (nc == NoiseConvention::PaperPrinted) {
        const double b2 = 4.0 / (2.0 * h2 + msue_relay);
        return b2 * d * u / (b2 * d * msue_relay + 1.0);
    }
    const double b2 = 2.0 / (2.0 * h2 + msue_relay);
    return 2.0 * b2 * d * u / (b2 * d * msue_relay + 2.0);
}

double relay_gsnr(double msue_relay, SchemeId scheme, const ChannelState& cs) {
    const double p = is_pncf(scheme) ? pncf_signal_power() : pnci_signal_power(cs);
    if (msue_relay == 0.0) return std::numeric_limits<double>::infinity();
    return p / msue_relay;
}

}  // namespace pncsim
