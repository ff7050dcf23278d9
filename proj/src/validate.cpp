#include "pncsim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pncsim/channel.hpp"
#include "pncsim/endnode.hpp"
#include "pncsim/metrics.hpp"
#include "pncsim/sweep.hpp"

namespace pncsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Suite {
    std::uint64_t seed;
    std::vector<CheckResult> checks;

    // Convention: a check passes when measured <= tolerance.
    void add(std::string name, double measured, double tolerance) {
        checks.push_back({std::move(name), measured, tolerance,
                          measured <= tolerance});
    }

    RandomStream stream(const std::string& label) const {
        return RandomStream(seed, "validate/" + label);
    }
};

// Relay-side MSUE of one scheme at fixed uplink coefficients.
double relay_msue(SchemeId scheme, const ChannelState& cs, std::size_t n,
                  RandomStream& rng) {
    DecompAccumulator acc;
    for (std::size_t i = 0; i < n; ++i) {
        const QpskSymbol x1 = draw_symbol(rng);
        const QpskSymbol x2 = draw_symbol(rng);
        const ComplexSample y3 = uplink(x1, x2, cs, rng);
        const RelayInput in{y3, cs.h13, cs.h23};
        ComplexSample target, est;
        if (is_pncf(scheme)) {
            target = xor_code(x1, x2).value();
            est = scheme == SchemeId::MAP_PNCF ? map_pncf(in).value()
                                               : mmse_pncf_posterior_mean(in);
        } else {
            target = cs.h13 * x1.value() + cs.h23 * x2.value();
            est = scheme == SchemeId::LINEAR_PNCI ? y3
                                                  : mmse_pnci_posterior_mean(in);
        }
        acc.add(target, est);
    }
    return acc.result().msue;
}

// Same, averaged over per-block random relative carrier phase.
double relay_msue_random_phase(SchemeId scheme, double hu, std::size_t n,
                               RandomStream& rng) {
    DecompAccumulator acc;
    const std::size_t block = 1024;
    for (std::size_t done = 0; done < n; done += block) {
        const double theta = rng.uniform() * kTwoPi;
        const ChannelState cs(ComplexSample(hu, 0.0), std::polar(hu, theta),
                              ComplexSample(1.0, 0.0), ComplexSample(1.0, 0.0));
        const std::size_t m = std::min(block, n - done);
        for (std::size_t i = 0; i < m; ++i) {
            const QpskSymbol x1 = draw_symbol(rng);
            const QpskSymbol x2 = draw_symbol(rng);
            const ComplexSample y3 = uplink(x1, x2, cs, rng);
            const RelayInput in{y3, cs.h13, cs.h23};
            if (is_pncf(scheme)) {
                const ComplexSample est =
                    scheme == SchemeId::MAP_PNCF ? map_pncf(in).value()
                                                 : mmse_pncf_posterior_mean(in);
                acc.add(xor_code(x1, x2).value(), est);
            } else {
                const ComplexSample target =
                    cs.h13 * x1.value() + cs.h23 * x2.value();
                const ComplexSample est = scheme == SchemeId::LINEAR_PNCI
                                              ? y3
                                              : mmse_pnci_posterior_mean(in);
                acc.add(target, est);
            }
        }
    }
    return acc.result().msue;
}

void check_signal_basics(Suite& s) {
    const auto& alpha = QpskSymbol::alphabet();
    int violations = 0;
    const QpskSymbol identity(1.0, 1.0);
    for (const auto& a : alpha) {
        if (!(xor_code(a, a) == identity)) ++violations;
        if (!(xor_code(a, identity) == a)) ++violations;
        for (const auto& b : alpha) {
            if (!(xor_code(a, b) == xor_code(b, a))) ++violations;
            for (const auto& c : alpha) {
                if (!(xor_code(xor_code(a, b), c) == xor_code(a, xor_code(b, c))))
                    ++violations;
            }
        }
    }
    s.add("xor-group-structure", violations, 0);

    violations = 0;
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 2; ++i) {
            const BitPair b{r, i};
            if (!(demodulate(modulate(b)) == b)) ++violations;
            for (int r2 = 0; r2 < 2; ++r2)
                for (int i2 = 0; i2 < 2; ++i2) {
                    const BitPair b2{r2, i2};
                    const QpskSymbol lhs = xor_code(modulate(b), modulate(b2));
                    const QpskSymbol rhs = modulate(BitPair{r ^ r2, i ^ i2});
                    if (!(lhs == rhs)) ++violations;
                }
        }
    s.add("modulate-xor-consistency", violations, 0);

    // 2-D trapezoid quadrature of the density over [-8,8]^2.
    const int n = 1200;
    const double lo = -8.0, h = 16.0 / n;
    long double integral = 0.0L;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double wr = (i == 0 || i == n) ? 0.5 : 1.0;
            const double wi = (j == 0 || j == n) ? 0.5 : 1.0;
            integral += wr * wi *
                        gaussian_pdf(ComplexSample(lo + i * h, lo + j * h), 1.0);
        }
    integral *= h * h;
    s.add("gaussian-pdf-normalization", std::abs((double)integral - 1.0), 1e-6);
}

void check_draws(Suite& s) {
    const std::size_t n = 1'000'000;
    RandomStream rng = s.stream("draws");
    long double p = 0, mr = 0, mi = 0, cross = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexSample z = draw_noise(rng);
        p += std::norm(z);
        mr += z.real();
        mi += z.imag();
        cross += z.real() * z.imag();
    }
    s.add("noise-power", std::abs((double)(p / n) - 2.0), 0.01);
    s.add("noise-mean", std::max(std::abs((double)(mr / n)),
                                 std::abs((double)(mi / n))), 0.005);
    s.add("noise-component-correlation", std::abs((double)(cross / n)), 0.005);

    RandomStream srng = s.stream("symbols");
    std::size_t counts[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const QpskSymbol sym = draw_symbol(srng);
        for (int k = 0; k < 4; ++k)
            if (sym == QpskSymbol::alphabet()[k]) ++counts[k];
    }
    double worst = 0.0;
    for (auto c : counts)
        worst = std::max(worst, std::abs((double)c / n - 0.25));
    s.add("symbol-uniformity", worst, 0.002);

    RandomStream a = s.stream("base").substream("a");
    RandomStream b = s.stream("base").substream("b");
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    s.add("substream-independence", equal, 0);
}

void check_channel(Suite& s) {
    double worst = 0.0;
    for (double db = -20.0; db <= 40.0; db += 2.5) {
        const ComplexSample h = snr_to_coeff(db, 0.7);
        worst = std::max(worst, std::abs(20.0 * std::log10(std::abs(h)) - db));
    }
    s.add("snr-roundtrip", worst, 1e-10);

    // Empirical receive SNR = |h|^2 under the power-2 conventions.
    RandomStream rng = s.stream("rx-snr");
    const ChannelState cs(snr_to_coeff(5.0, 0.3), snr_to_coeff(-40.0, 0.0),
                          ComplexSample(1, 0), ComplexSample(1, 0));
    const std::size_t n = 1'000'000;
    long double sig = 0, noi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const QpskSymbol x1 = draw_symbol(rng);
        const QpskSymbol x2 = draw_symbol(rng);
        const ComplexSample clean = uplink_noiseless(x1, x2, cs);
        sig += std::norm(cs.h13 * x1.value());
        noi += std::norm(uplink(x1, x2, cs, rng) - clean);
    }
    const double snr = (double)(sig / noi);
    s.add("uplink-receive-snr", std::abs(snr / std::norm(cs.h13) - 1.0), 0.01);
}

void check_sync_equivalence(Suite& s) {
    const double h0s[] = {0.5, 1.0, 1.778};
    int mismatches = 0;
    double worst_f = 0.0, worst_i = 0.0;
    for (double h0 : h0s) {
        RandomStream rng = s.stream("sync-" + std::to_string(h0));
        const ChannelState cs(ComplexSample(h0, 0), ComplexSample(h0, 0),
                              ComplexSample(1, 0), ComplexSample(1, 0));
        const std::size_t n = 30'000;
        std::vector<ComplexSample> gen_f, sync_f, gen_i, sync_i;
        gen_f.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const ComplexSample y3 =
                uplink(draw_symbol(rng), draw_symbol(rng), cs, rng);
            const RelayInput in{y3, cs.h13, cs.h23};
            if (!(map_pncf(in) == map_pncf_sync(y3, h0))) ++mismatches;
            gen_f.push_back(mmse_pncf_posterior_mean(in));
            sync_f.push_back(mmse_pncf_sync(y3, h0));
            gen_i.push_back(mmse_pnci_posterior_mean(in));
            sync_i.push_back(mmse_pnci_sync(y3, h0));
        }
        // One fitted positive constant per pair; deviations relative to the
        // largest sample magnitude.
        auto fit_dev = [](const std::vector<ComplexSample>& gen,
                          const std::vector<ComplexSample>& syn) {
            long double num = 0, den = 0;
            for (std::size_t k = 0; k < gen.size(); ++k) {
                num += (std::conj(syn[k]) * gen[k]).real();
                den += std::norm(syn[k]);
            }
            const double c = (double)(num / den);
            double scale = 0, dev = 0;
            for (const auto& g : gen) scale = std::max(scale, std::abs(g));
            for (std::size_t k = 0; k < gen.size(); ++k)
                dev = std::max(dev, std::abs(gen[k] - c * syn[k]));
            return dev / scale;
        };
        worst_f = std::max(worst_f, fit_dev(gen_f, sync_f));
        worst_i = std::max(worst_i, fit_dev(gen_i, sync_i));
    }
    s.add("map-sync-equivalence", mismatches, 0);
    s.add("mmse-pncf-sync-proportionality", worst_f, 1e-9);
    s.add("mmse-pnci-sync-proportionality", worst_i, 1e-9);
}

void check_msue_constants(Suite& s) {
    RandomStream rng = s.stream("linear-msue");
    double worst = 0.0;
    for (double up : {0.0, 10.0}) {
        RandomStream sub = rng.substream(std::to_string(up));
        const double m = relay_msue_random_phase(SchemeId::LINEAR_PNCI,
                                                 std::pow(10.0, up / 20.0),
                                                 400'000, sub);
        worst = std::max(worst, std::abs(m - 2.0) / 2.0);
    }
    s.add("linear-msue-constant", worst, 0.02);

    double worst_gap = -1e9, worst_mi = -1e9;
    for (double up : {-5.0, 0.0, 5.0, 10.0}) {
        const double hu = std::pow(10.0, up / 20.0);
        RandomStream r1 = s.stream("th1-" + std::to_string(up));
        RandomStream r2 = s.stream("th1b-" + std::to_string(up));
        RandomStream r3 = s.stream("th2-" + std::to_string(up));
        const double m_map =
            relay_msue_random_phase(SchemeId::MAP_PNCF, hu, 200'000, r1);
        const double m_mmse =
            relay_msue_random_phase(SchemeId::MMSE_PNCF, hu, 200'000, r2);
        const double m_i =
            relay_msue_random_phase(SchemeId::MMSE_PNCI, hu, 200'000, r3);
        worst_gap = std::max(worst_gap, m_mmse - m_map);
        worst_mi = std::max(worst_mi, m_i - 2.0);
    }
    s.add("theorem1-mmse-beats-map", worst_gap, 0.0);
    s.add("theorem2-mmse-pnci-bound", worst_mi, 0.0);

    // Eq-form MAP MSUE against the measured decomposition, synchronized.
    const double h0 = std::pow(10.0, 0.25);
    const ChannelState cs(ComplexSample(h0, 0), ComplexSample(h0, 0),
                          ComplexSample(1, 0), ComplexSample(1, 0));
    RandomStream re = s.stream("map-closed-eps");
    const EpsilonTriple eps = epsilon_monte_carlo(cs, 600'000, re);
    RandomStream rm = s.stream("map-closed-msue");
    const double measured = relay_msue(SchemeId::MAP_PNCF, cs, 600'000, rm);
    s.add("map-closed-form-agreement",
          std::abs(msue_map_closed(eps) - measured) / measured, 0.02);

    // MMSE closed forms against the measured decomposition.
    for (SchemeId scheme : {SchemeId::MMSE_PNCF, SchemeId::MMSE_PNCI}) {
        RandomStream rt = s.stream(std::string("mmse-closed-terms-") +
                                   std::string(scheme_name(scheme)));
        RandomStream rd = s.stream(std::string("mmse-closed-msue-") +
                                   std::string(scheme_name(scheme)));
        const MmseAnalyticTerms terms =
            estimate_mmse_terms(scheme, cs, 400'000, rt);
        const double closed = msue_mmse_closed(terms, scheme, cs);
        const double measured2 = relay_msue(scheme, cs, 400'000, rd);
        s.add(std::string("mmse-closed-form-agreement-") +
                  std::string(scheme_name(scheme)),
              std::abs(closed - measured2) / measured2, 0.03);
    }
}

void check_end_to_end(Suite& s) {
    // Noiseless identity: every scheme recovers the partner symbols exactly,
    // arbitrary carrier phases.
    RandomStream rng = s.stream("noiseless");
    const ChannelState cs(snr_to_coeff(4.0, 0.9), snr_to_coeff(4.0, -1.3),
                          snr_to_coeff(3.0, 2.1), snr_to_coeff(3.0, 0.4));
    std::size_t errors = 0;
    for (SchemeId scheme : {SchemeId::MAP_PNCF, SchemeId::MMSE_PNCF,
                            SchemeId::LINEAR_PNCI, SchemeId::MMSE_PNCI}) {
        const std::size_t n = 1024;
        std::vector<QpskSymbol> x1, x2;
        std::vector<ComplexSample> y3;
        for (std::size_t i = 0; i < n; ++i) {
            x1.push_back(draw_symbol(rng));
            x2.push_back(draw_symbol(rng));
            y3.push_back(uplink_noiseless(x1[i], x2[i], cs));
        }
        const RelayOutput relayed = relay_map(scheme, y3, cs);
        std::vector<QpskSymbol> est1, est2;
        for (std::size_t i = 0; i < n; ++i) {
            const ComplexSample r1 = downlink_noiseless(relayed.symbols[i], cs.h31);
            const ComplexSample r2 = downlink_noiseless(relayed.symbols[i], cs.h32);
            const SelfInfo i1(x1[i], cs.h31, cs.h13, cs.h23, relayed.norm_gain);
            const SelfInfo i2(x2[i], cs.h32, cs.h23, cs.h13, relayed.norm_gain);
            est1.push_back((is_pncf(scheme) ? detect_partner_pncf(r1, i1)
                                            : detect_partner_pnci(r1, i1))
                               .partner_symbol);
            est2.push_back((is_pncf(scheme) ? detect_partner_pncf(r2, i2)
                                            : detect_partner_pnci(r2, i2))
                               .partner_symbol);
        }
        errors += count_bit_errors(est1, x2).first;
        errors += count_bit_errors(est2, x1).first;
    }
    s.add("noiseless-end-to-end-identity", (double)errors, 0);

    // Destination GSNR formulas against the measured decomposition.
    ExperimentSpec spec;
    spec.schemes = {SchemeId::MMSE_PNCF, SchemeId::MMSE_PNCI};
    spec.uplink_snr_db = {5.0};
    spec.downlink_snr_db = {5.0};
    spec.sync = true;
    spec.packet_symbols = 4096;
    spec.packets = 48;
    spec.master_seed = s.seed;
    const ResultRow rf = run_point(spec, SchemeId::MMSE_PNCF, 5.0, 5.0);
    const ResultRow ri = run_point(spec, SchemeId::MMSE_PNCI, 5.0, 5.0);
    s.add("dest-gsnr-pncf-prediction",
          std::abs(rf.gsnr_n1() -
                   std::pow(10.0, rf.gsnr_n1_predicted_db / 10.0)) /
              rf.gsnr_n1(),
          0.05);
    s.add("dest-gsnr-pnci-prediction",
          std::abs(ri.gsnr_n1() -
                   std::pow(10.0, ri.gsnr_n1_predicted_db / 10.0)) /
              ri.gsnr_n1(),
          0.05);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = (double)k;
        return r;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    const double n = (double)a.size();
    const double mean = (n - 1.0) / 2.0;
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (ra[i] - mean) * (rb[i] - mean);
        da += (ra[i] - mean) * (ra[i] - mean);
        db += (rb[i] - mean) * (rb[i] - mean);
    }
    return num / std::sqrt(da * db);
}

void check_sweeps(Suite& s) {
    ExperimentSpec spec;
    spec.schemes = {SchemeId::MAP_PNCF, SchemeId::MMSE_PNCF,
                    SchemeId::LINEAR_PNCI, SchemeId::MMSE_PNCI};
    spec.uplink_snr_db = {-5.0, -1.0, 3.0, 7.0, 11.0, 15.0};
    spec.downlink_snr_db = {5.0};
    spec.packet_symbols = 1024;
    spec.packets = 64;
    spec.master_seed = s.seed;
    const std::vector<ResultRow> rows = run_sweep(spec);
    double worst_rho = -1.0;
    for (SchemeId scheme : spec.schemes) {
        std::vector<double> gsnr, ber;
        for (const auto& r : rows)
            if (r.scheme == scheme_name(scheme)) {
                gsnr.push_back(r.gsnr_n1_db);
                ber.push_back(r.ber_n1);
            }
        worst_rho = std::max(worst_rho, spearman(gsnr, ber));
    }
    s.add("gsnr-ber-correspondence", worst_rho, -0.95);

    // Byte-identical reruns.
    ExperimentSpec tiny = spec;
    tiny.uplink_snr_db = {1.0, 5.0};
    tiny.packets = 4;
    std::ostringstream c1, c2;
    write_csv(run_sweep(tiny), c1);
    write_csv(run_sweep(tiny), c2);
    s.add("sweep-determinism", c1.str() == c2.str() ? 0 : 1, 0);
}

}  // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

ValidationReport validate_suite(std::uint64_t seed) {
    Suite s{seed, {}};
    check_signal_basics(s);
    check_draws(s);
    check_channel(s);
    check_sync_equivalence(s);
    check_msue_constants(s);
    check_end_to_end(s);
    check_sweeps(s);
    return ValidationReport{std::move(s.checks)};
}

void print_report(const ValidationReport& report, std::ostream& out) {
    for (const auto& c : report.checks) {
        out << (c.pass ? "PASS" : "FAIL") << "  " << c.name
            << "  measured=" << c.measured << "  tolerance=" << c.tolerance
            << '\n';
    }
    out << (report.all_passed() ? "all checks passed" : "CHECKS FAILED") << '\n';
}

}  // namespace pncsim
