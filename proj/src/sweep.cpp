#include "pncsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pncsim/channel.hpp"
#include "pncsim/endnode.hpp"

namespace pncsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt_g(double v, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

double to_db(double x) { return 10.0 * std::log10(x); }

int scheme_rank(SchemeId s) { return static_cast<int>(s); }

bool metric_ok(double v) { return std::isfinite(v) || v == std::numeric_limits<double>::infinity(); }

// Shared tag so that points differing only in downlink SNR replay the same
// uplink realizations.
std::string uplink_tag(const ExperimentSpec& spec, SchemeId scheme,
                       double uplink_db) {
    std::ostringstream os;
    os << "up/" << scheme_name(scheme) << '/' << fmt_g(uplink_db, 6) << '/'
       << (spec.sync ? "sync" : "free") << '/' << fmt_g(spec.phase13, 6) << '/'
       << fmt_g(spec.phase23, 6) << '/' << (spec.randomize_phase ? 1 : 0);
    return os.str();
}

}  // namespace

void ExperimentSpec::validate() const {
    if (schemes.empty()) throw std::invalid_argument("spec: empty scheme set");
    if (uplink_snr_db.empty() || downlink_snr_db.empty()) {
        throw std::invalid_argument("spec: empty SNR list");
    }
    if (packet_symbols < 256) {
        throw std::invalid_argument("spec: packet_symbols must be >= 256");
    }
    if (packets == 0) throw std::invalid_argument("spec: packets must be positive");
}

double ResultRow::gsnr_n1() const { return std::pow(10.0, gsnr_n1_db / 10.0); }
double ResultRow::gsnr_n2() const { return std::pow(10.0, gsnr_n2_db / 10.0); }

ResultRow run_point(const ExperimentSpec& spec, SchemeId scheme,
                    double uplink_db, double downlink_db) {
    spec.validate();
    const double hu = std::pow(10.0, uplink_db / 20.0);
    const double hd = std::pow(10.0, downlink_db / 20.0);
    const std::string up_tag = uplink_tag(spec, scheme, uplink_db);
    const std::string dn_tag = up_tag + "/dn/" + fmt_g(downlink_db, 6);
    const RandomStream base(spec.master_seed, "pncsim");

    DecompAccumulator relay_acc, n1_acc, n2_acc;
    std::complex<long double> mmse_corr = 0.0L;  // E[target* m] of the raw estimator
    long double mmse_pm = 0.0L;
    std::size_t eps_counts[3] = {0, 0, 0};
    std::size_t err1 = 0, err2 = 0;
    const std::size_t n_total = spec.packet_symbols * spec.packets;

    std::vector<QpskSymbol> x1(spec.packet_symbols), x2(spec.packet_symbols);
    std::vector<ComplexSample> y3(spec.packet_symbols);

    for (std::size_t p = 0; p < spec.packets; ++p) {
        const std::string pk = std::to_string(p);
        RandomStream up_rng = base.substream(up_tag + "/pkt/" + pk);
        RandomStream dn1_rng = base.substream(dn_tag + "/n1/" + pk);
        RandomStream dn2_rng = base.substream(dn_tag + "/n2/" + pk);

        double ph13 = spec.phase13, ph23 = spec.phase23;
        if (spec.sync) {
            ph13 = ph23 = 0.0;
        } else if (spec.randomize_phase) {
            ph23 += up_rng.uniform() * kTwoPi;
        }
        const ChannelState cs(std::polar(hu, ph13), std::polar(hu, ph23),
                              ComplexSample(hd, 0.0), ComplexSample(hd, 0.0));
        // Partner-uplink carrier phases vary per packet in the unsynchronized
        // regime; de-rotate the processed samples so the decomposition gain
        // stays coherent across packets.
        const ComplexSample derot1 =
            is_pncf(scheme) ? ComplexSample(1.0, 0.0) : std::polar(1.0, -ph23);
        const ComplexSample derot2 =
            is_pncf(scheme) ? ComplexSample(1.0, 0.0) : std::polar(1.0, -ph13);

        for (std::size_t i = 0; i < spec.packet_symbols; ++i) {
            x1[i] = draw_symbol(up_rng);
            x2[i] = draw_symbol(up_rng);
            y3[i] = uplink(x1[i], x2[i], cs, up_rng);
        }
        const RelayOutput relayed = relay_map(scheme, y3, cs);

        for (std::size_t i = 0; i < spec.packet_symbols; ++i) {
            const QpskSymbol xor_sym = xor_code(x1[i], x2[i]);
            const ComplexSample target =
                is_pncf(scheme) ? xor_sym.value()
                                : cs.h13 * x1[i].value() + cs.h23 * x2[i].value();
            relay_acc.add(target, relayed.symbols[i]);

            if (scheme == SchemeId::MAP_PNCF) {
                const ComplexSample est = relayed.symbols[i];
                const bool re_bad = est.real() != xor_sym.re();
                const bool im_bad = est.imag() != xor_sym.im();
                if (re_bad && im_bad) ++eps_counts[2];
                else if (re_bad) ++eps_counts[1];
                else if (im_bad) ++eps_counts[0];
            } else if (scheme != SchemeId::LINEAR_PNCI) {
                const ComplexSample m = relayed.symbols[i] / relayed.norm_gain;
                mmse_corr += std::complex<long double>(std::conj(target) * m);
                mmse_pm += std::norm(m);
            }

            const ComplexSample y1 = downlink(relayed.symbols[i], cs.h31, dn1_rng);
            const ComplexSample y2 = downlink(relayed.symbols[i], cs.h32, dn2_rng);
            const SelfInfo info1(x1[i], cs.h31, cs.h13, cs.h23, relayed.norm_gain);
            const SelfInfo info2(x2[i], cs.h32, cs.h23, cs.h13, relayed.norm_gain);
            const DetectionResult d1 = is_pncf(scheme)
                                           ? detect_partner_pncf(y1, info1)
                                           : detect_partner_pnci(y1, info1);
            const DetectionResult d2 = is_pncf(scheme)
                                           ? detect_partner_pncf(y2, info2)
                                           : detect_partner_pnci(y2, info2);
            n1_acc.add(x2[i].value(), d1.processed_sample * derot1);
            n2_acc.add(x1[i].value(), d2.processed_sample * derot2);
            err1 += static_cast<std::size_t>(d1.partner_symbol.re() != x2[i].re()) +
                    static_cast<std::size_t>(d1.partner_symbol.im() != x2[i].im());
            err2 += static_cast<std::size_t>(d2.partner_symbol.re() != x1[i].re()) +
                    static_cast<std::size_t>(d2.partner_symbol.im() != x1[i].im());
        }
    }

    // Magnitude-only channel state for the power bookkeeping formulas.
    const ChannelState cs_mag(ComplexSample(hu, 0.0), ComplexSample(hu, 0.0),
                              ComplexSample(hd, 0.0), ComplexSample(hd, 0.0));

    ResultRow row;
    row.scheme = std::string(scheme_name(scheme));
    row.uplink_snr_db = uplink_db;
    row.downlink_snr_db = downlink_db;
    row.phase13_rad = spec.sync ? 0.0 : spec.phase13;
    row.phase23_rad = spec.sync ? 0.0 : spec.phase23;
    row.n_symbols = n_total;
    row.seed = spec.master_seed;

    const UncorrelatedDecomposition relay_dec = relay_acc.result();
    row.msue_relay = relay_dec.msue;
    row.gsnr_relay_db = to_db(relay_gsnr(relay_dec.msue, scheme, cs_mag));

    switch (scheme) {
        case SchemeId::MAP_PNCF: {
            const double dn = static_cast<double>(n_total);
            const EpsilonTriple eps{eps_counts[0] / dn, eps_counts[1] / dn,
                                    eps_counts[2] / dn};
            row.eps0 = eps.eps0;
            row.eps1 = eps.eps1;
            row.eps2 = eps.eps2;
            row.msue_relay_closed = msue_map_closed(eps);
            break;
        }
        case SchemeId::LINEAR_PNCI:
            row.msue_relay_closed = msue_linear_pnci();
            break;
        default: {
            MmseAnalyticTerms terms;
            const double p = scheme == SchemeId::MMSE_PNCF
                                 ? 2.0
                                 : 2.0 * (hu * hu + hu * hu);
            const ComplexSample mean_corr = static_cast<ComplexSample>(
                mmse_corr / static_cast<long double>(n_total));
            terms.lambda = std::conj(p / mean_corr - 1.0);
            terms.second_moment =
                static_cast<double>(mmse_pm / static_cast<long double>(n_total));
            row.msue_relay_closed = msue_mmse_closed(terms, scheme, cs_mag);
            break;
        }
    }

    const UncorrelatedDecomposition n1_dec = n1_acc.result();
    const UncorrelatedDecomposition n2_dec = n2_acc.result();
    row.gsnr_n1_db = to_db(n1_dec.gsnr);
    row.gsnr_n2_db = to_db(n2_dec.gsnr);
    const double predicted =
        is_pncf(scheme)
            ? gsnr_dest_pncf(relay_dec.msue, cs_mag.h31, spec.noise_convention)
            : gsnr_dest_pnci(relay_dec.msue, cs_mag.h31, cs_mag.h23, cs_mag,
                             spec.noise_convention);
    row.gsnr_n1_predicted_db = to_db(predicted);
    row.ber_n1 = static_cast<double>(err1) / (2.0 * n_total);
    row.ber_n2 = static_cast<double>(err2) / (2.0 * n_total);

    for (double v : {row.msue_relay, row.msue_relay_closed, row.gsnr_relay_db,
                     row.gsnr_n1_db, row.gsnr_n1_predicted_db, row.gsnr_n2_db,
                     row.ber_n1, row.ber_n2}) {
        if (!metric_ok(v)) {
            throw std::runtime_error("non-finite metric at point scheme=" +
                                     row.scheme + " up=" + fmt_g(uplink_db, 6) +
                                     " dn=" + fmt_g(downlink_db, 6));
        }
    }
    return row;
}

unsigned resolve_thread_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("PNCSIM_THREADS")) {
        n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    struct Task {
        SchemeId scheme;
        double up, dn;
    };
    std::vector<SchemeId> schemes = spec.schemes;
    std::sort(schemes.begin(), schemes.end(),
              [](SchemeId a, SchemeId b) { return scheme_rank(a) < scheme_rank(b); });
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    std::vector<double> ups = spec.uplink_snr_db;
    std::vector<double> dns = spec.downlink_snr_db;
    std::sort(ups.begin(), ups.end());
    std::sort(dns.begin(), dns.end());

    std::vector<Task> tasks;
    for (SchemeId s : schemes)
        for (double up : ups)
            for (double dn : dns) tasks.push_back({s, up, dn});

    std::vector<ResultRow> rows(tasks.size());
    const unsigned workers =
        std::min<unsigned>(resolve_thread_count(), static_cast<unsigned>(tasks.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                rows[i] = run_point(spec, tasks[i].scheme, tasks[i].up, tasks[i].dn);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

ExperimentSpec make_preset(const std::string& name) {
    ExperimentSpec spec;
    spec.schemes = {SchemeId::MAP_PNCF, SchemeId::MMSE_PNCF,
                    SchemeId::LINEAR_PNCI, SchemeId::MMSE_PNCI};
    std::vector<double> sweep;
    for (int db = -5; db <= 15; db += 2) sweep.push_back(db);
    if (name == "fig2" || name == "fig3") {
        spec.uplink_snr_db = sweep;
        spec.downlink_snr_db = {5.0};
    } else if (name == "fig4") {
        spec.uplink_snr_db = {5.0};
        spec.downlink_snr_db = sweep;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return spec;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << "scheme,uplink_snr_db,downlink_snr_db,phase13_rad,phase23_rad,"
           "msue_relay,msue_relay_closed,gsnr_relay_db,gsnr_n1_db,"
           "gsnr_n1_predicted_db,gsnr_n2_db,ber_n1,ber_n2,eps0,eps1,eps2,"
           "n_symbols,seed\n";
    for (const auto& r : rows) {
        out << r.scheme << ',' << fmt_g(r.uplink_snr_db) << ','
            << fmt_g(r.downlink_snr_db) << ',' << fmt_g(r.phase13_rad) << ','
            << fmt_g(r.phase23_rad) << ',' << fmt_g(r.msue_relay) << ','
            << fmt_g(r.msue_relay_closed) << ',' << fmt_g(r.gsnr_relay_db) << ','
            << fmt_g(r.gsnr_n1_db) << ',' << fmt_g(r.gsnr_n1_predicted_db) << ','
            << fmt_g(r.gsnr_n2_db) << ',' << fmt_g(r.ber_n1) << ','
            << fmt_g(r.ber_n2) << ',';
        if (r.eps0) out << fmt_g(*r.eps0);
        out << ',';
        if (r.eps1) out << fmt_g(*r.eps1);
        out << ',';
        if (r.eps2) out << fmt_g(*r.eps2);
        out << ',' << r.n_symbols << ',' << r.seed << '\n';
    }
}

void write_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(rows, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pncsim
