#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pncsim/metrics.hpp"
#include "pncsim/relay.hpp"

namespace pncsim {

/// One Monte Carlo experiment: a grid of operating points per scheme.
struct ExperimentSpec {
    std::vector<SchemeId> schemes;
    std::vector<double> uplink_snr_db;
    std::vector<double> downlink_snr_db;
    double phase13 = 0.0;
    double phase23 = 0.0;
    /// Per-packet uniform random relative carrier phase on h23 (the
    /// symbol-level-synchronization-only regime). Ignored when sync is set.
    bool randomize_phase = true;
    /// Force h13 = h23 real (full power and carrier-phase synchronization).
    bool sync = false;
    std::size_t packet_symbols = 4096;
    std::size_t packets = 256;
    std::uint64_t master_seed = 0;
    NoiseConvention noise_convention = NoiseConvention::Resolved;

    void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
    std::string scheme;
    double uplink_snr_db = 0.0;
    double downlink_snr_db = 0.0;
    double phase13_rad = 0.0;
    double phase23_rad = 0.0;
    double msue_relay = 0.0;
    double msue_relay_closed = 0.0;
    double gsnr_relay_db = 0.0;
    double gsnr_n1_db = 0.0;
    double gsnr_n1_predicted_db = 0.0;
    double gsnr_n2_db = 0.0;
    double ber_n1 = 0.0;
    double ber_n2 = 0.0;
    std::optional<double> eps0;  // MAP rows only
    std::optional<double> eps1;
    std::optional<double> eps2;
    std::size_t n_symbols = 0;
    std::uint64_t seed = 0;

    /// Linear-scale conveniences for analysis code.
    double gsnr_n1() const;
    double gsnr_n2() const;
};

/// Simulates one (scheme, uplink, downlink) point of the spec.
ResultRow run_point(const ExperimentSpec& spec, SchemeId scheme,
                    double uplink_db, double downlink_db);

/// Full Cartesian sweep, rows ordered by (scheme, uplink, downlink). Points
/// run in parallel up to the PNCSIM_THREADS cap (0 or unset = auto); results
/// are deterministic regardless of thread count.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

/// Figure presets: fig2/fig3 sweep the uplink at fixed 5 dB downlink,
/// fig4 sweeps the downlink at fixed 5 dB uplink. Throws on unknown name.
ExperimentSpec make_preset(const std::string& name);

/// Deterministic CSV emission: fixed header, 9 significant digits, LF line
/// endings, empty cells for inapplicable columns.
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv_file(const std::vector<ResultRow>& rows, const std::string& path);

/// Worker cap from the PNCSIM_THREADS environment variable.
unsigned resolve_thread_count();

}  // namespace pncsim
