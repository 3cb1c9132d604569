#pragma once

#include <limits>
#include <optional>
#include <string>

#include "sr/channel.hpp"
#include "sr/types.hpp"

namespace sr {

enum class ExperimentKind { BerSweep, RateSweep, Allocation, RisScaling, FdsrSweep };
enum class DetectorKind { ML, MRC, ZF, MMSE, SicZf, SicMmse };

std::string to_string(ExperimentKind kind);
std::string to_string(DetectorKind kind);
ExperimentKind experiment_from_string(const std::string& name);
DetectorKind detector_from_string(const std::string& name);
Scheme scheme_from_string(const std::string& name, int& order);

/// Full description of one experiment run. Parsed from the JSON config file
/// (which may carry // comments); every field has a default documented in
/// configs/defaults.json.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::BerSweep;
    std::string label;  // experiment id in the CSV; defaults to the kind name
    SystemConfig system;
    double rho = kDefaultLinkRho;  // backscatter link strength multiplier on l
    Scheme primary_scheme = Scheme::BPSK;
    int primary_order = 0;
    Scheme secondary_scheme = Scheme::BPSK;
    int secondary_order = 0;
    std::vector<DetectorKind> detectors{DetectorKind::ML};
    std::vector<double> snr_db;
    std::vector<int> K_list{1};
    std::vector<int> M_r_list{1};
    std::vector<int> M_b_list;       // RIS element counts
    std::vector<double> alpha_list;  // optional alpha sweep (rate experiments)
    std::size_t trials = 10000;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::string out = "results.csv";
    std::uint64_t seed = 1;
    bool compare_no_backscatter = false;  // BER: also run the h2 = 0 reference

    struct AllocationConfig {
        std::string mode = "siso";  // "siso" or "miso"
        int states = 8;
        double w_s = 1.0;
        double w_c = 1.0;
        std::optional<double> peak_power;
        std::optional<double> avg_power;
        std::optional<double> power_budget;
        std::optional<double> min_primary_rate;
        std::optional<double> min_secondary_rate;
        int grid = 64;
        std::string primary_rate = "upper";  // "upper" or "lower"
        int m_t = 4;                         // MISO transmit antennas
    } alloc;

    struct FdsrConfig {
        cplx beta1{1.0, 0.0};
        cplx beta2{0.1, 0.0};
        std::vector<double> residual_factors{0.0};
    } fdsr;

    void validate() const;
    std::string effective_label() const { return label.empty() ? to_string(experiment) : label; }
};

/// One CSV record; snr_db is NaN when the column does not apply.
struct ResultRow {
    std::string experiment;
    std::string detector;
    int K = 0;
    int M_r = 0;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    std::string metric;
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Runs the experiment described by `config`. Deterministic given
/// (config, seed) regardless of the parallelism degree.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Writes rows as CSV with the fixed header
/// experiment,detector,K,M_r,snr_db,metric,value,stderr,trials,seed.
/// Two runs with the same rows produce byte-identical files.
void write_results(const std::vector<ResultRow>& rows, const std::string& path);

/// Parses a results CSV back into rows (round-trip of write_results).
std::vector<ResultRow> read_results(const std::string& path);

ExperimentConfig load_config_string(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json_string(const ExperimentConfig& config);

/// Built-in configs reproducing the acceptance experiments.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// The oracle cross-check suite (reduced-vs-exhaustive ML, allocator vs dense
/// brute force, impedance round-trip, MMSE->ZF limit), reported as rows.
std::vector<ResultRow> run_oracle_suite(std::uint64_t seed);

}  // namespace sr
