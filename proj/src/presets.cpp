#include <algorithm>

#include "sr/experiment.hpp"

namespace sr {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
    return v;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"spreading-gain",      "primary-benefit", "detector-ordering",
            "secondary-rate-slope", "upper-bound-scaling", "mutualism",
            "ris-quadratic",       "fdsr-cancellation",   "oracles"};
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.seed = 1;
    if (name == "spreading-gain") {
        // Secondary BER vs SNR for K = 2 and K = 4; the 1e-2 crossings should
        // sit ~3 dB apart (spreading gain of one doubling).
        c.experiment = ExperimentKind::BerSweep;
        c.label = "spreading_gain";
        c.detectors = {DetectorKind::ML};
        c.K_list = {2, 4};
        c.M_r_list = {2};
        c.rho = 0.5;
        c.snr_db = arange(14.0, 40.0, 2.0);
        c.trials = 200000;
        c.out = "spreading_gain.csv";
        return c;
    }
    if (name == "primary-benefit") {
        // Paired comparison of the primary BER with and without the
        // backscatter path at fixed transmit SNR.
        c.experiment = ExperimentKind::BerSweep;
        c.label = "primary_benefit";
        c.detectors = {DetectorKind::ML};
        c.compare_no_backscatter = true;
        c.K_list = {4};
        c.M_r_list = {2};
        c.rho = 0.5;
        c.snr_db = {10.0, 12.0, 14.0, 16.0, 18.0, 20.0};
        c.trials = 200000;
        c.out = "primary_benefit.csv";
        return c;
    }
    if (name == "detector-ordering") {
        c.experiment = ExperimentKind::BerSweep;
        c.label = "detector_ordering";
        c.detectors = {DetectorKind::ML, DetectorKind::SicZf, DetectorKind::ZF};
        c.K_list = {2};
        c.M_r_list = {2};
        c.rho = 0.5;
        c.snr_db = {10.0, 15.0, 20.0};
        c.trials = 200000;
        c.out = "detector_ordering.csv";
        return c;
    }
    if (name == "secondary-rate-slope") {
        // Ergodic secondary rate (K = 1) at 30 and 40 dB: the high-SNR slope
        // is ~3 bits per 10 dB.
        c.experiment = ExperimentKind::RateSweep;
        c.label = "secondary_rate_slope";
        c.K_list = {1};
        c.M_r_list = {1};
        c.rho = 1.0;
        c.snr_db = {30.0, 40.0};
        c.trials = 20000;
        c.out = "secondary_rate_slope.csv";
        return c;
    }
    if (name == "upper-bound-scaling") {
        c.experiment = ExperimentKind::RateSweep;
        c.label = "upper_bound_scaling";
        c.K_list = {1, 2, 4, 8};
        c.M_r_list = {1, 2, 4, 8};
        c.rho = 1.0;
        c.snr_db = {40.0};
        c.trials = 20000;
        c.out = "upper_bound_scaling.csv";
        return c;
    }
    if (name == "mutualism") {
        // Mean primary-upper and secondary rates over a 33-point alpha sweep
        // at low SNR; the per-draw monotonicity check lives in the acceptance
        // suite.
        c.experiment = ExperimentKind::RateSweep;
        c.label = "mutualism";
        c.K_list = {1};
        c.M_r_list = {1};
        c.rho = 1.0;
        c.snr_db = {-10.0};
        c.alpha_list = linspace(0.0, 1.0, 33);
        c.trials = 100;
        c.out = "mutualism.csv";
        return c;
    }
    if (name == "ris-quadratic") {
        c.experiment = ExperimentKind::RisScaling;
        c.label = "ris_quadratic";
        c.M_b_list = {2, 4, 8, 16, 32};
        c.trials = 100000;
        c.out = "ris_quadratic.csv";
        return c;
    }
    if (name == "fdsr-cancellation") {
        c.experiment = ExperimentKind::FdsrSweep;
        c.label = "fdsr_cancellation";
        c.system.K = 4;
        c.fdsr.beta1 = {1.0, 0.0};
        c.fdsr.beta2 = {1.0, 0.0};
        c.fdsr.residual_factors = {0.0, 0.25, 0.5, 0.75, 1.0};
        c.snr_db = {-6.0, -3.0, 0.0};
        c.trials = 200000;
        c.out = "fdsr_cancellation.csv";
        return c;
    }
    if (name == "oracles") {
        // Handled specially by the CLI: runs run_oracle_suite(seed).
        c.experiment = ExperimentKind::Allocation;
        c.label = "oracles";
        c.out = "oracles.csv";
        return c;
    }
    throw ConfigError("unknown preset: " + name);
}

}  // namespace sr
