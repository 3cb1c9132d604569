#include "sr/experiment.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <thread>

#include "sr/allocation.hpp"
#include "sr/backscatter.hpp"
#include "sr/detectors.hpp"
#include "sr/fdsr.hpp"
#include "sr/rates.hpp"
#include "sr/ris.hpp"

namespace sr {

namespace {

// Per-trial dispatch keyed by (point_index, trial) so trials are reproducible
// in any execution order. fn must be safe to call concurrently for distinct
// trial indices.
template <typename Fn>
void for_each_trial(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned degree = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    degree = static_cast<unsigned>(std::min<std::size_t>(degree, n == 0 ? 1 : n));
    if (degree <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(degree);
    for (unsigned w = 0; w < degree; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::uint64_t trial_stream(std::size_t point_index, std::size_t trial) {
    return (static_cast<std::uint64_t>(point_index) << 32) | static_cast<std::uint64_t>(trial);
}

Constellation make_alphabet(Scheme scheme, int order) { return build_constellation(scheme, order); }

DetectionResult run_detector(DetectorKind kind, const ReceivedBlock& block,
                             std::span<const cplx> h1, std::span<const cplx> h2, double p,
                             double sigma2, const Constellation& A_s, const Constellation& A_c) {
    switch (kind) {
        case DetectorKind::ML:
            return detect_ml(block, h1, h2, p, A_s, A_c);
        case DetectorKind::MRC:
            return detect_linear(block, h1, h2, p, sigma2, LinearVariant::MRC, A_s, A_c);
        case DetectorKind::ZF:
            return detect_linear(block, h1, h2, p, sigma2, LinearVariant::ZF, A_s, A_c);
        case DetectorKind::MMSE:
            return detect_linear(block, h1, h2, p, sigma2, LinearVariant::MMSE, A_s, A_c);
        case DetectorKind::SicZf:
            return detect_sic(block, h1, h2, p, sigma2, A_s, A_c, LinearVariant::ZF);
        case DetectorKind::SicMmse:
            return detect_sic(block, h1, h2, p, sigma2, A_s, A_c, LinearVariant::MMSE);
    }
    throw std::logic_error("run_detector: unknown detector");
}

int bit_errors(const Constellation& a, int truth_idx, cplx decided) {
    const int idx = a.nearest(decided);
    return std::popcount(a.labels[static_cast<std::size_t>(truth_idx)] ^
                         a.labels[static_cast<std::size_t>(idx)]);
}

double binomial_stderr(double p_hat, double n) {
    return n > 0.0 ? std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / n) : 0.0;
}

std::string metric_suffix(const char* key, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "@%s=%.6g", key, v);
    return buf;
}

struct MeanAccumulator {
    std::vector<double> values;
    explicit MeanAccumulator(std::size_t n) : values(n, 0.0) {}
    // reduction in trial order, independent of the execution schedule
    MeanStderr reduce() const {
        double sum = 0.0;
        for (double v : values) sum += v;
        const double n = static_cast<double>(values.size());
        const double mean = sum / n;
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        MeanStderr out;
        out.mean = mean;
        out.trials = values.size();
        out.stderr_ = n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return out;
    }
};

void run_ber_point(const ExperimentConfig& cfg, int K, int m_r, double snr_db,
                   std::size_t point_index, std::vector<ResultRow>& rows) {
    const double sigma2 = cfg.system.p / db_to_linear(snr_db);
    const Constellation A_s = make_alphabet(cfg.primary_scheme, cfg.primary_order);
    const Constellation A_c = make_alphabet(cfg.secondary_scheme, cfg.secondary_order);
    const std::size_t n_det = cfg.detectors.size();
    const cvec zeros(static_cast<std::size_t>(m_r), cplx{});

    struct Counts {
        std::atomic<std::uint64_t> s_err{0}, s_bits{0}, c_err{0}, c_bits{0};
    };
    std::vector<Counts> with(n_det);
    Counts without;  // h2 = 0 reference (ML only)

    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(cfg.seed, trial_stream(point_index, t));
        const ChannelState st = sample_channel_state(m_r, cfg.system.alpha, cfg.rho, rng);
        std::vector<int> s_idx(static_cast<std::size_t>(K));
        std::vector<cplx> s_seq(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            s_idx[static_cast<std::size_t>(k)] = static_cast<int>(rng.uniform_index(A_s.points.size()));
            s_seq[static_cast<std::size_t>(k)] = A_s.points[static_cast<std::size_t>(s_idx[static_cast<std::size_t>(k)])];
        }
        const int c_idx = static_cast<int>(rng.uniform_index(A_c.points.size()));
        const cplx c = A_c.points[static_cast<std::size_t>(c_idx)];

        ReceivedBlock block = synthesize_block(st.direct, st.composite, cfg.system.p, s_seq, c,
                                               0.0, rng);
        ReceivedBlock ref;
        if (cfg.compare_no_backscatter)
            ref = synthesize_block(st.direct, zeros, cfg.system.p, s_seq, c, 0.0, rng);
        // Shared noise so the with/without comparison is paired.
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < m_r; ++m) {
                const cplx u = rng.cgaussian(sigma2);
                block.samples[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] += u;
                if (cfg.compare_no_backscatter)
                    ref.samples[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] += u;
            }

        for (std::size_t d = 0; d < n_det; ++d) {
            const DetectionResult res = run_detector(cfg.detectors[d], block, st.direct,
                                                     st.composite, cfg.system.p, sigma2, A_s, A_c);
            std::uint64_t serr = 0;
            for (int k = 0; k < K; ++k)
                serr += static_cast<std::uint64_t>(
                    bit_errors(A_s, s_idx[static_cast<std::size_t>(k)], res.s_hat[static_cast<std::size_t>(k)]));
            with[d].s_err += serr;
            with[d].s_bits += static_cast<std::uint64_t>(K) * static_cast<std::uint64_t>(A_s.bits_per_symbol);
            with[d].c_err += static_cast<std::uint64_t>(bit_errors(A_c, c_idx, res.c_hat));
            with[d].c_bits += static_cast<std::uint64_t>(A_c.bits_per_symbol);
        }
        if (cfg.compare_no_backscatter) {
            const DetectionResult res = detect_ml(ref, st.direct, zeros, cfg.system.p, A_s, A_c);
            std::uint64_t serr = 0;
            for (int k = 0; k < K; ++k)
                serr += static_cast<std::uint64_t>(
                    bit_errors(A_s, s_idx[static_cast<std::size_t>(k)], res.s_hat[static_cast<std::size_t>(k)]));
            without.s_err += serr;
            without.s_bits += static_cast<std::uint64_t>(K) * static_cast<std::uint64_t>(A_s.bits_per_symbol);
        }
    });

    for (std::size_t d = 0; d < n_det; ++d) {
        const double sb = static_cast<double>(with[d].s_bits.load());
        const double cb = static_cast<double>(with[d].c_bits.load());
        const double ber_s = static_cast<double>(with[d].s_err.load()) / sb;
        const double ber_c = static_cast<double>(with[d].c_err.load()) / cb;
        const std::string det = to_string(cfg.detectors[d]);
        rows.push_back({cfg.effective_label(), det, K, m_r, snr_db, "ber_s", ber_s,
                        binomial_stderr(ber_s, sb), cfg.trials, cfg.seed});
        rows.push_back({cfg.effective_label(), det, K, m_r, snr_db, "ber_c", ber_c,
                        binomial_stderr(ber_c, cb), cfg.trials, cfg.seed});
    }
    if (cfg.compare_no_backscatter) {
        const double sb = static_cast<double>(without.s_bits.load());
        const double ber = static_cast<double>(without.s_err.load()) / sb;
        rows.push_back({cfg.effective_label(), "ml", K, m_r, snr_db, "ber_s_direct_only", ber,
                        binomial_stderr(ber, sb), cfg.trials, cfg.seed});
    }
}

void run_rate_point(const ExperimentConfig& cfg, int K, int m_r, double snr_db, double alpha,
                    bool alpha_swept, std::size_t point_index, std::vector<ResultRow>& rows) {
    SystemConfig sys = cfg.system;
    sys.K = K;
    sys.M_r = m_r;
    sys.alpha = alpha;
    sys.sigma2 = cfg.system.p / db_to_linear(snr_db);
    const Constellation A_s = make_alphabet(cfg.primary_scheme, cfg.primary_order);
    const Constellation A_c = make_alphabet(cfg.secondary_scheme, cfg.secondary_order);

    MeanAccumulator upper(cfg.trials), lower(cfg.trials), secondary(cfg.trials);
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(cfg.seed, trial_stream(point_index, t));
        const ChannelState st = sample_channel_state(m_r, alpha, cfg.rho, rng);
        const RateReport r = rate_report(st, sys, A_s, A_c);
        upper.values[t] = r.primary_upper;
        lower.values[t] = r.primary_lower;
        secondary.values[t] = r.secondary;
    });

    const std::string suffix = alpha_swept ? metric_suffix("a", alpha) : std::string{};
    const std::pair<const char*, const MeanAccumulator*> metrics[] = {
        {"primary_upper", &upper}, {"primary_lower", &lower}, {"secondary_rate", &secondary}};
    for (const auto& [name, acc] : metrics) {
        const MeanStderr m = acc->reduce();
        rows.push_back({cfg.effective_label(), "", K, m_r, snr_db, name + suffix, m.mean,
                        m.stderr_, cfg.trials, cfg.seed});
    }
}

void run_ris_point(const ExperimentConfig& cfg, int m_b, std::size_t point_index,
                   std::vector<ResultRow>& rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // Exact aligned unit-gain case.
    const cvec ones(static_cast<std::size_t>(m_b), cplx(1.0, 0.0));
    const RisState aligned = passive_beamform(ones, ones);
    const double exact = ris_snr(ones, ones, aligned.theta, cfg.system.p, cfg.system.sigma2);
    rows.push_back({cfg.effective_label(), "", 1, m_b, nan, "aligned_unit_snr", exact, 0.0, 1,
                    cfg.seed});

    MeanAccumulator snr(cfg.trials);
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(cfg.seed, trial_stream(point_index, t));
        const cvec l = sample_flat_rayleigh(m_b, 1.0, rng);
        const cvec g = sample_flat_rayleigh(m_b, 1.0, rng);
        const RisState st = passive_beamform(l, g);
        snr.values[t] = ris_snr(l, g, st.theta, cfg.system.p, cfg.system.sigma2);
    });
    const MeanStderr m = snr.reduce();
    rows.push_back({cfg.effective_label(), "", 1, m_b, nan, "mean_snr", m.mean, m.stderr_,
                    cfg.trials, cfg.seed});
}

void run_fdsr_point(const ExperimentConfig& cfg, double snr_db, double residual,
                    std::size_t point_index, std::vector<ResultRow>& rows) {
    const double sigma2 = cfg.system.p / db_to_linear(snr_db);
    const int K = cfg.system.K;
    const Constellation A_s = make_alphabet(cfg.primary_scheme, cfg.primary_order);
    const Constellation A_c = make_alphabet(cfg.secondary_scheme, cfg.secondary_order);
    const FdsrChannel ch{cfg.fdsr.beta1, cfg.fdsr.beta2, residual};

    std::atomic<std::uint64_t> c_err{0}, c_bits{0};
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(cfg.seed, trial_stream(point_index, t));
        std::vector<cplx> s_seq(static_cast<std::size_t>(K));
        for (cplx& s : s_seq) s = A_s.points[rng.uniform_index(A_s.points.size())];
        const int c_idx = static_cast<int>(rng.uniform_index(A_c.points.size()));
        const cplx c = A_c.points[static_cast<std::size_t>(c_idx)];
        const ReceivedBlock block = synthesize_fdsr_block(ch, cfg.system.p, s_seq, c, sigma2, rng);
        const cplx c_hat = cancel_and_detect(block, ch, cfg.system.p, s_seq, A_c);
        c_err += static_cast<std::uint64_t>(bit_errors(A_c, c_idx, c_hat));
        c_bits += static_cast<std::uint64_t>(A_c.bits_per_symbol);
    });
    const double bits = static_cast<double>(c_bits.load());
    const double ber = static_cast<double>(c_err.load()) / bits;
    rows.push_back({cfg.effective_label(), "", K, 1, snr_db, "ber_c" + metric_suffix("r", residual),
                    ber, binomial_stderr(ber, bits), cfg.trials, cfg.seed});
}

void run_allocation(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ConstraintSet cs;
    cs.peak_power = cfg.alloc.peak_power;
    cs.avg_power = cfg.alloc.avg_power;
    cs.power_budget = cfg.alloc.power_budget;
    cs.min_primary_rate = cfg.alloc.min_primary_rate;
    cs.min_secondary_rate = cfg.alloc.min_secondary_rate;

    if (cfg.alloc.mode == "miso") {
        MisoBeamformingProblem prob;
        Rng rng(cfg.seed, 0);
        prob.h_direct = sample_flat_rayleigh(cfg.alloc.m_t, 1.0, rng);
        prob.h_comp = sample_flat_rayleigh(cfg.alloc.m_t, cfg.rho * cfg.rho, rng);
        prob.sigma2 = cfg.system.sigma2;
        prob.A_s = make_alphabet(cfg.primary_scheme, cfg.primary_order);
        prob.A_c = make_alphabet(cfg.secondary_scheme, cfg.secondary_order);
        prob.constraints = cs;
        const AllocationSolution sol = beamform_power_min(prob);
        rows.push_back({cfg.effective_label(), "", 1, cfg.alloc.m_t, nan, "total_power",
                        sol.objective, 0.0, 1, cfg.seed});
        for (const auto& [name, slack] : sol.slacks)
            rows.push_back({cfg.effective_label(), "", 1, cfg.alloc.m_t, nan, "slack_" + name,
                            slack, 0.0, 1, cfg.seed});
        return;
    }

    SisoAllocationProblem prob;
    Rng rng(cfg.seed, 0);
    for (int i = 0; i < cfg.alloc.states; ++i)
        prob.states.push_back(sample_channel_state(1, 1.0, cfg.rho, rng));
    prob.w_s = cfg.alloc.w_s;
    prob.w_c = cfg.alloc.w_c;
    prob.sigma2 = cfg.system.sigma2;
    prob.A_s = make_alphabet(cfg.primary_scheme, cfg.primary_order);
    prob.A_c = make_alphabet(cfg.secondary_scheme, cfg.secondary_order);
    prob.constraints = cs;
    prob.grid = cfg.alloc.grid;
    prob.primary_rate = cfg.alloc.primary_rate == "lower" ? PrimaryRateMode::Lower
                                                          : PrimaryRateMode::Upper;
    const AllocationSolution sol = allocate_siso(prob);
    rows.push_back({cfg.effective_label(), "", 1, 1, nan, "weighted_sum_rate", sol.objective, 0.0,
                    1, cfg.seed});
    rows.push_back({cfg.effective_label(), "", 1, 1, nan, "avg_power", sol.avg_power, 0.0, 1,
                    cfg.seed});
    for (std::size_t i = 0; i < sol.power.size(); ++i) {
        rows.push_back({cfg.effective_label(), "", 1, 1, nan,
                        "p" + metric_suffix("state", static_cast<double>(i)), sol.power[i], 0.0, 1,
                        cfg.seed});
        rows.push_back({cfg.effective_label(), "", 1, 1, nan,
                        "alpha" + metric_suffix("state", static_cast<double>(i)), sol.alpha[i],
                        0.0, 1, cfg.seed});
    }
    for (const auto& [name, slack] : sol.slacks)
        rows.push_back({cfg.effective_label(), "", 1, 1, nan, "slack_" + name, slack, 0.0, 1,
                        cfg.seed});
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ResultRow> rows;
    std::size_t point = 0;
    switch (config.experiment) {
        case ExperimentKind::BerSweep:
            for (int K : config.K_list)
                for (int m_r : config.M_r_list)
                    for (double snr : config.snr_db) run_ber_point(config, K, m_r, snr, point++, rows);
            break;
        case ExperimentKind::RateSweep: {
            const std::vector<double> alphas =
                config.alpha_list.empty() ? std::vector<double>{config.system.alpha}
                                          : config.alpha_list;
            const bool swept = !config.alpha_list.empty();
            for (int K : config.K_list)
                for (int m_r : config.M_r_list)
                    for (double snr : config.snr_db)
                        for (double a : alphas)
                            run_rate_point(config, K, m_r, snr, a, swept, point++, rows);
            break;
        }
        case ExperimentKind::RisScaling:
            for (int m_b : config.M_b_list) run_ris_point(config, m_b, point++, rows);
            break;
        case ExperimentKind::FdsrSweep:
            for (double snr : config.snr_db)
                for (double r : config.fdsr.residual_factors)
                    run_fdsr_point(config, snr, r, point++, rows);
            break;
        case ExperimentKind::Allocation:
            run_allocation(config, rows);
            break;
    }
    return rows;
}

}  // namespace sr
