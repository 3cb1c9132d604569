#include <cmath>
#include <limits>

#include "sr/allocation.hpp"
#include "sr/backscatter.hpp"
#include "sr/detectors.hpp"
#include "sr/experiment.hpp"
#include "sr/rates.hpp"

// Cross-checks pairing each fast path with an independent dense or exhaustive
// route. These back acceptance criterion 8 and the `oracles` CLI preset.

namespace sr {

namespace {

double residual_tuple(const ReceivedBlock& block, std::span<const cplx> h1,
                      std::span<const cplx> h2, double p, const std::vector<cplx>& s, cplx c) {
    const double amp = std::sqrt(p);
    double acc = 0.0;
    for (int k = 0; k < block.K(); ++k) {
        const auto& y = block.samples[static_cast<std::size_t>(k)];
        for (std::size_t m = 0; m < y.size(); ++m)
            acc += std::norm(y[m] - amp * h1[m] * s[static_cast<std::size_t>(k)] -
                             amp * h2[m] * s[static_cast<std::size_t>(k)] * c);
    }
    return acc;
}

// Exhaustive minimization over all |A_s|^K |A_c| tuples.
DetectionResult detect_ml_exhaustive(const ReceivedBlock& block, std::span<const cplx> h1,
                                     std::span<const cplx> h2, double p, const Constellation& A_s,
                                     const Constellation& A_c) {
    const int K = block.K();
    std::vector<int> idx(static_cast<std::size_t>(K), 0);
    std::vector<cplx> s(static_cast<std::size_t>(K));
    DetectionResult best;
    best.metric = std::numeric_limits<double>::infinity();
    const int n_s = A_s.size();
    const std::size_t tuples = static_cast<std::size_t>(std::pow(n_s, K));
    for (std::size_t t = 0; t < tuples; ++t) {
        std::size_t rem = t;
        for (int k = 0; k < K; ++k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(n_s));
            rem /= static_cast<std::size_t>(n_s);
            s[static_cast<std::size_t>(k)] =
                A_s.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        }
        for (const cplx& c : A_c.points) {
            const double r = residual_tuple(block, h1, h2, p, s, c);
            if (r < best.metric) {
                best.metric = r;
                best.s_hat = s;
                best.c_hat = c;
            }
        }
    }
    return best;
}

std::size_t ml_oracle_mismatches(std::uint64_t seed, std::size_t blocks) {
    const Constellation a = build_constellation(Scheme::BPSK);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < blocks; ++i) {
        Rng rng(seed, 1000 + i);
        const int K = 1 + static_cast<int>(i % 3);
        const int m_r = 1 + static_cast<int>((i / 3) % 2);
        const double snr_db = 20.0 * rng.uniform01();
        const double sigma2 = db_to_linear(-snr_db);
        const ChannelState st = sample_channel_state(m_r, 1.0, 0.5, rng);
        std::vector<cplx> s(static_cast<std::size_t>(K));
        for (cplx& v : s) v = a.points[rng.uniform_index(2)];
        const cplx c = a.points[rng.uniform_index(2)];
        const ReceivedBlock block =
            synthesize_block(st.direct, st.composite, 1.0, s, c, sigma2, rng);
        const DetectionResult fast = detect_ml(block, st.direct, st.composite, 1.0, a, a);
        const DetectionResult slow =
            detect_ml_exhaustive(block, st.direct, st.composite, 1.0, a, a);
        bool same = fast.c_hat == slow.c_hat;
        for (int k = 0; same && k < K; ++k)
            same = fast.s_hat[static_cast<std::size_t>(k)] == slow.s_hat[static_cast<std::size_t>(k)];
        if (!same) ++mismatches;
    }
    return mismatches;
}

// Dense brute force for the 2-state SISO allocation: per-state rate tables on
// a fine (p, alpha) grid, then joint maximization subject to the power
// constraints. Returns the gap to the allocator's (p1, p2) in units of the
// allocator's grid cell.
double alloc_oracle_max_gap(std::uint64_t seed, std::size_t instances) {
    const Constellation bpsk = build_constellation(Scheme::BPSK);
    const int alloc_grid = 32;
    const int dense_grid = 256;
    double max_gap = 0.0;
    for (std::size_t inst = 0; inst < instances; ++inst) {
        Rng rng(seed, 2000 + inst);
        SisoAllocationProblem prob;
        prob.states.push_back(sample_channel_state(1, 1.0, 1.0, rng));
        prob.states.push_back(sample_channel_state(1, 1.0, 1.0, rng));
        prob.w_s = 0.25 + rng.uniform01();
        prob.w_c = 0.25 + rng.uniform01();
        prob.sigma2 = 1.0;
        prob.A_s = bpsk;
        prob.A_c = bpsk;
        prob.grid = alloc_grid;
        const double p_pk = 0.5 + 1.5 * rng.uniform01();
        prob.constraints.peak_power = p_pk;
        const bool average_case = inst % 2 == 1;
        if (average_case) prob.constraints.avg_power = (0.3 + 0.6 * rng.uniform01()) * p_pk;

        const AllocationSolution sol = allocate_siso(prob);

        // Dense per-state tables: value[i][pi] = max over alpha of the state
        // objective at power p_pi.
        std::vector<std::vector<double>> value(2, std::vector<double>(dense_grid + 1));
        for (int i = 0; i < 2; ++i) {
            const ChannelState& st = prob.states[static_cast<std::size_t>(i)];
            for (int pi = 0; pi <= dense_grid; ++pi) {
                const double p = p_pk * pi / dense_grid;
                double best = -std::numeric_limits<double>::infinity();
                for (int ai = 0; ai <= dense_grid; ++ai) {
                    const double alpha = static_cast<double>(ai) / dense_grid;
                    const cvec f2 = composite_backscatter_channel(st.stx_in, st.stx_out, alpha);
                    double v = 0.0;
                    if (p > 0.0) {
                        const RateBounds b = primary_rate_bounds(st.direct, f2, p, 1.0, bpsk);
                        v = prob.w_s * b.upper + prob.w_c * secondary_rate(f2, p, 1.0, 1, bpsk);
                    }
                    best = std::max(best, v);
                }
                value[static_cast<std::size_t>(i)][static_cast<std::size_t>(pi)] = best;
            }
        }
        double best_obj = -std::numeric_limits<double>::infinity();
        double best_p1 = 0.0, best_p2 = 0.0;
        for (int p1 = 0; p1 <= dense_grid; ++p1)
            for (int p2 = 0; p2 <= dense_grid; ++p2) {
                const double pw1 = p_pk * p1 / dense_grid;
                const double pw2 = p_pk * p2 / dense_grid;
                if (average_case && 0.5 * (pw1 + pw2) > *prob.constraints.avg_power + 1e-12)
                    continue;
                const double obj = 0.5 * (value[0][static_cast<std::size_t>(p1)] +
                                          value[1][static_cast<std::size_t>(p2)]);
                if (obj > best_obj) {
                    best_obj = obj;
                    best_p1 = pw1;
                    best_p2 = pw2;
                }
            }
        const double cell = p_pk / alloc_grid;
        const double gap =
            std::max(std::abs(sol.power[0] - best_p1), std::abs(sol.power[1] - best_p2)) / cell;
        max_gap = std::max(max_gap, gap);
    }
    return max_gap;
}

double roundtrip_max_error(std::uint64_t seed, std::size_t draws) {
    double max_err = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        Rng rng(seed, 3000 + i);
        cplx gamma;
        do {
            gamma = cplx(8.0 * rng.uniform01() - 4.0, 8.0 * rng.uniform01() - 4.0);
        } while (std::abs(gamma) > 4.0 || std::abs(gamma - cplx(1.0, 0.0)) < 1e-3);
        const Impedance z_a{10.0 + 90.0 * rng.uniform01(), 100.0 * rng.uniform01() - 50.0};
        const Impedance z_l = impedance_from_gamma({gamma}, z_a);
        const ReflectionCoefficient back = gamma_from_impedance(z_l, z_a);
        max_err = std::max(max_err, std::abs(back.value - gamma));
    }
    return max_err;
}

double mmse_zf_max_rel_diff(std::uint64_t seed, std::size_t draws) {
    double max_rel = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        Rng rng(seed, 4000 + i);
        const int m_r = 2 + 2 * static_cast<int>(i % 2);
        StackedModel model;
        model.h1 = sample_flat_rayleigh(m_r, 1.0, rng);
        model.h2 = sample_flat_rayleigh(m_r, 1.0, rng);
        const auto zf = linear_combiner(model, LinearVariant::ZF, 0.0);
        const auto mmse = linear_combiner(model, LinearVariant::MMSE, 1e-12);
        double diff2 = 0.0, ref2 = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int m = 0; m < m_r; ++m) {
                diff2 += std::norm(mmse[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] -
                                   zf[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)]);
                ref2 += std::norm(zf[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)]);
            }
        max_rel = std::max(max_rel, std::sqrt(diff2 / ref2));
    }
    return max_rel;
}

}  // namespace

std::vector<ResultRow> run_oracle_suite(std::uint64_t seed) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ResultRow> rows;
    rows.push_back({"oracles", "", 0, 0, nan, "ml_reduced_vs_exhaustive_mismatches",
                    static_cast<double>(ml_oracle_mismatches(seed, 1000)), 0.0, 1000, seed});
    rows.push_back({"oracles", "", 0, 0, nan, "alloc_max_gap_cells",
                    alloc_oracle_max_gap(seed, 100), 0.0, 100, seed});
    rows.push_back({"oracles", "", 0, 0, nan, "impedance_roundtrip_max_error",
                    roundtrip_max_error(seed, 10000), 0.0, 10000, seed});
    rows.push_back({"oracles", "", 0, 0, nan, "mmse_zf_max_rel_diff",
                    mmse_zf_max_rel_diff(seed, 100), 0.0, 100, seed});
    return rows;
}

}  // namespace sr
