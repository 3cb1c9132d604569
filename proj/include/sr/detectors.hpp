#pragma once

#include <array>
#include <span>

#include "sr/channel.hpp"
#include "sr/types.hpp"

namespace sr {

/// Joint decision for one secondary symbol period.
struct DetectionResult {
    std::vector<cplx> s_hat;  // K primary decisions
    cplx c_hat{};             // secondary decision
    double metric = 0.0;      // minimized residual / combined statistic
};

/// The stacked two-stream model y_k = sqrt(p) H x_k + u_k with
/// H = [h1, h2] and x_k = (s_k, s_k c).
struct StackedModel {
    cvec h1;
    cvec h2;

    static std::array<cplx, 2> stack_symbols(cplx s, cplx c) { return {s, s * c}; }
};

enum class LinearVariant { MRC, ZF, MMSE };

/// The two combiner rows T_k (each of length M_r) for the chosen variant:
/// MRC  rows h1^H/||h1||^2 and h2^H/||h2||^2,
/// ZF   (H^H H)^{-1} H^H,
/// MMSE (H^H H + sigma2_over_p I_2)^{-1} H^H.
/// ZF throws std::domain_error when H^H H has condition number > 1e12.
std::array<cvec, 2> linear_combiner(const StackedModel& model, LinearVariant variant,
                                    double sigma2_over_p);

/// Joint ML detection (minimum total squared error over A_s^K x A_c) via the
/// reduced search: per candidate c, spatial MRC against sqrt(p)(h1 + h2 c)
/// gives the conditional per-k symbol decision; the c with the smallest total
/// residual wins. K|A_c||A_s| candidate evaluations; ties break to the
/// earliest constellation entry.
DetectionResult detect_ml(const ReceivedBlock& block, std::span<const cplx> h1,
                          std::span<const cplx> h2, double p, const Constellation& A_s,
                          const Constellation& A_c);

/// Linear detection: per-sample x_bar_k = T_k y_k / sqrt(p), primary symbols
/// from the nearest-point rule on the first stream, secondary from
/// argmin_c sum_k |c - x_bar_{k,2}/s_hat_k| (sum of moduli as published;
/// squared_secondary switches to squared moduli for comparison).
DetectionResult detect_linear(const ReceivedBlock& block, std::span<const cplx> h1,
                              std::span<const cplx> h2, double p, double sigma2,
                              LinearVariant variant, const Constellation& A_s,
                              const Constellation& A_c, bool squared_secondary = false);

/// SIC: linear first stage for s, direct-link subtraction and MRC residual
/// matching for c, then MRC re-estimation of s against sqrt(p)(h1 + h2 c_hat).
DetectionResult detect_sic(const ReceivedBlock& block, std::span<const cplx> h1,
                           std::span<const cplx> h2, double p, double sigma2,
                           const Constellation& A_s, const Constellation& A_c,
                           LinearVariant first_stage = LinearVariant::ZF);

struct ClusteringOptions {
    std::uint64_t seed = 0;
    int max_iterations = 100;
    double collapse_tolerance = 1e-9;  // min centroid separation, relative
};

/// Semi-blind constellation-learning detector for binary secondary symbols,
/// K = 1: learns 2|A_s| centroids by k-means over the received samples,
/// splits them into the +1/-1 groups using two labeled pilot blocks and the
/// multiplicative structure of A_s, then classifies every data block.
/// Deterministic in the block order (samples are canonically sorted before
/// seeding). Throws ClusterCollapseError when fewer than 2|A_s| distinct
/// centroids emerge.
std::vector<cplx> detect_clustering(const std::vector<ReceivedBlock>& data,
                                    const ReceivedBlock& pilot_plus,
                                    const ReceivedBlock& pilot_minus, const Constellation& A_s,
                                    const ClusteringOptions& options);

}  // namespace sr
