#pragma once

#include <functional>
#include <span>

#include "sr/rng.hpp"
#include "sr/types.hpp"

namespace sr {

struct RateBounds {
    double upper = 0.0;
    double lower = 0.0;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

/// Achievable-rate summary for one channel state.
struct RateReport {
    double primary_upper = 0.0;
    double primary_lower = 0.0;
    double secondary = 0.0;
    SystemConfig config;
};

/// Primary-rate bounds in bits/s/Hz:
///   upper = E_c[log2(1 + p ||f1 + c f2||^2 / sigma2)] (exact enumeration),
///   lower = log2(1 + p ||f1||^2 / (p ||f2||^2 E|c|^2 + sigma2)).
/// The lower bound treats the backscattering path as Gaussian interference;
/// E|c|^2 comes from the alphabet (1 for PSK).
RateBounds primary_rate_bounds(std::span<const cplx> f1, std::span<const cplx> f2, double p,
                               double sigma2, const Constellation& A_c);

/// Secondary rate: K = 1 gives E_s[log2(1 + p ||h2 s||^2 / sigma2)] (exact
/// enumeration); K > 1 gives the spreading-code rate
/// (1/K) log2(1 + K p ||h2||^2 / sigma2).
double secondary_rate(std::span<const cplx> h2, double p, double sigma2, int K,
                      const Constellation& A_s);

/// RateReport for a channel state under `config` (secondary branch selected
/// by config.K).
RateReport rate_report(const ChannelState& state, const SystemConfig& config,
                       const Constellation& A_s, const Constellation& A_c);

/// Monte Carlo mean and standard error of `rate_fn` over `trials` independent
/// channel draws. Each trial gets its own stream Rng(seed, stream0 + trial),
/// so results are reproducible and order-independent. trials must be >= 100.
MeanStderr ergodic_rate(const std::function<ChannelState(Rng&)>& channel_sampler,
                        const std::function<double(const ChannelState&)>& rate_fn,
                        std::size_t trials, std::uint64_t seed, std::uint64_t stream0 = 0);

}  // namespace sr
