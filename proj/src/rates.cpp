#include "sr/rates.hpp"

#include <cmath>

namespace sr {

namespace {

double norm2(std::span<const cplx> a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return acc;
}

}  // namespace

RateBounds primary_rate_bounds(std::span<const cplx> f1, std::span<const cplx> f2, double p,
                               double sigma2, const Constellation& A_c) {
    if (f1.size() != f2.size())
        throw std::invalid_argument("primary_rate_bounds: channel lengths differ");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("primary_rate_bounds: sigma2 must be > 0");
    RateBounds b;
    for (const cplx& c : A_c.points) {
        double gain = 0.0;
        for (std::size_t m = 0; m < f1.size(); ++m) gain += std::norm(f1[m] + c * f2[m]);
        b.upper += std::log2(1.0 + p * gain / sigma2);
    }
    b.upper /= static_cast<double>(A_c.size());
    const double interference = p * norm2(f2) * A_c.mean_power();
    b.lower = std::log2(1.0 + p * norm2(f1) / (interference + sigma2));
    return b;
}

double secondary_rate(std::span<const cplx> h2, double p, double sigma2, int K,
                      const Constellation& A_s) {
    if (K < 1) throw std::invalid_argument("secondary_rate: K must be >= 1");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("secondary_rate: sigma2 must be > 0");
    const double gain = norm2(h2);
    if (K == 1) {
        double acc = 0.0;
        for (const cplx& s : A_s.points)
            acc += std::log2(1.0 + p * gain * std::norm(s) / sigma2);
        return acc / static_cast<double>(A_s.size());
    }
    const double kd = static_cast<double>(K);
    return std::log2(1.0 + kd * p * gain / sigma2) / kd;
}

RateReport rate_report(const ChannelState& state, const SystemConfig& config,
                       const Constellation& A_s, const Constellation& A_c) {
    RateReport r;
    r.config = config;
    const RateBounds b = primary_rate_bounds(state.direct, state.composite, config.p,
                                             config.sigma2, A_c);
    r.primary_upper = b.upper;
    r.primary_lower = b.lower;
    r.secondary = secondary_rate(state.composite, config.p, config.sigma2, config.K, A_s);
    return r;
}

MeanStderr ergodic_rate(const std::function<ChannelState(Rng&)>& channel_sampler,
                        const std::function<double(const ChannelState&)>& rate_fn,
                        std::size_t trials, std::uint64_t seed, std::uint64_t stream0) {
    if (trials < 100) throw std::invalid_argument("ergodic_rate: trials must be >= 100");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(seed, stream0 + t);
        const double r = rate_fn(channel_sampler(rng));
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(trials);
    MeanStderr out;
    out.trials = trials;
    out.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
    out.stderr_ = std::sqrt(var / n);
    return out;
}

}  // namespace sr
