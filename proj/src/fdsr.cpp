#include "sr/fdsr.hpp"

#include <cmath>
#include <limits>

namespace sr {

ReceivedBlock synthesize_fdsr_block(const FdsrChannel& ch, double p, std::span<const cplx> s_seq,
                                    cplx c, double sigma2, Rng& rng) {
    ch.validate();
    const cvec direct{ch.beta1};
    const cvec composite{ch.beta2};
    return synthesize_block(direct, composite, p, s_seq, c, sigma2, rng);
}

cplx cancel_and_detect(const ReceivedBlock& block, const FdsrChannel& ch, double p,
                       std::span<const cplx> s_seq_known, const Constellation& A_c) {
    ch.validate();
    if (block.M_r() != 1)
        throw std::invalid_argument("cancel_and_detect: FDSR model is single-antenna");
    if (static_cast<int>(s_seq_known.size()) != block.K())
        throw std::invalid_argument("cancel_and_detect: known symbol count != K");
    const double amp = std::sqrt(p);
    const double cancel = 1.0 - ch.residual_factor;
    std::vector<cplx> r(s_seq_known.size());
    for (std::size_t k = 0; k < r.size(); ++k)
        r[k] = block.samples[k][0] - cancel * amp * ch.beta1 * s_seq_known[k];

    cplx best_c{};
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& c : A_c.points) {
        double acc = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k)
            acc += std::norm(r[k] - amp * ch.beta2 * s_seq_known[k] * c);
        if (acc < best) {
            best = acc;
            best_c = c;
        }
    }
    return best_c;
}

}  // namespace sr
