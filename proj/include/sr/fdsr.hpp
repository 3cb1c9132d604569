#pragma once

#include <span>

#include "sr/channel.hpp"
#include "sr/types.hpp"

namespace sr {

/// Full-duplex SR channel at the PTx: beta1 is the self-interference path,
/// beta2 the PTx->STx->PTx composite. residual_factor is the fraction of the
/// self-interference amplitude left after cancellation (0 = perfect).
struct FdsrChannel {
    cplx beta1{};
    cplx beta2{};
    double residual_factor = 0.0;

    void validate() const {
        if (residual_factor < 0.0 || residual_factor > 1.0)
            throw std::invalid_argument("FdsrChannel: residual_factor must be in [0, 1]");
    }
};

/// y_k = sqrt(p) beta1 s_k + sqrt(p) beta2 s_k c + u_k (single antenna).
ReceivedBlock synthesize_fdsr_block(const FdsrChannel& ch, double p, std::span<const cplx> s_seq,
                                    cplx c, double sigma2, Rng& rng);

/// Self-interference cancellation followed by matched filtering with the
/// known primary symbols: r_k = y_k - (1 - residual_factor) sqrt(p) beta1 s_k,
/// c_hat = argmin_c sum_k |r_k - sqrt(p) beta2 s_k c|^2.
cplx cancel_and_detect(const ReceivedBlock& block, const FdsrChannel& ch, double p,
                       std::span<const cplx> s_seq_known, const Constellation& A_c);

}  // namespace sr
