#pragma once

#include <span>

#include "sr/rng.hpp"
#include "sr/types.hpp"

namespace sr {

/// Default backscatter-link attenuation applied to l: with unit-variance
/// fading and alpha = 1 this puts the backscattering link 20 dB below the
/// direct link, reflecting its double-fading weakness.
inline constexpr double kDefaultLinkRho = 0.1;

/// K received vectors (M_r complex entries each) for one secondary symbol
/// period, plus the symbols that generated them (kept for error scoring).
struct ReceivedBlock {
    std::vector<cvec> samples;  // K x M_r
    std::vector<cplx> truth_s;  // s_1..s_K
    cplx truth_c{};

    int K() const { return static_cast<int>(samples.size()); }
    int M_r() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }
};

/// i.i.d. CN(0, variance) vector.
cvec sample_flat_rayleigh(int length, double variance, Rng& rng);

/// Composite backscatter channel h2 = alpha * l * g (elementwise).
cvec composite_backscatter_channel(cplx l, std::span<const cplx> g, double alpha);

/// Draws a full SR channel state: direct CN(0,I), l CN(0, rho^2), stx_out
/// CN(0,I), composite = alpha*l*g.
ChannelState sample_channel_state(int m_r, double alpha, double rho, Rng& rng);

/// y_k = sqrt(p) * direct * s_k + sqrt(p) * composite * s_k * c + u_k,
/// u_k ~ CN(0, sigma2 I). The secondary symbol c is constant across the
/// block's K samples. sigma2 = 0 gives the exact noiseless superposition.
ReceivedBlock synthesize_block(std::span<const cplx> direct, std::span<const cplx> composite,
                               double p, std::span<const cplx> s_seq, cplx c, double sigma2,
                               Rng& rng);

}  // namespace sr
