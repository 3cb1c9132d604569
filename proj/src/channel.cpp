#include "sr/channel.hpp"

#include <cmath>

namespace sr {

ChannelState make_channel_state(cvec direct, cplx stx_in, cvec stx_out, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("make_channel_state: alpha must be >= 0");
    if (direct.size() != stx_out.size())
        throw std::invalid_argument("make_channel_state: direct and stx_out lengths differ");
    ChannelState st;
    st.direct = std::move(direct);
    st.stx_in = stx_in;
    st.stx_out = std::move(stx_out);
    st.alpha = alpha;
    st.composite = composite_backscatter_channel(st.stx_in, st.stx_out, alpha);
    return st;
}

cvec sample_flat_rayleigh(int length, double variance, Rng& rng) {
    if (length < 1) throw std::invalid_argument("sample_flat_rayleigh: length must be >= 1");
    if (!(variance > 0.0)) throw std::invalid_argument("sample_flat_rayleigh: variance must be > 0");
    cvec h(static_cast<std::size_t>(length));
    for (cplx& v : h) v = rng.cgaussian(variance);
    return h;
}

cvec composite_backscatter_channel(cplx l, std::span<const cplx> g, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("composite_backscatter_channel: alpha must be >= 0");
    cvec h2(g.size());
    const cplx scale = alpha * l;
    for (std::size_t m = 0; m < g.size(); ++m) h2[m] = scale * g[m];
    return h2;
}

ChannelState sample_channel_state(int m_r, double alpha, double rho, Rng& rng) {
    if (rho < 0.0) throw std::invalid_argument("sample_channel_state: rho must be >= 0");
    cvec direct = sample_flat_rayleigh(m_r, 1.0, rng);
    const cplx l = rho * rng.standard_cgaussian();
    cvec g = sample_flat_rayleigh(m_r, 1.0, rng);
    return make_channel_state(std::move(direct), l, std::move(g), alpha);
}

ReceivedBlock synthesize_block(std::span<const cplx> direct, std::span<const cplx> composite,
                               double p, std::span<const cplx> s_seq, cplx c, double sigma2,
                               Rng& rng) {
    if (direct.size() != composite.size())
        throw std::invalid_argument("synthesize_block: channel lengths differ");
    if (p < 0.0 || sigma2 < 0.0)
        throw std::invalid_argument("synthesize_block: p and sigma2 must be >= 0");
    const double amp = std::sqrt(p);
    ReceivedBlock block;
    block.samples.resize(s_seq.size());
    block.truth_s.assign(s_seq.begin(), s_seq.end());
    block.truth_c = c;
    for (std::size_t k = 0; k < s_seq.size(); ++k) {
        cvec& y = block.samples[k];
        y.resize(direct.size());
        const cplx s = s_seq[k];
        for (std::size_t m = 0; m < direct.size(); ++m) {
            y[m] = amp * direct[m] * s + amp * composite[m] * s * c;
            if (sigma2 > 0.0) y[m] += rng.cgaussian(sigma2);
        }
    }
    return block;
}

}  // namespace sr
