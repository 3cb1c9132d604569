#include "sr/ris.hpp"

#include <cmath>

namespace sr {

void RisState::validate() const {
    for (const cplx& t : theta) {
        const double a = std::abs(t);
        if (a > 1.0 + 1e-12)
            throw std::invalid_argument("RisState: |theta_m| <= 1 required for passive elements");
        if (constant_amplitude && std::abs(a - 1.0) > 1e-9)
            throw std::invalid_argument("RisState: constant-amplitude mode requires |theta_m| = 1");
    }
}

RisState passive_beamform(std::span<const cplx> l, std::span<const cplx> g,
                          std::size_t* degenerate_count) {
    if (l.size() != g.size() || l.empty())
        throw std::invalid_argument("passive_beamform: l and g must be nonempty, equal length");
    RisState state;
    state.theta.resize(l.size());
    std::size_t degenerate = 0;
    for (std::size_t m = 0; m < l.size(); ++m) {
        if (l[m] == cplx{} || g[m] == cplx{}) {
            state.theta[m] = cplx(1.0, 0.0);  // phase undefined for a dead element
            ++degenerate;
            continue;
        }
        const double phase = std::arg(l[m]) + std::arg(g[m]);
        state.theta[m] = std::polar(1.0, -phase);
    }
    if (degenerate_count) *degenerate_count = degenerate;
    return state;
}

cplx ris_composite_gain(std::span<const cplx> l, std::span<const cplx> g,
                        std::span<const cplx> theta) {
    if (l.size() != g.size() || l.size() != theta.size())
        throw std::invalid_argument("ris_composite_gain: length mismatch");
    cplx acc{};
    for (std::size_t m = 0; m < l.size(); ++m) acc += g[m] * theta[m] * l[m];
    return acc;
}

ReceivedBlock ris_received_signal(std::span<const cplx> l, std::span<const cplx> g,
                                  const RisState& state, double p, std::span<const cplx> s_seq,
                                  std::optional<cplx> c, double sigma2, Rng& rng) {
    state.validate();
    const cplx gain = ris_composite_gain(l, g, state.theta);
    if (state.mode == RisMode::Modulated) {
        if (!c) throw std::invalid_argument("ris_received_signal: modulated mode needs a symbol");
        if (std::abs(*c) > 1.0 + 1e-12)
            throw std::invalid_argument("ris_received_signal: |c| > 1 violates element passivity");
    }
    const cplx symbol = state.mode == RisMode::Modulated ? *c : cplx(1.0, 0.0);
    const cvec composite{gain};
    const cvec direct{cplx{}};
    return synthesize_block(direct, composite, p, s_seq, symbol, sigma2, rng);
}

double ris_snr(std::span<const cplx> l, std::span<const cplx> g, std::span<const cplx> theta,
               double p, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("ris_snr: sigma2 must be > 0");
    return p * std::norm(ris_composite_gain(l, g, theta)) / sigma2;
}

}  // namespace sr
