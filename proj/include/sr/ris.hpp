#pragma once

#include <optional>
#include <span>

#include "sr/channel.hpp"
#include "sr/types.hpp"

namespace sr {

enum class RisMode { Static, Modulated };

/// Per-element reflection coefficients of an RIS. Passive elements require
/// |theta_m| <= 1; constant-amplitude mode additionally pins |theta_m| = 1.
struct RisState {
    cvec theta;
    RisMode mode = RisMode::Static;
    bool constant_amplitude = true;

    int elements() const { return static_cast<int>(theta.size()); }
    void validate() const;
};

/// Phase-aligning passive beamforming: theta_m = exp(-j(arg l_m + arg g_m)),
/// so every g_m theta_m l_m lands on the positive real axis. Elements with a
/// zero channel get theta_m = 1; their count is reported via
/// `degenerate_count` when provided.
RisState passive_beamform(std::span<const cplx> l, std::span<const cplx> g,
                          std::size_t* degenerate_count = nullptr);

/// Composite scalar channel of the RIS cascade, sum_m g_m theta_m l_m.
cplx ris_composite_gain(std::span<const cplx> l, std::span<const cplx> g,
                        std::span<const cplx> theta);

/// Received block through the RIS cascade (single receive antenna):
/// static mode     y_k = sqrt(p) (sum_m g_m theta_m l_m) s_k + u_k,
/// modulated mode  y_k = sqrt(p) (sum_m g_m theta_m l_m) s_k c + u_k,
/// i.e. the time-varying coefficients theta_m(t) = theta_m c(n) carry the
/// secondary symbol. Modulated mode requires |c| <= 1 to preserve passivity.
ReceivedBlock ris_received_signal(std::span<const cplx> l, std::span<const cplx> g,
                                  const RisState& state, double p, std::span<const cplx> s_seq,
                                  std::optional<cplx> c, double sigma2, Rng& rng);

/// p |sum_m g_m theta_m l_m|^2 / sigma2.
double ris_snr(std::span<const cplx> l, std::span<const cplx> g, std::span<const cplx> theta,
               double p, double sigma2);

}  // namespace sr
