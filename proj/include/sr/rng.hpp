#pragma once

#include <cstdint>
#include <random>

#include "sr/types.hpp"

namespace sr {

/// Deterministic random stream addressed by (seed, stream_id).
///
/// The same pair always yields the same draws; distinct stream ids give
/// statistically independent streams (splitmix64 key derivation feeding a
/// fully specified mt19937_64). Distribution sampling is hand-rolled on top
/// of raw 64-bit words so sequences do not depend on the standard library's
/// unspecified distribution algorithms.
class Rng {
   public:
    Rng(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

    /// N(0, 1) via Box-Muller; pairs are cached.
    double standard_normal();

    /// CN(0, 1): real and imaginary parts N(0, 1/2).
    cplx standard_cgaussian();

    /// CN(0, variance).
    cplx cgaussian(double variance);

   private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream_id) { return Rng(seed, stream_id); }

}  // namespace sr
