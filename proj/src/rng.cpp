#include "sr/rng.hpp"

#include <cmath>
#include <numbers>

namespace sr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_id) : gen_(0) {
    std::uint64_t state = seed;
    std::uint64_t key = splitmix64(state);
    state ^= stream_id * 0xda942042e4dd58b5ULL;
    key ^= splitmix64(state);
    gen_.seed(key);
}

std::size_t Rng::uniform_index(std::size_t n) {
    // Modulo bias is < n / 2^64, far below anything observable here.
    return static_cast<std::size_t>(gen_() % n);
}

double Rng::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

cplx Rng::standard_cgaussian() {
    const double s = std::numbers::sqrt2;
    return {standard_normal() / s, standard_normal() / s};
}

cplx Rng::cgaussian(double variance) {
    return standard_cgaussian() * std::sqrt(variance);
}

}  // namespace sr
