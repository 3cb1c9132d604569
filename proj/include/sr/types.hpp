#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sr {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Thrown when an experiment or problem description fails validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by allocation solvers when no feasible point exists. `binding`
/// names the constraint that could not be met.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what, std::string binding_constraint = {})
        : std::runtime_error(what), binding(std::move(binding_constraint)) {}
    std::string binding;
};

/// Thrown by the semi-blind detector when k-means does not produce the
/// expected number of distinct centroids.
struct ClusterCollapseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class Scheme { BPSK, QPSK, MQAM };

/// Finite symbol alphabet, normalized so max_m |points[m]| == 1.
///
/// `labels` carries the Gray-coded bit pattern of each point; bit errors
/// between two decisions are popcount(labels[i] ^ labels[j]).
struct Constellation {
    std::vector<cplx> points;
    std::vector<std::uint32_t> labels;
    Scheme scheme = Scheme::BPSK;
    int bits_per_symbol = 1;
    double max_amplitude = 1.0;

    int size() const { return static_cast<int>(points.size()); }

    /// E|c|^2 under uniform symbols.
    double mean_power() const {
        double acc = 0.0;
        for (const cplx& c : points) acc += std::norm(c);
        return acc / static_cast<double>(points.size());
    }

    /// Index of the nearest point to z (ties break to the lowest index).
    int nearest(cplx z) const {
        int best = 0;
        double best_d = std::norm(z - points[0]);
        for (int i = 1; i < size(); ++i) {
            const double d = std::norm(z - points[static_cast<std::size_t>(i)]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }
};

/// Static system parameters shared by simulation and analysis code.
/// Powers are linear watts; dB appears only at I/O boundaries.
struct SystemConfig {
    double p = 1.0;       // transmit power
    double sigma2 = 1.0;  // noise variance per receive antenna
    int K = 1;            // primary symbols per secondary symbol
    int M_r = 1;          // receive antennas
    double alpha = 1.0;   // reflection efficiency
    bool active_load = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p > 0.0)) throw ConfigError("SystemConfig: p must be > 0");
        if (!(sigma2 > 0.0)) throw ConfigError("SystemConfig: sigma2 must be > 0");
        if (K < 1) throw ConfigError("SystemConfig: K must be >= 1");
        if (M_r < 1) throw ConfigError("SystemConfig: M_r must be >= 1");
        if (alpha < 0.0) throw ConfigError("SystemConfig: alpha must be >= 0");
        if (!active_load && alpha > 1.0)
            throw ConfigError("SystemConfig: alpha > 1 requires active_load");
    }
};

/// One flat-fading realization of the three SR links plus the derived
/// composite backscatter channel.
struct ChannelState {
    cvec direct;     // h1 (SRx) or f1 (PRx)
    cplx stx_in;     // l, PTx -> STx
    cvec stx_out;    // g (STx -> SRx) or q (STx -> PRx)
    cvec composite;  // alpha * l * g, elementwise
    double alpha = 1.0;  // the alpha composite was built with
};

/// Builds the composite channel alpha*l*g alongside its inputs.
ChannelState make_channel_state(cvec direct, cplx stx_in, cvec stx_out, double alpha);

}  // namespace sr
