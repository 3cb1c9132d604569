#pragma once

#include <map>
#include <optional>

#include "sr/types.hpp"

namespace sr {

/// Power / reflection / rate constraints of the SISO and MISO allocation
/// problems. At least one power-type bound must be present; alpha is always
/// confined to [0, 1] (the reflection-efficiency constraint).
struct ConstraintSet {
    std::optional<double> peak_power;          // P_pk
    std::optional<double> avg_power;           // P_av
    std::optional<double> power_budget;        // P_t (beamforming)
    std::optional<double> min_primary_rate;    // R~_s
    std::optional<double> min_secondary_rate;  // R~_c

    void validate() const;
};

/// Which primary-rate expression drives the SISO objective: the joint-decoding
/// upper bound (backscatter path helps, matches the mutualism claim) or the
/// conservative interference-limited lower bound.
enum class PrimaryRateMode { Upper, Lower };

struct AllocationSolution {
    std::vector<double> power;   // per fading state (SISO) or {||v||^2} (MISO)
    std::vector<double> alpha;   // per fading state (SISO)
    cvec beam;                   // beamforming vector (MISO)
    double objective = 0.0;      // weighted sum rate (SISO) or total power (MISO)
    double avg_power = 0.0;
    std::map<std::string, double> slacks;  // constraint name -> slack (>= 0 means satisfied)
    std::vector<std::size_t> degenerate_states;  // zero-channel states, allocated p = 0
};

struct SisoAllocationProblem {
    std::vector<ChannelState> states;  // fading states; their alpha/composite fields are
                                       // ignored, alpha is re-derived per grid point
    double w_s = 1.0;
    double w_c = 1.0;
    double sigma2 = 1.0;
    Constellation A_s;
    Constellation A_c;
    ConstraintSet constraints;
    int grid = 64;  // points per axis, >= 32
    PrimaryRateMode primary_rate = PrimaryRateMode::Upper;
};

/// Joint per-state (p, alpha) selection maximizing the weighted sum rate.
/// Peak constraint: exhaustive per-state grid search over
/// [0, P_pk] x [0, 1]. Average constraint: bisection on the Lagrange
/// multiplier of E[p] <= P_av with per-state grid maximization inside;
/// the returned solution is always feasible.
AllocationSolution allocate_siso(const SisoAllocationProblem& problem);

struct MisoBeamformingProblem {
    cvec h_direct;  // PTx->PRx effective channel (M_t entries)
    cvec h_comp;    // PTx->STx->receiver composite channel (M_t entries)
    double sigma2 = 1.0;
    Constellation A_s;
    Constellation A_c;
    ConstraintSet constraints;  // power_budget plus the rate floors
    int beta_grid = 128;
};

/// Transmit-power minimization under primary (conservative, interference-
/// limited) and secondary rate floors. The beam is parameterized as
/// v = sqrt(q) * normalize(beta*u_dir + (1-beta)*u_comp) with u_dir/u_comp
/// the matched directions, and (q, beta) searched directly. Throws
/// InfeasibleError naming the binding constraint when no feasible point
/// exists within the power budget.
AllocationSolution beamform_power_min(const MisoBeamformingProblem& problem);

/// Rates achieved by a given beam under the MISO model (used for feasibility
/// checks and by tests).
struct MisoRates {
    double primary = 0.0;
    double secondary = 0.0;
};
MisoRates miso_rates(const MisoBeamformingProblem& problem, const cvec& beam);

}  // namespace sr
