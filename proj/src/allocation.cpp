#include "sr/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sr/channel.hpp"
#include "sr/rates.hpp"

namespace sr {

namespace {

double norm2(const cvec& a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return acc;
}

cplx dot_conj(const cvec& a, const cvec& b) {
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

// Weighted sum rate of one fading state at (p, alpha). The composite channel
// is rebuilt from stx_in/stx_out so alpha acts as a decision variable.
struct StateEvaluator {
    const ChannelState* state;
    const SisoAllocationProblem* prob;
    bool degenerate = false;

    StateEvaluator(const ChannelState& s, const SisoAllocationProblem& p) : state(&s), prob(&p) {
        degenerate = norm2(s.direct) == 0.0 && (std::norm(s.stx_in) == 0.0 || norm2(s.stx_out) == 0.0);
    }

    double operator()(double p, double alpha) const {
        if (p <= 0.0) return 0.0;
        const cvec f2 = composite_backscatter_channel(state->stx_in, state->stx_out, alpha);
        double r_s = 0.0;
        if (prob->w_s > 0.0) {
            const RateBounds b =
                primary_rate_bounds(state->direct, f2, p, prob->sigma2, prob->A_c);
            r_s = prob->primary_rate == PrimaryRateMode::Upper ? b.upper : b.lower;
        }
        double r_c = 0.0;
        if (prob->w_c > 0.0) r_c = secondary_rate(f2, p, prob->sigma2, 1, prob->A_s);
        return prob->w_s * r_s + prob->w_c * r_c;
    }
};

struct GridPoint {
    double p = 0.0;
    double alpha = 0.0;
    double value = 0.0;
};

// argmax over the (p, alpha) grid of value(p, alpha) - lambda * p; ties keep
// the first point in scan order (p outer, alpha inner).
GridPoint best_on_grid(const StateEvaluator& eval, double p_max, int grid, double lambda) {
    GridPoint best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double p = p_max * static_cast<double>(i) / static_cast<double>(grid);
        for (int j = 0; j <= grid; ++j) {
            const double alpha = static_cast<double>(j) / static_cast<double>(grid);
            const double v = eval(p, alpha) - lambda * p;
            if (v > best.value) best = {p, alpha, v};
        }
    }
    return best;
}

}  // namespace

void ConstraintSet::validate() const {
    if (!peak_power && !avg_power && !power_budget)
        throw ConfigError("ConstraintSet: at least one power-type constraint is required");
    for (const auto& [name, v] :
         std::initializer_list<std::pair<const char*, const std::optional<double>&>>{
             {"peak_power", peak_power},
             {"avg_power", avg_power},
             {"power_budget", power_budget},
             {"min_primary_rate", min_primary_rate},
             {"min_secondary_rate", min_secondary_rate}}) {
        if (v && !(*v >= 0.0))
            throw ConfigError(std::string("ConstraintSet: ") + name + " must be >= 0");
    }
}

AllocationSolution allocate_siso(const SisoAllocationProblem& problem) {
    if (problem.states.empty()) throw ConfigError("allocate_siso: no fading states");
    if (problem.grid < 32) throw ConfigError("allocate_siso: grid must be >= 32");
    if (problem.w_s < 0.0 || problem.w_c < 0.0 || (problem.w_s == 0.0 && problem.w_c == 0.0))
        throw ConfigError("allocate_siso: weights must be >= 0 and not both zero");
    const ConstraintSet& cs = problem.constraints;
    if (!cs.peak_power && !cs.avg_power)
        throw InfeasibleError("allocate_siso: needs a peak or average power constraint", "power");
    if ((cs.peak_power && *cs.peak_power <= 0.0) || (cs.avg_power && *cs.avg_power <= 0.0))
        throw InfeasibleError("allocate_siso: nonpositive power bound",
                              cs.peak_power && *cs.peak_power <= 0.0 ? "peak_power" : "avg_power");

    // Per-state grid upper limit: the peak bound, or a finite multiple of the
    // average budget when only the long-term constraint is present.
    const double p_max = cs.peak_power ? *cs.peak_power : 8.0 * *cs.avg_power;
    const std::size_t n = problem.states.size();

    std::vector<StateEvaluator> evals;
    evals.reserve(n);
    for (const ChannelState& st : problem.states) evals.emplace_back(st, problem);

    AllocationSolution sol;
    sol.power.resize(n);
    sol.alpha.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        if (evals[i].degenerate) sol.degenerate_states.push_back(i);

    auto solve_at = [&](double lambda) {
        double avg_p = 0.0;
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const GridPoint g = best_on_grid(evals[i], p_max, problem.grid, lambda);
            sol.power[i] = g.p;
            sol.alpha[i] = g.alpha;
            avg_p += g.p;
            obj += evals[i](g.p, g.alpha);
        }
        sol.avg_power = avg_p / static_cast<double>(n);
        sol.objective = obj / static_cast<double>(n);
    };

    solve_at(0.0);
    if (cs.avg_power && sol.avg_power > *cs.avg_power) {
        // Bisection on the multiplier; E[p](lambda) is nonincreasing. Finish
        // on the feasible side of the bracket.
        double lo = 0.0;
        double hi = 1e-6;
        solve_at(hi);
        for (int i = 0; i < 80 && sol.avg_power > *cs.avg_power; ++i) {
            lo = hi;
            hi *= 2.0;
            solve_at(hi);
        }
        if (sol.avg_power > *cs.avg_power)
            throw InfeasibleError("allocate_siso: could not meet the average power budget",
                                  "avg_power");
        for (int i = 0; i < 60; ++i) {
            const double gap = (*cs.avg_power - sol.avg_power) / *cs.avg_power;
            if (sol.avg_power <= *cs.avg_power && gap < 0.01) break;
            const double mid = 0.5 * (lo + hi);
            solve_at(mid);
            if (sol.avg_power > *cs.avg_power)
                lo = mid;
            else
                hi = mid;
        }
        solve_at(hi);  // hi is always feasible
    }

    if (cs.peak_power) {
        double worst = std::numeric_limits<double>::infinity();
        for (double p : sol.power) worst = std::min(worst, *cs.peak_power - p);
        sol.slacks["peak_power"] = worst;
    }
    if (cs.avg_power) sol.slacks["avg_power"] = *cs.avg_power - sol.avg_power;
    return sol;
}

MisoRates miso_rates(const MisoBeamformingProblem& problem, const cvec& beam) {
    const cplx a = dot_conj(problem.h_direct, beam);
    const cplx b = dot_conj(problem.h_comp, beam);
    const double sig = std::norm(a);
    const double intf = std::norm(b) * problem.A_c.mean_power();
    MisoRates r;
    r.primary = std::log2(1.0 + sig / (intf + problem.sigma2));
    double acc = 0.0;
    for (const cplx& s : problem.A_s.points)
        acc += std::log2(1.0 + std::norm(b) * std::norm(s) / problem.sigma2);
    r.secondary = acc / static_cast<double>(problem.A_s.size());
    return r;
}

AllocationSolution beamform_power_min(const MisoBeamformingProblem& problem) {
    if (problem.h_direct.empty() || problem.h_direct.size() != problem.h_comp.size())
        throw ConfigError("beamform_power_min: channel dimension mismatch");
    if (problem.beta_grid < 2) throw ConfigError("beamform_power_min: beta_grid must be >= 2");
    const ConstraintSet& cs = problem.constraints;
    cs.validate();
    if (!cs.power_budget)
        throw InfeasibleError("beamform_power_min: power_budget (P_t) required", "power_budget");
    const double p_t = *cs.power_budget;
    const double r_s_min = cs.min_primary_rate.value_or(0.0);
    const double r_c_min = cs.min_secondary_rate.value_or(0.0);

    const double nd = std::sqrt(norm2(problem.h_direct));
    const double nc = std::sqrt(norm2(problem.h_comp));
    if (nd == 0.0 && r_s_min > 0.0)
        throw InfeasibleError("beamform_power_min: zero direct channel", "min_primary_rate");
    if (nc == 0.0 && r_c_min > 0.0)
        throw InfeasibleError("beamform_power_min: zero composite channel", "min_secondary_rate");

    const std::size_t m_t = problem.h_direct.size();
    auto beam_at = [&](double q, double beta) {
        cvec w(m_t);
        for (std::size_t i = 0; i < m_t; ++i) {
            const cplx ud = nd > 0.0 ? problem.h_direct[i] / nd : cplx{};
            const cplx uc = nc > 0.0 ? problem.h_comp[i] / nc : cplx{};
            w[i] = beta * ud + (1.0 - beta) * uc;
        }
        const double nw = std::sqrt(norm2(w));
        if (nw < 1e-12) return cvec{};  // direction collapse at this beta
        const double scale = std::sqrt(q) / nw;
        for (cplx& v : w) v *= scale;
        return w;
    };
    auto feasible = [&](const cvec& v) {
        if (v.empty()) return false;
        const MisoRates r = miso_rates(problem, v);
        return r.primary >= r_s_min - 1e-12 && r.secondary >= r_c_min - 1e-12;
    };

    if (r_s_min == 0.0 && r_c_min == 0.0) {
        AllocationSolution sol;
        sol.beam.assign(m_t, cplx{});
        sol.power = {0.0};
        sol.objective = 0.0;
        sol.slacks["power_budget"] = p_t;
        return sol;
    }

    double best_q = std::numeric_limits<double>::infinity();
    double best_beta = 0.0;
    bool primary_blocked = false;
    bool secondary_blocked = false;
    for (int j = 0; j <= problem.beta_grid; ++j) {
        const double beta = static_cast<double>(j) / static_cast<double>(problem.beta_grid);
        const cvec probe = beam_at(p_t, beta);
        if (probe.empty()) continue;
        if (!feasible(probe)) {
            const MisoRates r = miso_rates(problem, probe);
            if (r.primary < r_s_min) primary_blocked = true;
            if (r.secondary < r_c_min) secondary_blocked = true;
            continue;  // not feasible even at full budget: the primary rate is
                       // monotone in q for fixed beta, so no q <= P_t works
        }
        double lo = 0.0, hi = p_t;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (feasible(beam_at(mid, beta)))
                hi = mid;
            else
                lo = mid;
        }
        if (hi < best_q) {
            best_q = hi;
            best_beta = beta;
        }
    }
    if (!std::isfinite(best_q)) {
        const char* binding = primary_blocked && !secondary_blocked ? "min_primary_rate"
                              : secondary_blocked && !primary_blocked
                                  ? "min_secondary_rate"
                                  : "min_primary_rate+min_secondary_rate";
        throw InfeasibleError("beamform_power_min: rate floors unreachable within P_t", binding);
    }

    AllocationSolution sol;
    sol.beam = beam_at(best_q, best_beta);
    sol.power = {best_q};
    sol.objective = best_q;
    const MisoRates r = miso_rates(problem, sol.beam);
    sol.slacks["power_budget"] = p_t - best_q;
    sol.slacks["min_primary_rate"] = r.primary - r_s_min;
    sol.slacks["min_secondary_rate"] = r.secondary - r_c_min;
    return sol;
}

}  // namespace sr
