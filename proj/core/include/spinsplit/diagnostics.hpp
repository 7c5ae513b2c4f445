#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spinsplit/integrators.hpp"
#include "spinsplit/lattice.hpp"

namespace spinsplit {

/// One row of the per-step diagnostic series.
struct RunRecord {
    long step = 0;
    double time = 0.0;
    double energy = 0.0;
    double alpha = 0.0;
    double max_laplacian = 0.0;
    double max_norm_drift = 0.0;  // max_ij | |z_ij| - 1 |
    bool blew_up = false;         // set on the record at which the run halted
};

struct RunResult {
    std::vector<RunRecord> records;
    ThermoState final_state;
    bool blew_up = false;
    long blowup_step = -1;
};

/// Advances `steps` steps of the scheme, recording every `record_every`
/// steps and always at step 0 and the final step. Halts early when a blow-up
/// is detected, marking the final record. The optional observer is invoked
/// after every step (and once for the initial state) with the step index.
RunResult run(ThermoState initial, const ModelParams& p, Scheme scheme, double dt, long steps,
              long record_every,
              const std::function<void(long, const ThermoState&)>& observer = {});

/// Round-trip defect of the thermostatted scheme under the reversing
/// involution R: (z, alpha) -> (-z, -alpha): max-norm distance between the
/// initial state and R(Phi^n(R(Phi^n(state)))). Roundoff-sized when the
/// composition is exactly R-reversible.
double reversibility_defect(const ThermoState& state, const ModelParams& p, double dt, int nsteps);

/// Least-squares slope of log(global error) vs log(dt) at time t_end,
/// errors measured in max norm against the adaptive reference solution
/// (reference spins renormalised before comparison). dt_list entries must
/// divide t_end into whole steps.
double convergence_order(const ThermoState& state, const ModelParams& p, Scheme scheme,
                         double t_end, std::span<const double> dt_list);

struct StabilityScanResult {
    double dt = 0.0;
    std::uint64_t seed = 0;
    double survived_until = 0.0;  // time of last state before blow-up, or the horizon
    bool blew_up = false;
};

/// Runs the scheme from a fresh random lattice for every (dt, seed) pair
/// until blow-up or the horizon, reporting first-failure times.
std::vector<StabilityScanResult> stability_scan(int n, const BoundaryCondition& bc,
                                                const ModelParams& p, Scheme scheme,
                                                std::span<const double> dt_list, double horizon,
                                                std::span<const std::uint64_t> seeds);

/// Dynamics integrated by the reference solver when checking this scheme.
Dynamics dynamics_for(Scheme scheme);

RunRecord make_record(const ThermoState& state, const ModelParams& p, long step, double dt);

}  // namespace spinsplit
