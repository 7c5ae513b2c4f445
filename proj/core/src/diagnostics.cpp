#include "spinsplit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinsplit/fields.hpp"
#include "spinsplit/reference.hpp"

namespace spinsplit {

RunRecord make_record(const ThermoState& state, const ModelParams& p, long step, double dt) {
    RunRecord rec;
    rec.step = step;
    rec.time = step * dt;
    rec.energy = total_energy(state.lat, p);
    rec.alpha = state.alpha;
    rec.max_laplacian = max_laplacian_norm(state.lat);
    double drift = 0.0;
    for (const Vec3& z : state.lat.data()) {
        drift = std::max(drift, std::abs(norm(z) - 1.0));
    }
    rec.max_norm_drift = drift;
    return rec;
}

RunResult run(ThermoState initial, const ModelParams& p, Scheme scheme, double dt, long steps,
              long record_every, const std::function<void(long, const ThermoState&)>& observer) {
    if (steps < 0) throw std::invalid_argument("run: steps must be non-negative");
    if (record_every < 1) throw std::invalid_argument("run: record_every must be at least 1");

    RunResult res{.records = {}, .final_state = std::move(initial)};
    res.records.push_back(make_record(res.final_state, p, 0, dt));
    if (observer) observer(0, res.final_state);

    for (long k = 1; k <= steps; ++k) {
        res.final_state = step(std::move(res.final_state), p, scheme, dt);
        const bool blown = detect_blowup(res.final_state);
        if (blown || k % record_every == 0 || k == steps) {
            RunRecord rec = make_record(res.final_state, p, k, dt);
            rec.blew_up = blown;
            res.records.push_back(rec);
        }
        if (observer) observer(k, res.final_state);
        if (blown) {
            res.blew_up = true;
            res.blowup_step = k;
            break;
        }
    }
    return res;
}

double reversibility_defect(const ThermoState& state, const ModelParams& p, double dt,
                            int nsteps) {
    auto reverse = [](ThermoState s) {
        for (Vec3& z : s.lat.data()) z = -z;
        s.alpha = -s.alpha;
        return s;
    };
    ThermoState cur = state;
    for (int k = 0; k < nsteps; ++k) cur = thermostat_step(std::move(cur), p, dt);
    cur = reverse(std::move(cur));
    for (int k = 0; k < nsteps; ++k) cur = thermostat_step(std::move(cur), p, dt);
    cur = reverse(std::move(cur));
    return state_distance(state, cur);
}

Dynamics dynamics_for(Scheme scheme) {
    switch (scheme) {
        case Scheme::Conservative:
            return Dynamics::Conservative;
        case Scheme::Dissipative:
            return Dynamics::Dissipative;
        case Scheme::Thermostatted:
        case Scheme::Rk4Projected:
            return Dynamics::Thermostatted;
    }
    throw std::logic_error("unreachable scheme kind");
}

double convergence_order(const ThermoState& state, const ModelParams& p, Scheme scheme,
                         double t_end, std::span<const double> dt_list) {
    if (dt_list.size() < 2) {
        throw std::invalid_argument("convergence_order: need at least two step sizes");
    }
    ThermoState ref = reference_solve(state, p, dynamics_for(scheme), t_end);
    normalize_spins(ref);
    if (detect_blowup(ref)) {
        throw std::runtime_error("convergence_order: reference solution blew up");
    }

    std::vector<double> logdt, logerr;
    for (const double dt : dt_list) {
        const double steps_real = t_end / dt;
        const long steps = std::lround(steps_real);
        if (steps < 1 || std::abs(steps_real - steps) > 1e-9 * steps) {
            throw std::invalid_argument("convergence_order: dt must divide t_end");
        }
        ThermoState cur = state;
        for (long k = 0; k < steps; ++k) cur = step(std::move(cur), p, scheme, dt);
        logdt.push_back(std::log(dt));
        logerr.push_back(std::log(state_distance(cur, ref)));
    }

    const double m = static_cast<double>(logdt.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < logdt.size(); ++k) {
        sx += logdt[k];
        sy += logerr[k];
        sxx += logdt[k] * logdt[k];
        sxy += logdt[k] * logerr[k];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<StabilityScanResult> stability_scan(int n, const BoundaryCondition& bc,
                                                const ModelParams& p, Scheme scheme,
                                                std::span<const double> dt_list, double horizon,
                                                std::span<const std::uint64_t> seeds) {
    if (!(horizon > 0.0)) throw std::invalid_argument("stability_scan: horizon must be positive");
    std::vector<StabilityScanResult> results;
    results.reserve(dt_list.size() * seeds.size());
    for (const double dt : dt_list) {
        const long steps = static_cast<long>(std::ceil(horizon / dt));
        for (const std::uint64_t seed : seeds) {
            ThermoState state{random_lattice(n, seed, bc), p.alpha0};
            StabilityScanResult r{.dt = dt, .seed = seed, .survived_until = horizon,
                                  .blew_up = false};
            for (long k = 1; k <= steps; ++k) {
                state = step(std::move(state), p, scheme, dt);
                if (detect_blowup(state)) {
                    r.blew_up = true;
                    r.survived_until = (k - 1) * dt;
                    break;
                }
            }
            results.push_back(r);
        }
    }
    return results;
}

}  // namespace spinsplit
