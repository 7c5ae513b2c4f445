#include "spinsplit/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "spinsplit/fields.hpp"
#include "spinsplit/flows.hpp"
#include "spinsplit/reference.hpp"

namespace spinsplit {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

namespace {

struct Preset {
    const char* name;
    Scheme scheme;
    double lambda;
    double alpha0;
    double temperature;
    double dt;
    long steps;
};

// The three experiment presets: a damped relaxation and two thermostatted
// runs. All use a 50x50 periodic ferromagnetic lattice with easy-plane or
// easy-axis anisotropy D = (1, 1, lambda) and a random initial state.
constexpr Preset kPresets[] = {
    {"example1", Scheme::Dissipative, 1.1, -0.5, 1.0, 0.1, 1000},
    {"example2", Scheme::Thermostatted, 0.9, 0.0, 0.04, 0.01, 2000},
    {"example3", Scheme::Thermostatted, 0.9, 0.0, 0.05, 0.05, 600},
};

void apply_preset(RunConfig& cfg, const std::string& name) {
    for (const Preset& pre : kPresets) {
        if (name == pre.name) {
            cfg.scheme = pre.scheme;
            cfg.n = 50;
            cfg.bc = BcKind::Periodic;
            cfg.jk = 1.0;
            cfg.aniso = {1.0, 1.0, pre.lambda};
            cfg.alpha0 = pre.alpha0;
            cfg.temperature = pre.temperature;
            cfg.dt = pre.dt;
            cfg.steps = pre.steps;
            return;
        }
    }
    throw UsageError("preset: unknown preset '" + name +
                     "' (expected example1, example2 or example3)");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "conservative") return Scheme::Conservative;
    if (s == "dissipative") return Scheme::Dissipative;
    if (s == "thermostatted") return Scheme::Thermostatted;
    if (s == "rk4") return Scheme::Rk4Projected;
    throw UsageError("scheme: unknown scheme '" + s +
                     "' (expected conservative, dissipative, thermostatted or rk4)");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Conservative: return "conservative";
        case Scheme::Dissipative: return "dissipative";
        case Scheme::Thermostatted: return "thermostatted";
        case Scheme::Rk4Projected: return "rk4";
    }
    return "?";
}

BcKind parse_bc(const std::string& s) {
    if (s == "periodic") return BcKind::Periodic;
    if (s == "zero") return BcKind::Zero;
    throw UsageError("bc: unknown boundary condition '" + s + "' (expected periodic or zero)");
}

void validate(const RunConfig& cfg) {
    if (cfg.n < 2) throw UsageError("n: lattice size must be at least 2");
    if (cfg.bc == BcKind::Periodic && cfg.n % 2 != 0) {
        throw UsageError("n: periodic boundaries require an even lattice size");
    }
    if (!(std::isfinite(cfg.dt)) || cfg.dt == 0.0) {
        throw UsageError("dt: time step must be finite and nonzero");
    }
    if (!std::isfinite(cfg.jk)) throw UsageError("jk: exchange integral must be finite");
    if (!is_finite(cfg.aniso)) throw UsageError("D: anisotropy must be finite");
    if (!std::isfinite(cfg.alpha0)) throw UsageError("alpha0: damping constant must be finite");
    if (!std::isfinite(cfg.temperature)) throw UsageError("temperature: must be finite");
    if ((cfg.scheme == Scheme::Thermostatted || cfg.scheme == Scheme::Rk4Projected) &&
        !(cfg.temperature > 0.0)) {
        throw UsageError("temperature: must be positive for thermostatted dynamics");
    }
    if (cfg.steps < 0) throw UsageError("steps: must be non-negative");
    if (cfg.record_every < 1) throw UsageError("record-every: must be at least 1");
    if (cfg.snapshot_every < 0) throw UsageError("snapshot-every: must be non-negative");
    if (!(cfg.scan_horizon > 0.0)) throw UsageError("horizon: must be positive");
    if (cfg.scan_dts.empty()) throw UsageError("dts: need at least one step size");
    for (double dt : cfg.scan_dts) {
        if (!(dt > 0.0)) throw UsageError("dts: step sizes must be positive");
    }
    if (cfg.scan_seeds.empty()) throw UsageError("seeds: need at least one seed");
}

}  // namespace

BoundaryCondition RunConfig::boundary() const {
    switch (bc) {
        case BcKind::Periodic: return BoundaryCondition::periodic();
        case BcKind::Zero: return BoundaryCondition::zero();
        case BcKind::Fixed: break;
    }
    throw std::logic_error("fixed boundaries are not configurable from the command line");
}

ModelParams RunConfig::params() const {
    ModelParams p;
    p.jk = jk;
    p.anisotropy = aniso;
    p.alpha0 = alpha0;
    p.temperature = temperature;
    p.coupling = 1.0 / n;
    return p;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    // First pass: the preset, so its values become the defaults every other
    // source (config file, then explicit flags) overrides.
    RunConfig cfg;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--preset" && i + 1 < args.size()) {
            apply_preset(cfg, args[i + 1]);
        } else if (args[i].rfind("--preset=", 0) == 0) {
            apply_preset(cfg, args[i].substr(std::strlen("--preset=")));
        }
    }

    CLI::App app{"structure-preserving lattice spin dynamics"};
    app.allow_config_extras(false);

    std::string preset_name;
    std::string scheme_str = scheme_name(cfg.scheme);
    std::string bc_str = cfg.bc == BcKind::Periodic ? "periodic" : "zero";
    std::string out_str = cfg.out_dir.string();
    double lambda = 0.0;
    std::vector<double> dvec;

    app.add_option("--preset", preset_name, "experiment preset (example1|example2|example3)")
        ->configurable(false);
    app.set_config("--config", "", "flat key = value configuration file")->configurable(false);
    app.add_option("--scheme", scheme_str, "conservative|dissipative|thermostatted|rk4");
    app.add_option("--n", cfg.n, "lattice side length");
    app.add_option("--bc", bc_str, "boundary condition (periodic|zero)");
    app.add_option("--jk", cfg.jk, "exchange integral");
    auto* lambda_opt =
        app.add_option("--lambda", lambda, "anisotropy shorthand, sets D = (1, 1, lambda)");
    auto* d_opt = app.add_option("--D", dvec, "anisotropy diagonal, three comma-separated values")
                      ->delimiter(',')
                      ->expected(3);
    lambda_opt->excludes(d_opt);
    d_opt->excludes(lambda_opt);
    app.add_option("--alpha0", cfg.alpha0, "damping constant / initial thermostat variable");
    app.add_option("--temperature", cfg.temperature, "thermostat target temperature");
    app.add_option("--dt", cfg.dt, "time step");
    app.add_option("--steps", cfg.steps, "number of steps");
    app.add_option("--seed", cfg.seed, "random initial-state seed");
    app.add_option("--record-every", cfg.record_every, "series recording cadence");
    app.add_option("--snapshot-every", cfg.snapshot_every, "snapshot cadence (0 = never)");
    app.add_option("--out", out_str, "output directory");
    app.add_option("--dts", cfg.scan_dts, "scan: comma-separated step sizes")->delimiter(',');
    app.add_option("--horizon", cfg.scan_horizon, "scan: time horizon per run");
    app.add_option("--seeds", cfg.scan_seeds, "scan: comma-separated seeds")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        throw ExitRequest{0};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    cfg.scheme = parse_scheme(scheme_str);
    cfg.bc = parse_bc(bc_str);
    cfg.out_dir = out_str;
    if (lambda_opt->count() > 0) cfg.aniso = {1.0, 1.0, lambda};
    if (d_opt->count() > 0) cfg.aniso = {dvec[0], dvec[1], dvec[2]};
    validate(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

void write_snapshot(const SpinLattice& lat, const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open snapshot file " + path.string());
    const int n = lat.size();
    f << "P5\n" << n << " " << n << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double v = 255.0 * (lat.spin(i, j).z + 1.0) / 2.0;
            const long pix = std::lround(std::min(255.0, std::max(0.0, v)));
            row[static_cast<std::size_t>(j - 1)] = static_cast<unsigned char>(pix);
        }
        f.write(reinterpret_cast<const char*>(row.data()), n);
    }
    if (!f) throw std::runtime_error("failed writing snapshot file " + path.string());
}

namespace {

void append_real(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

}  // namespace

void write_series(std::span<const RunRecord> records, const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open series file " + path.string());
    f << "step,time,energy,alpha,max_laplacian,max_norm_drift\n";
    for (const RunRecord& r : records) {
        std::string line = std::to_string(r.step);
        for (double v : {r.time, r.energy, r.alpha, r.max_laplacian, r.max_norm_drift}) {
            line += ',';
            append_real(line, v);
        }
        line += '\n';
        f << line;
    }
    if (!f) throw std::runtime_error("failed writing series file " + path.string());
}

std::vector<RunRecord> read_series(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open series file " + path.string());
    std::string line;
    if (!std::getline(f, line) || line != "step,time,energy,alpha,max_laplacian,max_norm_drift") {
        throw std::runtime_error("bad series header in " + path.string());
    }
    std::vector<RunRecord> records;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        RunRecord r;
        auto next = [&]() -> std::string {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error("short series row in " + path.string());
            }
            return field;
        };
        r.step = std::stol(next());
        r.time = std::stod(next());
        r.energy = std::stod(next());
        r.alpha = std::stod(next());
        r.max_laplacian = std::stod(next());
        r.max_norm_drift = std::stod(next());
        records.push_back(r);
    }
    return records;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

namespace {

std::string snapshot_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%08ld.pgm", step);
    return buf;
}

int cmd_simulate(const std::vector<std::string>& args) {
    const RunConfig cfg = parse_config(args);
    fs::create_directories(cfg.out_dir);
    ThermoState initial{random_lattice(cfg.n, cfg.seed, cfg.boundary()), cfg.alpha0};
    const ModelParams p = cfg.params();

    auto observer = [&](long step, const ThermoState& s) {
        if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) {
            write_snapshot(s.lat, cfg.out_dir / snapshot_name(step));
        }
    };
    const RunResult res =
        run(std::move(initial), p, cfg.scheme, cfg.dt, cfg.steps, cfg.record_every, observer);
    write_series(res.records, cfg.out_dir / "series.csv");
    if (res.blew_up) {
        std::fprintf(stderr, "blow-up detected at step %ld (t = %g); run halted\n",
                     res.blowup_step, res.blowup_step * cfg.dt);
        return 3;
    }
    return 0;
}

int cmd_scan(const std::vector<std::string>& args) {
    const RunConfig cfg = parse_config(args);
    fs::create_directories(cfg.out_dir);
    const auto results = stability_scan(cfg.n, cfg.boundary(), cfg.params(), cfg.scheme,
                                        cfg.scan_dts, cfg.scan_horizon, cfg.scan_seeds);
    const fs::path path = cfg.out_dir / "scan.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open scan file " + path.string());
    f << "dt,seed,survived_until,blew_up\n";
    for (const StabilityScanResult& r : results) {
        std::string line;
        append_real(line, r.dt);
        line += ',';
        line += std::to_string(r.seed);
        line += ',';
        append_real(line, r.survived_until);
        line += ',';
        line += r.blew_up ? '1' : '0';
        line += '\n';
        f << line;
    }
    if (!f) throw std::runtime_error("failed writing scan file " + path.string());
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the structural invariant battery
// ---------------------------------------------------------------------------

struct CheckContext {
    int failures = 0;

    void report(const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s  %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
};

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 v;
    double r = 0.0;
    do {
        v = {gauss(rng), gauss(rng), gauss(rng)};
        r = norm(v);
    } while (r < 1e-12);
    return v * (1.0 / r);
}

void check_flow_norms(CheckContext& ctx) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> mag(0.1, 10.0);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> tim(0.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const Vec3 z = random_unit(rng);
        const Vec3 b = mag(rng) * random_unit(rng);
        const double a = amp(rng);
        const double t = tim(rng);
        worst = std::max(worst, std::abs(norm(precession_flow(z, b, t)) - 1.0));
        worst = std::max(worst, std::abs(norm(gilbert_flow(z, b, a, t)) - 1.0));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max | |z'| - 1 | = %.3g over 2000 random flows", worst);
    ctx.report("flow norm preservation", worst <= 1e-12, buf);
}

void check_gilbert_oracle(CheckContext& ctx) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> logmag(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> tim(0.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 24; ++k) {
        const Vec3 z = random_unit(rng);
        const Vec3 b = std::exp(logmag(rng)) * random_unit(rng);
        const double a = amp(rng);
        const double t = tim(rng);
        const Vec3 closed = gilbert_flow(z, b, a, t);
        const Vec3 ref = reference_gilbert(z, b, a, t);
        const Vec3 d = closed - ref;
        worst = std::max({worst, std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max component error vs adaptive reference = %.3g", worst);
    ctx.report("damping flow matches reference integration", worst <= 1e-7, buf);
}

void check_gilbert_spot(CheckContext& ctx) {
    const Vec3 got = gilbert_flow({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, 1.0, 1.0);
    const Vec3 want{1.0 / std::cosh(1.0), 0.0, -std::tanh(1.0)};
    const Vec3 d = got - want;
    const double err = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    char buf[96];
    std::snprintf(buf, sizeof buf, "analytic sech/tanh value, error = %.3g", err);
    ctx.report("damping flow spot value", err <= 1e-12, buf);
}

void check_angle_branches(CheckContext& ctx) {
    // Extended-precision evaluation of the arctangent form, valid as long as
    // C is not too extreme; used to pin the series branches near the switch.
    auto exact = [](double v0, double b, double a, double t) {
        const long double lb = b, lv = v0;
        const long double c = sqrtl((lb - lv) / (lb + lv));
        const long double e = expl((long double)a * lb * (long double)t);
        return (double)((c * c + 1.0L) / (lb * c) * (atanl(c) - atanl(c * e)));
    };
    double worst = 0.0;
    for (const double b : {0.5, 1.0, 4.0}) {
        for (const double a : {-1.0, 0.3, 1.0}) {
            for (const double t : {0.2, 1.0}) {
                for (const double delta : {0.5e-4, 0.99e-4, 1.01e-4, 2e-4}) {
                    worst = std::max(worst, std::abs(gilbert_angle(b - delta, b, a, t) -
                                                     exact(b - delta, b, a, t)));
                    worst = std::max(worst, std::abs(gilbert_angle(-b + delta, b, a, t) -
                                                     exact(-b + delta, b, a, t)));
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |g - extended-precision g| = %.3g near switch", worst);
    ctx.report("damping angle branch consistency", worst <= 1e-9, buf);
}

void check_conservative_energy(CheckContext& ctx) {
    ModelParams p;
    p.jk = 1.0;
    p.anisotropy = {1.0, 1.0, 1.0};
    ThermoState s{random_lattice(16, 42, BoundaryCondition::periodic()), 0.0};
    const double e0 = total_energy(s.lat, p);
    double drift = 0.0, norm_drift = 0.0;
    for (int k = 0; k < 2000; ++k) {
        s = conservative_step(std::move(s), p, 0.1);
        drift = std::max(drift, std::abs(total_energy(s.lat, p) - e0));
        for (const Vec3& z : s.lat.data()) {
            norm_drift = std::max(norm_drift, std::abs(norm(z) - 1.0));
        }
    }
    const double rel = drift / std::abs(e0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "relative drift %.3g, norm drift %.3g over 2000 steps", rel,
                  norm_drift);
    ctx.report("isotropic energy conservation", rel <= 1e-8 && norm_drift <= 1e-10, buf);
}

void check_conservative_reversal(CheckContext& ctx) {
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 0.9};
    const ThermoState s0{random_lattice(8, 7, BoundaryCondition::periodic()), 0.0};
    ThermoState s = conservative_step(s0, p, 0.05);
    s = conservative_step(std::move(s), p, -0.05);
    const double defect = state_distance(s0, s);
    char buf[96];
    std::snprintf(buf, sizeof buf, "forward/backward defect = %.3g", defect);
    ctx.report("conservative time reversal", defect <= 1e-12, buf);
}

void check_thermostat_reversibility(CheckContext& ctx) {
    // Gentle thermostat: at small n and low T the demon is stiff enough that
    // its chaos amplifies roundoff past any fixed tolerance within a few
    // steps, which says nothing about the composition itself.
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 0.9};
    p.temperature = 0.5;
    p.coupling = 1.0 / 8.0;
    const ThermoState s{random_lattice(8, 3, BoundaryCondition::periodic()), 0.0};
    const double defect = reversibility_defect(s, p, 0.01, 10);
    char buf[96];
    std::snprintf(buf, sizeof buf, "round-trip defect after 10 steps = %.3g", defect);
    ctx.report("thermostat R-reversibility", defect <= 1e-8, buf);
}

void check_gradient_consistency(CheckContext& ctx) {
    ModelParams p;
    p.jk = -0.7;
    p.anisotropy = {1.0, 1.0, 0.9};
    SpinLattice lat = random_lattice(6, 11, BoundaryCondition::periodic());
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 1; i <= 6; ++i) {
        for (int j = 1; j <= 6; ++j) {
            const Vec3 field = effective_field(lat, p, i, j);
            const Vec3 z = lat.spin(i, j);
            Vec3 fd;
            for (int c = 0; c < 3; ++c) {
                Vec3 zp = z, zm = z;
                zp[c] += h;
                zm[c] -= h;
                lat.set_spin(i, j, zp);
                const double ep = total_energy(lat, p);
                lat.set_spin(i, j, zm);
                const double em = total_energy(lat, p);
                lat.set_spin(i, j, z);
                fd[c] = (ep - em) / (2.0 * h);
            }
            worst = std::max(worst, norm(fd - field) / norm(field));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max relative gradient mismatch = %.3g", worst);
    ctx.report("energy gradient matches effective field", worst <= 1e-6, buf);
}

// Independent bond-enumeration route to the energy: every interior-interior
// bond once at full weight, boundary-resolved bonds once at half weight.
double bond_energy(const SpinLattice& lat, const ModelParams& p) {
    const int n = lat.size();
    const Vec3 m = p.m_diag();
    const bool periodic = lat.bc().kind() == BcKind::Periodic;
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const Vec3 z = lat.spin(i, j);
            const int jr = j + 1, ib = i + 1;
            if (jr <= n || periodic) {
                acc += dot(z, cmul(m, lat.site(i, jr)));
            } else {
                acc += 0.5 * dot(z, cmul(m, lat.site(i, jr)));
            }
            if (ib <= n || periodic) {
                acc += dot(z, cmul(m, lat.site(ib, j)));
            } else {
                acc += 0.5 * dot(z, cmul(m, lat.site(ib, j)));
            }
            if (!periodic) {
                // bonds to the top and left borders are seen from this side only
                if (i == 1) acc += 0.5 * dot(z, cmul(m, lat.site(0, j)));
                if (j == 1) acc += 0.5 * dot(z, cmul(m, lat.site(i, 0)));
            }
        }
    }
    return -p.jk * acc;
}

void check_energy_routes(CheckContext& ctx) {
    ModelParams p;
    p.jk = 1.3;
    p.anisotropy = {0.2, 1.0, 0.9};
    double worst = 0.0;
    for (auto bc : {BoundaryCondition::periodic(), BoundaryCondition::zero()}) {
        const SpinLattice lat = random_lattice(6, 19, bc);
        const double a = total_energy(lat, p);
        const double b = bond_energy(lat, p);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "site-sum vs bond-sum relative gap = %.3g", worst);
    ctx.report("energy summation routes agree", worst <= 1e-12, buf);
}

void check_dissipativity(CheckContext& ctx) {
    ModelParams p;
    p.jk = 1.0;
    p.anisotropy = {1.0, 1.0, 1.1};
    p.alpha0 = -0.5;
    ThermoState s{random_lattice(16, 5, BoundaryCondition::periodic()), p.alpha0};
    double prev = total_energy(s.lat, p);
    bool monotone = true;
    double worst_rise = 0.0;
    for (int k = 0; k < 300; ++k) {
        s = dissipative_step(std::move(s), p, 0.1);
        const double e = total_energy(s.lat, p);
        const double rise = e - prev;
        worst_rise = std::max(worst_rise, rise);
        if (rise > 1e-10 * std::abs(prev)) monotone = false;
        prev = e;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "largest per-step energy rise = %.3g over 300 steps",
                  worst_rise);
    ctx.report("damped scheme dissipates monotonically", monotone, buf);
}

void check_orders(CheckContext& ctx) {
    // Moderate temperature keeps the demon's timescale resolvable by the
    // coarsest step, so the fits sit in the asymptotic regime.
    const std::vector<double> dts{0.05, 0.025, 0.0125};
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 0.9};
    p.alpha0 = -0.5;
    p.temperature = 0.5;
    p.coupling = 1.0 / 6.0;
    const ThermoState s{random_lattice(6, 23, BoundaryCondition::periodic()), 0.0};
    for (auto [scheme, label] : {std::pair{Scheme::Conservative, "conservative"},
                                 std::pair{Scheme::Dissipative, "dissipative"},
                                 std::pair{Scheme::Thermostatted, "thermostatted"}}) {
        const double order = convergence_order(s, p, scheme, 0.5, dts);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s scheme fitted order = %.3f", label, order);
        ctx.report(std::string("second-order convergence (") + label + ")",
                   std::abs(order - 2.0) <= 0.2, buf);
    }
    const std::vector<double> rk_dts{0.025, 0.0125, 0.00625};
    const ThermoState s4{random_lattice(4, 29, BoundaryCondition::periodic()), 0.0};
    ModelParams p4 = p;
    p4.coupling = 1.0 / 4.0;
    const double order4 = convergence_order(s4, p4, Scheme::Rk4Projected, 0.25, rk_dts);
    char buf[96];
    std::snprintf(buf, sizeof buf, "projected RK4 fitted order = %.3f", order4);
    ctx.report("fourth-order convergence (projected RK4)", std::abs(order4 - 4.0) <= 0.3, buf);
}

int cmd_verify(const std::vector<std::string>& args) {
    if (!args.empty()) throw UsageError("verify takes no options");
    CheckContext ctx;
    check_flow_norms(ctx);
    check_gilbert_oracle(ctx);
    check_gilbert_spot(ctx);
    check_angle_branches(ctx);
    check_conservative_energy(ctx);
    check_conservative_reversal(ctx);
    check_thermostat_reversibility(ctx);
    check_gradient_consistency(ctx);
    check_energy_routes(ctx);
    check_dissipativity(ctx);
    check_orders(ctx);
    if (ctx.failures > 0) {
        std::fprintf(stderr, "verify: %d check(s) failed\n", ctx.failures);
        return 2;
    }
    std::printf("all checks passed\n");
    return 0;
}

void print_usage(std::FILE* out) {
    std::fprintf(out,
                 "usage: spinsim <simulate|verify|scan> [options]\n"
                 "  simulate   run a scheme, writing series.csv and PGM snapshots\n"
                 "  verify     run the structural invariant suite\n"
                 "  scan       stability scan over step sizes and seeds, writing scan.csv\n"
                 "run 'spinsim simulate --help' for the option list\n");
}

}  // namespace

int run_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage(args.empty() ? stderr : stdout);
        return args.empty() ? 1 : 0;
    }
    const std::string cmd = args[0];
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (cmd == "simulate") return cmd_simulate(rest);
        if (cmd == "verify") return cmd_verify(rest);
        if (cmd == "scan") return cmd_scan(rest);
        std::fprintf(stderr, "unknown subcommand '%s'\n", cmd.c_str());
        print_usage(stderr);
        return 1;
    } catch (const ExitRequest& e) {
        return e.code;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace spinsplit
