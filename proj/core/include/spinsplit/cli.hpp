#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinsplit/diagnostics.hpp"
#include "spinsplit/integrators.hpp"
#include "spinsplit/lattice.hpp"

namespace spinsplit {

/// Invalid command line or configuration; reported with exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// --help and friends: output already produced, exit with the given code.
struct ExitRequest {
    int code = 0;
};

/// Fully resolved run configuration. Produced by parse_config from flags,
/// an optional `key = value` config file, and the experiment presets.
struct RunConfig {
    Scheme scheme = Scheme::Conservative;
    int n = 50;
    BcKind bc = BcKind::Periodic;
    double jk = 1.0;
    Vec3 aniso{0.0, 0.0, 0.0};
    double alpha0 = 0.0;
    double temperature = 1.0;
    double dt = 0.01;
    long steps = 100;
    std::uint64_t seed = 1;
    long record_every = 1;
    long snapshot_every = 0;  // 0 = never
    std::filesystem::path out_dir = "out";

    // scan-only knobs
    std::vector<double> scan_dts = {0.02, 0.015, 0.012, 0.01};
    double scan_horizon = 5.0;
    std::vector<std::uint64_t> scan_seeds = {1, 2, 3};

    BoundaryCondition boundary() const;
    ModelParams params() const;  // coupling fixed to 1/n
};

/// Parses run flags (everything after the subcommand). Precedence, lowest to
/// highest: built-in defaults, --preset values, config-file values, explicit
/// flags. Unknown flags and unknown config keys are rejected. Throws
/// UsageError with a message naming the offending field, or ExitRequest when
/// help was requested.
RunConfig parse_config(const std::vector<std::string>& args);

/// Binary 8-bit PGM ("P5") snapshot of the spin z-components, maxval 255,
/// pixel = round(255 (z + 1) / 2), rows top to bottom. Byte-exact for a given
/// lattice.
void write_snapshot(const SpinLattice& lat, const std::filesystem::path& path);

/// CSV series `step,time,energy,alpha,max_laplacian,max_norm_drift`, reals
/// with 17 significant digits so values round-trip exactly.
void write_series(std::span<const RunRecord> records, const std::filesystem::path& path);
std::vector<RunRecord> read_series(const std::filesystem::path& path);

/// `simulate`, `verify` and `scan` subcommand drivers. Exit codes: 0 success,
/// 1 usage error, 2 runtime or verification failure, 3 blow-up halt.
int run_main(int argc, const char* const* argv);

}  // namespace spinsplit
