#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spinsplit/cli.hpp"

using namespace spinsplit;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("spinsplit_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("preset example2 installs the thermostat experiment") {
    const RunConfig cfg = parse_config({"--preset", "example2"});
    CHECK(cfg.scheme == Scheme::Thermostatted);
    CHECK(cfg.n == 50);
    CHECK(cfg.bc == BcKind::Periodic);
    CHECK(cfg.jk == 1.0);
    CHECK(cfg.aniso == Vec3{1.0, 1.0, 0.9});
    CHECK(cfg.temperature == 0.04);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.steps == 2000);
    CHECK(cfg.params().coupling == doctest::Approx(1.0 / 50.0));
}

TEST_CASE("flags override preset values regardless of order") {
    const RunConfig a = parse_config({"--preset", "example1", "--dt", "0.05"});
    CHECK(a.scheme == Scheme::Dissipative);
    CHECK(a.aniso == Vec3{1.0, 1.0, 1.1});
    CHECK(a.alpha0 == -0.5);
    CHECK(a.dt == 0.05);

    const RunConfig b = parse_config({"--dt", "0.05", "--preset", "example1"});
    CHECK(b.dt == 0.05);
}

TEST_CASE("configuration rejections name the offending field") {
    CHECK_THROWS_WITH_AS(parse_config({"--n", "51", "--bc", "periodic"}),
                         doctest::Contains("n:"), UsageError);
    CHECK_THROWS_AS(parse_config({"--preset", "example9"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--scheme", "leapfrog"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--bogus", "1"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--lambda", "1.1", "--D", "1,1,1"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--scheme", "thermostatted", "--temperature", "0"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--dt", "0"}), UsageError);
}

TEST_CASE("lambda shorthand expands to D = (1, 1, lambda)") {
    const RunConfig cfg = parse_config({"--lambda", "3"});
    CHECK(cfg.aniso == Vec3{1.0, 1.0, 3.0});
    const RunConfig d = parse_config({"--D", "0.5,1,2"});
    CHECK(d.aniso == Vec3{0.5, 1.0, 2.0});
}

TEST_CASE("config files supply values, flags override, unknown keys rejected") {
    const fs::path dir = temp_dir("config");
    const fs::path file = dir / "run.cfg";
    {
        std::ofstream f(file);
        f << "# experiment configuration\n"
          << "dt = 0.25\n"
          << "steps = 7\n"
          << "seed = 99\n";
    }
    const RunConfig cfg = parse_config({"--config", file.string()});
    CHECK(cfg.dt == 0.25);
    CHECK(cfg.steps == 7);
    CHECK(cfg.seed == 99);

    const RunConfig overridden = parse_config({"--config", file.string(), "--dt", "0.5"});
    CHECK(overridden.dt == 0.5);
    CHECK(overridden.steps == 7);

    // file values override preset defaults
    const RunConfig layered = parse_config({"--preset", "example1", "--config", file.string()});
    CHECK(layered.dt == 0.25);
    CHECK(layered.aniso == Vec3{1.0, 1.0, 1.1});

    {
        std::ofstream f(file, std::ios::app);
        f << "mystery_knob = 3\n";
    }
    CHECK_THROWS_AS(parse_config({"--config", file.string()}), UsageError);
}

TEST_CASE("snapshots are byte-exact PGM images") {
    const fs::path dir = temp_dir("pgm");

    SpinLattice up(4, BoundaryCondition::periodic(), {0.0, 0.0, 1.0});
    write_snapshot(up, dir / "up.pgm");
    const std::string white = slurp(dir / "up.pgm");
    CHECK(white.substr(0, 10) == "P5\n4 4\n255");
    REQUIRE(white.size() == 11 + 16);
    for (std::size_t k = 11; k < white.size(); ++k) {
        CHECK(static_cast<unsigned char>(white[k]) == 255);
    }

    SpinLattice down(4, BoundaryCondition::periodic(), {0.0, 0.0, -1.0});
    write_snapshot(down, dir / "down.pgm");
    const std::string black = slurp(dir / "down.pgm");
    for (std::size_t k = 11; k < black.size(); ++k) {
        CHECK(static_cast<unsigned char>(black[k]) == 0);
    }

    SpinLattice side(4, BoundaryCondition::periodic(), {1.0, 0.0, 0.0});
    write_snapshot(side, dir / "side.pgm");
    const std::string grey = slurp(dir / "side.pgm");
    CHECK(static_cast<unsigned char>(grey[11]) == 128);  // round(255/2)
}

TEST_CASE("snapshot pixel mapping is monotone in the z component") {
    SpinLattice lat(4, BoundaryCondition::zero());
    std::vector<double> zs{-1.0, -0.31, 0.12, 0.9};
    for (int j = 1; j <= 4; ++j) {
        const double zc = zs[static_cast<std::size_t>(j - 1)];
        const double xc = std::sqrt(1.0 - zc * zc);
        for (int i = 1; i <= 4; ++i) lat.set_spin(i, j, {xc, 0.0, zc});
    }
    const fs::path dir = temp_dir("pgm_mono");
    write_snapshot(lat, dir / "m.pgm");
    const std::string bytes = slurp(dir / "m.pgm");
    for (int j = 0; j + 1 < 4; ++j) {
        CHECK(static_cast<unsigned char>(bytes[11 + j]) <
              static_cast<unsigned char>(bytes[11 + j + 1]));
    }
}

TEST_CASE("series files round-trip exactly") {
    const fs::path dir = temp_dir("series");

    write_series({}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "step,time,energy,alpha,max_laplacian,max_norm_drift\n");

    std::vector<RunRecord> records;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    for (long k = 0; k < 20; ++k) {
        RunRecord r;
        r.step = k * 3;
        r.time = u(rng) * 1e-3;
        r.energy = u(rng);
        r.alpha = u(rng) * 1e-8;
        r.max_laplacian = std::abs(u(rng)) * 1e6;
        r.max_norm_drift = std::abs(u(rng)) * 1e-18;
        records.push_back(r);
    }
    write_series(records, dir / "s.csv");
    const auto back = read_series(dir / "s.csv");
    REQUIRE(back.size() == records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        CHECK(back[k].step == records[k].step);
        CHECK(back[k].time == records[k].time);  // bit-exact through %.17g
        CHECK(back[k].energy == records[k].energy);
        CHECK(back[k].alpha == records[k].alpha);
        CHECK(back[k].max_laplacian == records[k].max_laplacian);
        CHECK(back[k].max_norm_drift == records[k].max_norm_drift);
    }

    RunRecord single;
    single.step = 0;
    write_series(std::vector<RunRecord>{single}, dir / "one.csv");
    std::istringstream ss(slurp(dir / "one.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(ss, line)) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("simulate subcommand writes deterministic outputs") {
    const fs::path a = temp_dir("sim_a");
    const fs::path b = temp_dir("sim_b");
    auto invoke = [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"spinsim"};
        for (const auto& s : args) argv.push_back(s.c_str());
        return run_main(static_cast<int>(argv.size()), argv.data());
    };

    for (const fs::path& out : {a, b}) {
        const int rc = invoke({"simulate", "--scheme", "conservative", "--n", "6", "--lambda",
                               "1.1", "--dt", "0.05", "--steps", "8", "--seed", "5",
                               "--snapshot-every", "4", "--out", out.string()});
        CHECK(rc == 0);
    }
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    CHECK(slurp(a / "snap_00000000.pgm") == slurp(b / "snap_00000000.pgm"));
    CHECK(slurp(a / "snap_00000008.pgm") == slurp(b / "snap_00000008.pgm"));
    CHECK(fs::exists(a / "snap_00000004.pgm"));
    CHECK_FALSE(fs::exists(a / "snap_00000001.pgm"));

    const auto series = read_series(a / "series.csv");
    CHECK(series.size() == 9);  // recorded every step including 0
}

TEST_CASE("scan subcommand writes the dt/seed table") {
    const fs::path dir = temp_dir("scan");
    auto invoke = [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"spinsim"};
        for (const auto& s : args) argv.push_back(s.c_str());
        return run_main(static_cast<int>(argv.size()), argv.data());
    };
    const int rc = invoke({"scan", "--scheme", "thermostatted", "--n", "8", "--lambda", "0.9",
                           "--temperature", "0.5", "--dts", "0.05,0.02", "--horizon", "0.2",
                           "--seeds", "1,2", "--out", dir.string()});
    CHECK(rc == 0);
    const std::string csv = slurp(dir / "scan.csv");
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "dt,seed,survived_until,blew_up");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("usage errors exit with code 1") {
    auto invoke = [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"spinsim"};
        for (const auto& s : args) argv.push_back(s.c_str());
        return run_main(static_cast<int>(argv.size()), argv.data());
    };
    CHECK(invoke({"simulate", "--n", "51", "--bc", "periodic"}) == 1);
    CHECK(invoke({"frobnicate"}) == 1);
    CHECK(invoke({}) == 1);
}

TEST_CASE("verify subcommand passes on a fresh build") {
    const char* argv[] = {"spinsim", "verify"};
    CHECK(run_main(2, argv) == 0);
}
