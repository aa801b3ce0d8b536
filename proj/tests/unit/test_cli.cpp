#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/serialize.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thermo;
using namespace thermo::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("thermo_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run_command(args, out, err);
    if (err_text)
        *err_text = err.str();
    return rc;
}

}  // namespace

TEST(Config, KeyValueParsing) {
    const auto kv = parse_key_values("# comment\nsystem = skew\n\nk=12   # inline\npotential = cos:0.2\n");
    ASSERT_EQ(kv.size(), 3u);
    ExperimentConfig c;
    apply_key_values(c, kv);
    EXPECT_EQ(c.system, "skew");
    EXPECT_EQ(c.k, 12);
    EXPECT_EQ(c.potential, "cos:0.2");
    EXPECT_THROW(parse_key_values("k 12"), ConfigError);
    EXPECT_THROW(parse_key_values("k=1\nk=2"), ConfigError);
    EXPECT_THROW(apply_key_values(c, {{"colour", "red"}}), ConfigError);
    EXPECT_THROW(apply_key_values(c, {{"k", "ten"}}), ConfigError);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(validate(c));
    c.epsilon = 0.5;
    EXPECT_THROW(validate(c), ConfigError);
    c.epsilon.reset();
    c.system = "lorenz";
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_EQ(parse_int_list("1, 4,10"), (std::vector<int>{1, 4, 10}));
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
    std::string err;
    EXPECT_EQ(run({"frobnicate"}, &err), kExitConfig);
    EXPECT_NE(err.find("pressure"), std::string::npos);
    EXPECT_NE(err.find("verify-all"), std::string::npos);
    EXPECT_EQ(run({}), kExitConfig);
}

TEST(Cli, ConfigErrorsExitTwo) {
    const fs::path out = scratch("bad");
    EXPECT_EQ(run({"pressure", "--potential", "wavy", "--out", out.string()}), kExitConfig);
    EXPECT_EQ(run({"pressure", "--system", "henon", "--out", out.string()}), kExitConfig);
    EXPECT_EQ(run({"julienne", "--epsilon", "0.5", "--out", out.string()}), kExitConfig);
    EXPECT_EQ(run({"pressure", "--config", (out / "missing.cfg").string()}), kExitConfig);
}

TEST(Cli, PressureOfZeroPotential) {
    const fs::path out = scratch("pressure");
    ASSERT_EQ(run({"pressure", "--system", "cat", "--potential", "zero", "--k", "10", "--n-max", "10", "--out",
                   out.string()}),
              kExitOk);
    const json doc = read_json(out / "pressure.json");
    EXPECT_EQ(doc["schema_version"], kSchemaVersion);
    EXPECT_EQ(doc["config"]["potential"], "zero");
    EXPECT_NEAR(doc["slope"].get<double>(), 0.9624236501192069, 0.02);
    EXPECT_NEAR(doc["transfer_P"].get<double>(), 0.9624236501192069, 1e-10);
    EXPECT_TRUE(fs::exists(out / "pressure.csv"));
}

TEST(Cli, ToleranceFailureExitsOne) {
    const fs::path out = scratch("tolerance");
    write_text(out / "strict.cfg", "k = 10\npotential = cos:0.2\ntol_residual = 1e-300\n");
    EXPECT_EQ(run({"leafstate", "--config", (out / "strict.cfg").string(), "--out", out.string()}), kExitTolerance);
    EXPECT_TRUE(fs::exists(out / "leafstate.json"));
}

TEST(Cli, ArtifactsAreReproducible) {
    const fs::path a = scratch("repro_a"), b = scratch("repro_b");
    write_text(a / "run.cfg", "k = 10\ngrid = 8\nn_max = 4\n");
    ASSERT_EQ(run({"julienne", "--config", (a / "run.cfg").string(), "--out", a.string()}), kExitOk);
    ASSERT_EQ(run({"julienne", "--config", (a / "run.cfg").string(), "--out", b.string()}), kExitOk);
    EXPECT_EQ(slurp(a / "julienne.json"), slurp(b / "julienne.json"));
    EXPECT_EQ(slurp(a / "julienne.csv"), slurp(b / "julienne.csv"));
}

TEST(Cli, VerifyAllReportsAreByteIdentical) {
    const fs::path a = scratch("verify_a"), b = scratch("verify_b");
    ASSERT_EQ(run({"verify-all", "--seed", "7", "--only", "2,4", "--out", a.string()}), kExitOk);
    ASSERT_EQ(run({"verify-all", "--seed", "7", "--only", "2,4", "--out", b.string()}), kExitOk);
    EXPECT_EQ(slurp(a / "verify_all.json"), slurp(b / "verify_all.json"));
    EXPECT_EQ(slurp(a / "verify_all.txt"), slurp(b / "verify_all.txt"));
    const json doc = read_json(a / "verify_all.json");
    EXPECT_EQ(doc["report"]["criteria"].size(), 2u);
    EXPECT_TRUE(doc["report"]["passed"].get<bool>());
}

TEST(Serialize, GlobalStateRoundTrip) {
    const auto sys = ModelSystem::cat_map();
    for (const char* name : {"zero", "cos:0.2"}) {
        const auto phi = Potential::parse(name, sys);
        CoverSpec c;
        c.resolution_k = 10;
        c.grid = 16;
        const GlobalState g = assemble_global(sys, phi, c);
        const json j = json::parse(to_json(g).dump());
        const GlobalState r = global_state_from_json(sys, phi, j);
        const StateDiagnostics d0 = diagnostics(g), d1 = diagnostics(r);
        EXPECT_NEAR(d0.P, d1.P, 1e-12);
        EXPECT_NEAR(d0.unstable_residual, d1.unstable_residual, 1e-12);
        EXPECT_NEAR(d0.stable_residual, d1.stable_residual, 1e-12);
        EXPECT_NEAR(d0.total_mass, d1.total_mass, 1e-12);
        EXPECT_NEAR(d0.tv_to_lebesgue, d1.tv_to_lebesgue, 1e-12);
        EXPECT_NEAR(d0.overlap_discrepancy, d1.overlap_discrepancy, 1e-12);
        EXPECT_NEAR(invariance_residual(g), invariance_residual(r), 1e-12);
        for (std::size_t i = 0; i < g.grid_masses().size(); ++i)
            ASSERT_NEAR(g.grid_masses()[i], r.grid_masses()[i], 1e-12);
    }
}

TEST(Serialize, CsvUsesRoundTripDoubles) {
    CsvTable t({"a", "b"});
    t.row({0.1, 1.0 / 3});
    EXPECT_EQ(t.str(), "a,b\n0.1,0.3333333333333333\n");
    EXPECT_THROW(t.row({1.0}), PreconditionError);
}
