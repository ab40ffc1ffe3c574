// End-to-end tests driving the arcov binary (path in the ARCOV_CLI
// environment variable).

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliFixture {
    fs::path dir;
    std::string cli;

    CliFixture()
    {
        const char* env = std::getenv("ARCOV_CLI");
        REQUIRE_MESSAGE(env != nullptr, "set ARCOV_CLI to the arcov binary path");
        cli = env;
        dir = fs::temp_directory_path()
            / ("arcov_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~CliFixture() { fs::remove_all(dir); }

    int run(const std::string& args, const std::string& env_prefix = "") const
    {
        const std::string cmd = "cd " + dir.string() + " && " + env_prefix + cli + " " + args
            + " >/dev/null 2>stderr.txt";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    }

    std::string slurp(const std::string& name) const
    {
        std::ifstream in(dir / name, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    }
};

} // namespace

TEST_CASE("exit codes")
{
    CliFixture fx;
    CHECK(fx.run("target --out t.csv") == 0);
    CHECK(fx.run("--version") == 0);
    CHECK(fx.run("") == 2);                        // missing subcommand
    CHECK(fx.run("target --no-such-flag") == 2);   // unknown option
    CHECK(fx.run("fit --j 1,2,3 --out m.json") == 2); // missing required --target

    // numeric failure: the singular example target
    std::ofstream(fx.dir / "bad.csv") << "lag,value\n0,1\n1,0.5\n2,-0.5\n3,0.1\n";
    CHECK(fx.run("fit --target bad.csv --j 1,2,3 --out m.json") == 1);
}

TEST_CASE("target command")
{
    CliFixture fx;
    REQUIRE(fx.run("target --out target.csv") == 0);
    const std::string text = fx.slurp("target.csv");
    CHECK(text.rfind("lag,value\n0,1\n", 0) == 0);

    SUBCASE("rational gamma flag and sweep steps")
    {
        CHECK(fx.run("target --gamma 5/6 --dr 0.2075 --lags 60 --out coarse.csv") == 0);
        CHECK(fx.run("target --gamma 5/6 --dr 0.0415 --lags 360 --out fine.csv") == 0);
        CHECK(fx.slurp("coarse.csv") != fx.slurp("fine.csv"));
    }

    SUBCASE("from-csv round trip is byte-identical")
    {
        REQUIRE(fx.run("target --from-csv target.csv --out copy.csv") == 0);
        CHECK(fx.slurp("copy.csv") == fx.slurp("target.csv"));
    }

    SUBCASE("two-point target")
    {
        REQUIRE(fx.run("target --dy 0.747 --lags 12 --out two.csv") == 0);
        CHECK(fx.slurp("two.csv").rfind("lag,i,j,value\n", 0) == 0);
    }
}

TEST_CASE("fit, autocov and spectrum pipeline")
{
    CliFixture fx;
    REQUIRE(fx.run("target --lags 120 --out target.csv") == 0);
    REQUIRE(fx.run("fit --target target.csv --j 1,2,3 --l 1,2,3 --out yw.json") == 0);

    const auto model = nlohmann::json::parse(fx.slurp("yw.json"));
    CHECK(model["kind"] == "ar");
    CHECK(std::abs(model["a"][0].get<double>() - 0.663) <= 1e-3);
    CHECK(std::abs(model["a"][1].get<double>() - 0.099) <= 1e-3);
    CHECK(std::abs(model["a"][2].get<double>() - 0.044) <= 1e-3);
    CHECK(std::abs(model["b"].get<double>() - 0.636) <= 1e-3);
    CHECK(fx.slurp("yw_report.csv").rfind("lag,target,model,abs_err\n", 0) == 0);

    SUBCASE("single-lag scheme shows the zero pattern")
    {
        REQUIRE(fx.run("fit --target target.csv --j 3 --out j3.json") == 0);
        REQUIRE(fx.run("autocov --model j3.json --n 6 --out acov.csv") == 0);
        std::ifstream in(fx.dir / "acov.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "lag,value");
        std::getline(in, line); // lag 0
        std::getline(in, line);
        CHECK(line == "1,0");
        std::getline(in, line);
        CHECK(line == "2,0");
        std::getline(in, line);
        CHECK(line.rfind("3,0.5", 0) == 0);
    }

    SUBCASE("spectrum of model and target")
    {
        REQUIRE(fx.run("spectrum --model yw.json --dr 0.1245 --points 50 --out sm.csv") == 0);
        REQUIRE(fx.run("spectrum --target target.csv --dr 0.1245 --points 50 --out st.csv")
                == 0);
        CHECK(fx.slurp("sm.csv").rfind("k,value\n", 0) == 0);
        CHECK(fx.run("spectrum --model yw.json --target target.csv --out both.csv") == 2);

        // the angular toggle stretches the axis to k_max = pi/dr
        REQUIRE(fx.run("spectrum --target target.csv --dr 0.1245 --angular --points 50 "
                       "--out sa.csv")
                == 0);
        const std::string text = fx.slurp("sa.csv");
        const auto last_row = text.rfind("\n", text.size() - 2);
        const double k_last = std::stod(text.substr(last_row + 1));
        CHECK(std::abs(k_last - M_PI / 0.1245) <= 1e-9);
    }

    SUBCASE("nonlinear fit flag validation")
    {
        CHECK(fx.run("fit --target target.csv --j 1,2,5 --nonlinear --out nl.json") == 2);
        CHECK(fx.run("fit --target target.csv --j 1,2,5 --nonlinear --match-lags 0,1,3,5 "
                     "--out nl.json")
              == 0);
    }
}

TEST_CASE("manifest and replay reproduce outputs bit-exactly")
{
    CliFixture fx;
    REQUIRE(fx.run("target --lags 80 --out target.csv") == 0);
    REQUIRE(fs::exists(fx.dir / "target.csv.manifest.json"));
    const std::string original = fx.slurp("target.csv");

    const auto manifest = nlohmann::json::parse(fx.slurp("target.csv.manifest.json"));
    CHECK(manifest["command"] == "target");
    CHECK(manifest["outputs"][0] == "target.csv");
    CHECK(manifest.contains("tool_version"));
    CHECK(manifest.contains("timestamp"));

    fs::remove(fx.dir / "target.csv");
    REQUIRE(fx.run("replay target.csv.manifest.json") == 0);
    CHECK(fx.slurp("target.csv") == original);

    SUBCASE("synth manifests replay deterministically")
    {
        REQUIRE(fx.run("fit --target target.csv --j 1,2 --out m.json") == 0);
        REQUIRE(fx.run("synth --model m.json --length 500 --realizations 2 --seed 11 "
                       "--max-lag 10 --out s")
                == 0);
        const std::string r0 = fx.slurp("s_r0000.csv");
        const std::string ens = fx.slurp("s_ensemble.csv");
        CHECK(ens.rfind("lag,gamma_e,gamma_ar,abs_err\n", 0) == 0);
        fs::remove(fx.dir / "s_r0000.csv");
        REQUIRE(fx.run("replay s_ensemble.csv.manifest.json") == 0);
        CHECK(fx.slurp("s_r0000.csv") == r0);
        CHECK(fx.slurp("s_ensemble.csv") == ens);
    }
}

TEST_CASE("COVARFIT_SEED overrides the seed flag")
{
    CliFixture fx;
    REQUIRE(fx.run("target --lags 60 --out target.csv") == 0);
    REQUIRE(fx.run("fit --target target.csv --j 1 --out m.json") == 0);
    REQUIRE(fx.run("synth --model m.json --length 100 --realizations 1 --seed 1 --max-lag 5 "
                   "--out a",
                   "COVARFIT_SEED=777 ")
            == 0);
    const auto manifest = nlohmann::json::parse(fx.slurp("a_ensemble.csv.manifest.json"));
    CHECK(manifest["rng_seed"].get<std::uint64_t>() == 777);

    // same seed through the flag gives identical realizations
    REQUIRE(fx.run("synth --model m.json --length 100 --realizations 1 --seed 777 --max-lag 5 "
                   "--out b")
            == 0);
    CHECK(fx.slurp("a_r0000.csv") == fx.slurp("b_r0000.csv"));
}

TEST_CASE("binary realization format")
{
    CliFixture fx;
    REQUIRE(fx.run("target --lags 60 --out target.csv") == 0);
    REQUIRE(fx.run("fit --target target.csv --j 1 --out m.json") == 0);
    REQUIRE(fx.run("synth --model m.json --length 64 --realizations 1 --seed 5 --max-lag 5 "
                   "--format bin --out z")
            == 0);
    const std::string raw = fx.slurp("z_r0000.bin");
    REQUIRE(raw.size() == 16 + 64 * 8);
    CHECK(raw.compare(0, 8, "ARSYN1\0\0", 8) == 0);
}

TEST_CASE("VAR pipeline through the CLI")
{
    CliFixture fx;
    REQUIRE(fx.run("target --dy 0.747 --lags 30 --out two.csv") == 0);
    REQUIRE(fx.run("fit --target two.csv --var --k 2 --j 1,2,3 --out var.json") == 0);
    const auto model = nlohmann::json::parse(fx.slurp("var.json"));
    CHECK(model["kind"] == "var");
    CHECK(std::abs(model["A"][0][0][0].get<double>() - 0.659) <= 2e-3);
    CHECK(std::abs(model["B"][1][0].get<double>() - 0.013) <= 2e-3);

    REQUIRE(fx.run("autocov --model var.json --n 10 --method companion --out c.csv") == 0);
    REQUIRE(fx.run("autocov --model var.json --n 10 --method vma --q 200 --out v.csv") == 0);
    CHECK(fx.slurp("c.csv").rfind("lag,i,j,value\n", 0) == 0);

    REQUIRE(fx.run("synth --model var.json --length 400 --realizations 2 --seed 3 "
                   "--max-lag 8 --out vs")
            == 0);
    CHECK(fx.slurp("vs_ensemble.csv").rfind("lag,i,j,gamma_e,gamma_ar,abs_err\n", 0) == 0);

    // method mismatch is a usage error
    CHECK(fx.run("autocov --model var.json --method direct --out x.csv") == 2);
}

TEST_CASE("benchmark command at demo scale")
{
    CliFixture fx;
    REQUIRE(fx.run("target --lags 90 --out target.csv") == 0);
    REQUIRE(fx.run("benchmark --target target.csv --n-min 1 --n-max 2 --seed 4 "
                   "--population 24 --generations 12 --max-lag 16 --out bench.csv")
            == 0);
    const std::string text = fx.slurp("bench.csv");
    CHECK(text.rfind("N,approach,mse,j,l\n", 0) == 0);
    CHECK(text.find("1,YW,") != std::string::npos);
    CHECK(text.find("2,GA-10,") != std::string::npos);
    CHECK(fs::exists(fx.dir / "bench.jsonl"));

    // replay re-runs the whole GA deterministically
    fs::remove(fx.dir / "bench.csv");
    const std::string log = fx.slurp("bench.jsonl");
    REQUIRE(fx.run("replay bench.csv.manifest.json") == 0);
    CHECK(fx.slurp("bench.csv") == text);
    CHECK(fx.slurp("bench.jsonl") == log);
}
