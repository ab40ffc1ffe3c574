// arcov command-line tool: builds targets, fits (V)AR models, computes
// autocovariances and spectra, runs the GA benchmark and synthesizes
// realizations. Every command writes a run manifest next to its primary
// output; `arcov replay <manifest>` re-executes the recorded run.

#include "arcov/arcov.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flag combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string timestamp_utc()
{
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& command, const json& params,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs)
{
    if (outputs.empty())
        return;
    json doc = {
        {"command", command},   {"parameters", params},
        {"inputs", inputs},     {"outputs", outputs},
        {"tool_version", arcov::kVersion}, {"timestamp", timestamp_utc()},
    };
    if (params.contains("seed"))
        doc["rng_seed"] = params["seed"];
    arcov::atomic_write(outputs.front() + ".manifest.json", doc.dump(2) + "\n");
}

// Accepts plain decimals and rational strings such as "5/6".
double parse_ratio(const std::string& text)
{
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return std::stod(text);
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        return num / den;
    } catch (const std::exception&) {
        throw UsageError("cannot parse number '" + text + "'");
    }
}

std::uint64_t effective_seed(std::uint64_t flag_seed)
{
    if (const char* env = std::getenv("COVARFIT_SEED")) {
        try {
            std::size_t pos = 0;
            const std::uint64_t seed = std::stoull(env, &pos);
            if (pos == std::string(env).size())
                return seed;
        } catch (const std::exception&) {
        }
        throw UsageError("COVARFIT_SEED must be an unsigned integer, got '"
                         + std::string(env) + "'");
    }
    return flag_seed;
}

arcov::FrequencyConvention convention_of(bool angular)
{
    return angular ? arcov::FrequencyConvention::angular
                   : arcov::FrequencyConvention::cyclic;
}

// ---------------------------------------------------------------------------
// command implementations; each takes fully normalized parameters so that
// `replay` can re-run them from the manifest alone

void run_target(const json& p)
{
    const std::string out = p.at("out");
    std::vector<std::string> inputs;
    if (p.contains("from_csv")) {
        const std::string src = p.at("from_csv");
        inputs.push_back(src);
        arcov::write_target_csv(out, arcov::read_target_csv(src));
    } else {
        const arcov::IsotropicModel model(p.at("gamma").get<double>(), 1.0, 1.0);
        const double dr = p.at("dr").get<double>();
        const int lags = p.at("lags").get<int>();
        if (p.contains("dy")) {
            const auto target =
                arcov::make_two_point_target(model, dr, p.at("dy").get<double>(), lags);
            arcov::write_matrix_target_csv(out, target);
        } else {
            arcov::write_target_csv(out, arcov::make_target(model, dr, lags));
        }
    }
    write_manifest("target", p, inputs, {out});
}

void run_fit(const json& p)
{
    const std::string out = p.at("out");
    const std::string report = p.at("report");
    const std::string target_path = p.at("target");
    const std::vector<int> j = p.at("j").get<std::vector<int>>();
    const int m_lags = p.at("M").get<int>();

    if (p.at("var").get<bool>()) {
        const auto target = arcov::read_matrix_target_csv(target_path);
        if (p.contains("k") && target.dim() != p.at("k").get<int>())
            throw UsageError("--k does not match the dimension of the target file");
        bool clamped = false;
        const auto model = arcov::fit_var_linear(
            target, arcov::LagSelection(j, p.at("l").get<std::vector<int>>()), &clamped);
        if (clamped)
            std::cerr << "warning: BB' had a slightly negative eigenvalue; clamped to 0\n";
        arcov::write_model_json(out, model);

        const int n_report = std::min(m_lags, target.max_lag());
        const auto gamma = arcov::covariance_via_companion(model, n_report);
        std::string text = "lag,i,j,target,model,abs_err\n";
        char buf[128];
        for (int l = 0; l <= n_report; ++l)
            for (int r = 0; r < target.dim(); ++r)
                for (int c = 0; c < target.dim(); ++c) {
                    const double tv = target.at(l)(r, c);
                    const double mv = gamma.at(l)(r, c);
                    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g\n", l, r, c,
                                  tv, mv, std::abs(tv - mv));
                    text += buf;
                }
        arcov::atomic_write(report, text);
    } else {
        const auto target = arcov::read_target_csv(target_path);
        arcov::RestrictedARModel model = [&]() {
            if (p.at("nonlinear").get<bool>())
                return arcov::fit_nonlinear(target, j,
                                            p.at("match_lags").get<std::vector<int>>());
            return arcov::fit_linear(target,
                                     arcov::LagSelection(j, p.at("l").get<std::vector<int>>()));
        }();
        arcov::write_model_json(out, model);

        const int n_report = std::min(m_lags, target.max_lag());
        const auto gamma = arcov::theoretical_autocovariance(model, n_report);
        std::vector<double> target_head(gamma.size());
        for (std::size_t l = 0; l < gamma.size(); ++l)
            target_head[l] = target(static_cast<long>(l));
        arcov::write_fit_report_csv(report, target_head, gamma);
    }
    write_manifest("fit", p, {target_path}, {out, report});
}

void run_autocov(const json& p)
{
    const std::string out = p.at("out");
    const std::string model_path = p.at("model");
    const int n = p.at("n").get<int>();
    const std::string method = p.at("method");
    const auto model = arcov::read_model_json(model_path);

    if (std::holds_alternative<arcov::RestrictedARModel>(model)) {
        const auto& ar = std::get<arcov::RestrictedARModel>(model);
        std::vector<double> gamma;
        if (method == "direct")
            gamma = arcov::theoretical_autocovariance(ar, n, arcov::AutocovMethod::direct_solve);
        else if (method == "recursive")
            gamma = arcov::theoretical_autocovariance(ar, n, arcov::AutocovMethod::recursive);
        else
            throw UsageError("method '" + method + "' requires a VAR model");
        arcov::write_autocovariance_csv(out, gamma);
    } else {
        const auto& var = std::get<arcov::RestrictedVARModel>(model);
        std::optional<arcov::CovarianceMatrixFunction> gamma;
        if (method == "companion") {
            gamma = arcov::covariance_via_companion(var, n);
        } else if (method == "vma") {
            int q = p.at("q").get<int>();
            if (q <= 0)
                q = arcov::suggest_vma_truncation(var);
            gamma = arcov::covariance_via_vma(var, q, n);
        } else {
            throw UsageError("method '" + method + "' requires an AR model");
        }
        arcov::write_matrix_target_csv(out, *gamma);
    }
    write_manifest("autocov", p, {model_path}, {out});
}

void run_spectrum(const json& p)
{
    const std::string out = p.at("out");
    const int points = p.at("points").get<int>();
    if (points < 2)
        throw UsageError("--points must be at least 2");
    const auto convention = convention_of(p.at("angular").get<bool>());
    const double dr = p.at("dr").get<double>();
    const double k_max = arcov::max_wavenumber(dr, convention);

    std::vector<double> ks(static_cast<std::size_t>(points));
    std::vector<double> vals(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        ks[static_cast<std::size_t>(i)] = k_max * i / (points - 1);

    std::vector<std::string> inputs;
    if (p.contains("target")) {
        const std::string target_path = p.at("target");
        inputs.push_back(target_path);
        const auto target = arcov::read_target_csv(target_path, dr);
        for (int i = 0; i < points; ++i)
            vals[static_cast<std::size_t>(i)] =
                arcov::target_spectrum(target, ks[static_cast<std::size_t>(i)], convention);
    } else {
        const std::string model_path = p.at("model");
        inputs.push_back(model_path);
        const auto model = arcov::read_model_json(model_path);
        if (!std::holds_alternative<arcov::RestrictedARModel>(model))
            throw UsageError("spectrum: only AR models are supported");
        const auto& ar = std::get<arcov::RestrictedARModel>(model);
        const double var_scale = p.at("var_scale").get<double>();
        for (int i = 0; i < points; ++i)
            vals[static_cast<std::size_t>(i)] =
                arcov::ar_spectrum(ar, ks[static_cast<std::size_t>(i)], k_max, var_scale);
    }
    arcov::write_spectrum_csv(out, ks, vals);
    write_manifest("spectrum", p, inputs, {out});
}

void run_benchmark(const json& p)
{
    const std::string out = p.at("out");
    const std::string log = p.at("log");
    const std::string target_path = p.at("target");
    const auto target = arcov::read_target_csv(target_path);

    arcov::GAConfig config;
    config.population_size = p.at("population").get<int>();
    config.generations = p.at("generations").get<int>();
    config.crossover_rate = p.at("crossover").get<double>();
    config.mutation_rate = p.at("mutation").get<double>();
    config.elitism_count = p.at("elitism").get<int>();
    config.tournament_size = p.at("tournament").get<int>();
    config.max_lag = p.at("max_lag").get<int>();
    config.mse_max_lag = p.at("M").get<int>();
    config.rng_seed = p.at("seed").get<std::uint64_t>();

    std::vector<arcov::GenerationRecord> history;
    const auto rows =
        arcov::benchmark(target, p.at("n_min").get<int>(), p.at("n_max").get<int>(), config,
                         p.at("delta0").get<int>(), p.at("delta1").get<int>(), &history);
    arcov::write_benchmark_csv(out, rows);
    arcov::write_ga_log_jsonl(log, history);
    write_manifest("benchmark", p, {target_path}, {out, log});
}

void run_synth(const json& p)
{
    const std::string prefix = p.at("out");
    const std::string model_path = p.at("model");
    const std::string format = p.at("format");
    const int max_lag = p.at("max_lag").get<int>();
    const auto model = arcov::read_model_json(model_path);

    arcov::SynthesisConfig config;
    config.length = p.at("length").get<std::size_t>();
    config.n_realizations = p.at("realizations").get<std::size_t>();
    config.rng_seed = p.at("seed").get<std::uint64_t>();
    const int order = std::visit([](const auto& m) { return m.order(); }, model);
    config.burn_in = p.at("burn_in").is_string()
        ? static_cast<std::size_t>(100 * order)
        : p.at("burn_in").get<std::size_t>();

    std::vector<std::string> outputs;
    const auto name_of = [&](std::size_t r) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "_r%04zu.%s", r, format == "bin" ? "bin" : "csv");
        return prefix + buf;
    };

    const std::string ensemble_path = prefix + "_ensemble.csv";
    if (std::holds_alternative<arcov::RestrictedARModel>(model)) {
        const auto& ar = std::get<arcov::RestrictedARModel>(model);
        const auto realizations = arcov::synthesize_ar(ar, config);
        for (std::size_t r = 0; r < realizations.size(); ++r) {
            if (format == "bin")
                arcov::write_realization_bin(name_of(r), realizations[r]);
            else
                arcov::write_realization_csv(name_of(r), realizations[r]);
            outputs.push_back(name_of(r));
        }
        const auto est = arcov::ensemble_autocovariance(realizations, max_lag);
        const auto gamma = arcov::theoretical_autocovariance(ar, max_lag);
        arcov::write_ensemble_csv(ensemble_path, est.gamma_e, gamma);
    } else {
        const auto& var = std::get<arcov::RestrictedVARModel>(model);
        const auto realizations = arcov::synthesize_var(var, config);
        for (std::size_t r = 0; r < realizations.size(); ++r) {
            if (format == "bin")
                arcov::write_realization_bin(name_of(r), realizations[r]);
            else
                arcov::write_realization_csv(name_of(r), realizations[r]);
            outputs.push_back(name_of(r));
        }
        const auto est = arcov::ensemble_autocovariance(realizations, max_lag);
        const auto gamma = arcov::covariance_via_companion(var, max_lag);
        std::string text = "lag,i,j,gamma_e,gamma_ar,abs_err\n";
        char buf[160];
        for (int l = 0; l <= max_lag; ++l)
            for (int r = 0; r < var.dim(); ++r)
                for (int c = 0; c < var.dim(); ++c) {
                    const double ge = est.gamma_e[static_cast<std::size_t>(l)](r, c);
                    const double gv = gamma.at(l)(r, c);
                    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g\n", l, r, c,
                                  ge, gv, std::abs(ge - gv));
                    text += buf;
                }
        arcov::atomic_write(ensemble_path, text);
    }
    // ensemble report first: it is the primary output the manifest sits next to
    std::vector<std::string> all_outputs{ensemble_path};
    all_outputs.insert(all_outputs.end(), outputs.begin(), outputs.end());
    write_manifest("synth", p, {model_path}, all_outputs);
}

void dispatch(const std::string& command, const json& params)
{
    if (command == "target")
        run_target(params);
    else if (command == "fit")
        run_fit(params);
    else if (command == "autocov")
        run_autocov(params);
    else if (command == "spectrum")
        run_spectrum(params);
    else if (command == "benchmark")
        run_benchmark(params);
    else if (command == "synth")
        run_synth(params);
    else
        throw UsageError("unknown command '" + command + "' in manifest");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal (V)AR models for reproducing a target autocovariance function"};
    app.set_version_flag("--version", std::string("arcov ") + arcov::kVersion);
    app.require_subcommand(1);

    std::string command;
    json params;

    // --- target ---
    auto* cmd_target = app.add_subcommand("target", "Build or import a target autocovariance");
    {
        static std::string model = "vonkarman", gamma = "5/6", from_csv, out = "target.csv";
        static double dr = 0.1245, dy = -1.0;
        static int lags = 120;
        cmd_target->add_option("--model", model, "Target family (vonkarman)")
            ->check(CLI::IsMember({"vonkarman"}));
        cmd_target->add_option("--gamma", gamma, "Spectral exponent (accepts '5/6')");
        cmd_target->add_option("--dr", dr, "Non-dimensional sampling step");
        cmd_target->add_option("--lags", lags, "Number of lags beyond lag 0");
        cmd_target->add_option("--dy", dy, "Transverse separation: two-point 2x2 target");
        cmd_target->add_option("--from-csv", from_csv, "Import an existing target CSV");
        cmd_target->add_option("--out", out, "Output CSV path");
        cmd_target->callback([&]() {
            command = "target";
            params = {{"out", out}};
            if (!from_csv.empty()) {
                params["from_csv"] = from_csv;
            } else {
                params["gamma"] = parse_ratio(gamma);
                params["dr"] = dr;
                params["lags"] = lags;
                if (dy >= 0.0)
                    params["dy"] = dy;
            }
        });
    }

    // --- fit ---
    auto* cmd_fit = app.add_subcommand("fit", "Fit a (V)AR model to a target");
    {
        static std::string target, out = "model.json", report;
        static std::vector<int> j, l, match_lags;
        static bool nonlinear = false, var = false;
        static int k = 0, m_lags = 41;
        cmd_fit->add_option("--target", target, "Target CSV path")->required();
        cmd_fit->add_option("--j", j, "Regression lags")->required()->delimiter(',');
        cmd_fit->add_option("--l", l, "Autocovariance-equation lags (default: j)")
            ->delimiter(',');
        cmd_fit->add_flag("--nonlinear", nonlinear, "Exact-match strategy");
        cmd_fit->add_option("--match-lags", match_lags, "Lags matched exactly (with 0)")
            ->delimiter(',');
        cmd_fit->add_flag("--var", var, "Multivariate fit from a matrix target");
        cmd_fit->add_option("--k", k, "Process dimension (checked against the target)");
        cmd_fit->add_option("--M", m_lags, "Report extends over lags 0..M");
        cmd_fit->add_option("--out", out, "Model JSON path");
        cmd_fit->add_option("--report", report, "Report CSV path (default: <out>_report.csv)");
        cmd_fit->callback([&]() {
            command = "fit";
            if (nonlinear && var)
                throw UsageError("--nonlinear is not available for VAR fits");
            if (nonlinear && match_lags.empty())
                throw UsageError("--nonlinear requires --match-lags");
            params = {{"target", target}, {"j", j},   {"var", var},
                      {"nonlinear", nonlinear},       {"M", m_lags},
                      {"out", out}};
            if (nonlinear)
                params["match_lags"] = match_lags;
            else
                params["l"] = l.empty() ? j : l;
            if (var && k > 0)
                params["k"] = k;
            params["report"] =
                report.empty() ? fs::path(out).replace_extension().string() + "_report.csv"
                               : report;
        });
    }

    // --- autocov ---
    auto* cmd_autocov = app.add_subcommand("autocov", "Theoretical autocovariance of a model");
    {
        static std::string model, method = "direct", out = "autocov.csv";
        static int n = 41, q = 0;
        cmd_autocov->add_option("--model", model, "Model JSON path")->required();
        cmd_autocov->add_option("--n", n, "Number of lags beyond lag 0");
        cmd_autocov->add_option("--method", method, "direct|recursive (AR), companion|vma (VAR)")
            ->check(CLI::IsMember({"direct", "recursive", "companion", "vma"}));
        cmd_autocov->add_option("--q", q, "VMA truncation (0: choose automatically)");
        cmd_autocov->add_option("--out", out, "Output CSV path");
        cmd_autocov->callback([&]() {
            command = "autocov";
            // default method depends on the model kind
            std::string m = method;
            if (!cmd_autocov->count("--method")) {
                const auto mv = arcov::read_model_json(model);
                m = std::holds_alternative<arcov::RestrictedARModel>(mv) ? "direct"
                                                                         : "companion";
            }
            params = {{"model", model}, {"n", n}, {"method", m}, {"q", q}, {"out", out}};
        });
    }

    // --- spectrum ---
    auto* cmd_spectrum = app.add_subcommand("spectrum", "Spectrum of a model or target");
    {
        static std::string model, target, out = "spectrum.csv";
        static int points = 200;
        static double dr = 0.1245, var_scale = 1.0;
        static bool angular = false;
        auto* om = cmd_spectrum->add_option("--model", model, "AR model JSON path");
        auto* ot = cmd_spectrum->add_option("--target", target, "Target CSV path");
        om->excludes(ot);
        cmd_spectrum->add_option("--points", points, "Grid points over [0, k_max]");
        cmd_spectrum->add_option("--dr", dr, "Sampling step that defines k_max");
        cmd_spectrum->add_flag("--angular", angular, "Angular convention k_max = pi/dr");
        cmd_spectrum->add_option("--var-scale", var_scale, "Variance normalization sigma_0^2");
        cmd_spectrum->add_option("--out", out, "Output CSV path");
        cmd_spectrum->callback([&]() {
            command = "spectrum";
            if (model.empty() == target.empty())
                throw UsageError("spectrum: pass exactly one of --model or --target");
            params = {{"points", points}, {"dr", dr},   {"angular", angular},
                      {"var_scale", var_scale}, {"out", out}};
            if (!model.empty())
                params["model"] = model;
            else
                params["target"] = target;
        });
    }

    // --- benchmark ---
    auto* cmd_benchmark = app.add_subcommand("benchmark", "YW/Krenk/GA comparison over N");
    {
        static std::string target, out = "benchmark.csv", log;
        static int n_min = 1, n_max = 10, delta0 = 0, delta1 = 10, m_lags = 41;
        static int population = 200, generations = 300, elitism = 2, tournament = 3,
                   max_lag = 64;
        static double crossover = 0.8, mutation = 0.1;
        static std::uint64_t seed = 0;
        cmd_benchmark->add_option("--target", target, "Target CSV path")->required();
        cmd_benchmark->add_option("--n-min", n_min, "Smallest N");
        cmd_benchmark->add_option("--n-max", n_max, "Largest N");
        cmd_benchmark->add_option("--delta0", delta0, "Delta of the first GA variant");
        cmd_benchmark->add_option("--delta1", delta1, "Delta of the second GA variant");
        cmd_benchmark->add_option("--seed", seed, "RNG seed (COVARFIT_SEED overrides)");
        cmd_benchmark->add_option("--M", m_lags, "MSE criterion max lag");
        cmd_benchmark->add_option("--population", population, "GA population size");
        cmd_benchmark->add_option("--generations", generations, "GA generations");
        cmd_benchmark->add_option("--crossover", crossover, "GA crossover rate");
        cmd_benchmark->add_option("--mutation", mutation, "GA mutation rate");
        cmd_benchmark->add_option("--elitism", elitism, "GA elitism count");
        cmd_benchmark->add_option("--tournament", tournament, "GA tournament size");
        cmd_benchmark->add_option("--max-lag", max_lag, "Largest lag in the GA search space");
        cmd_benchmark->add_option("--out", out, "Benchmark CSV path");
        cmd_benchmark->add_option("--log", log, "GA log JSONL path (default: <out>.jsonl)");
        cmd_benchmark->callback([&]() {
            command = "benchmark";
            params = {{"target", target},     {"n_min", n_min},
                      {"n_max", n_max},       {"delta0", delta0},
                      {"delta1", delta1},     {"seed", effective_seed(seed)},
                      {"M", m_lags},          {"population", population},
                      {"generations", generations}, {"crossover", crossover},
                      {"mutation", mutation}, {"elitism", elitism},
                      {"tournament", tournament},   {"max_lag", max_lag},
                      {"out", out}};
            params["log"] =
                log.empty() ? fs::path(out).replace_extension().string() + ".jsonl" : log;
        });
    }

    // --- synth ---
    auto* cmd_synth = app.add_subcommand("synth", "Synthesize realizations of a model");
    {
        static std::string model, burn_in = "auto", format = "csv", out = "synth";
        static std::size_t length = 100000, realizations = 100;
        static std::uint64_t seed = 0;
        static int max_lag = 41;
        cmd_synth->add_option("--model", model, "Model JSON path")->required();
        cmd_synth->add_option("--length", length, "Samples per realization");
        cmd_synth->add_option("--realizations", realizations, "Number of realizations");
        cmd_synth->add_option("--burn-in", burn_in, "Discarded samples, or 'auto' (100 p)");
        cmd_synth->add_option("--seed", seed, "RNG seed (COVARFIT_SEED overrides)");
        cmd_synth->add_option("--format", format, "Realization file format")
            ->check(CLI::IsMember({"csv", "bin"}));
        cmd_synth->add_option("--max-lag", max_lag, "Ensemble report max lag");
        cmd_synth->add_option("--out", out, "Output file prefix");
        cmd_synth->callback([&]() {
            command = "synth";
            params = {{"model", model},   {"length", length},
                      {"realizations", realizations}, {"seed", effective_seed(seed)},
                      {"format", format}, {"max_lag", max_lag},
                      {"out", out}};
            if (burn_in == "auto")
                params["burn_in"] = "auto";
            else
                params["burn_in"] = static_cast<std::size_t>(std::stoull(burn_in));
        });
    }

    // --- replay ---
    auto* cmd_replay = app.add_subcommand("replay", "Re-run a recorded manifest");
    {
        static std::string manifest;
        cmd_replay->add_option("manifest", manifest, "Manifest JSON path")->required();
        cmd_replay->callback([&]() {
            std::ifstream in(manifest);
            if (!in)
                throw std::invalid_argument("cannot open " + manifest);
            json doc;
            in >> doc;
            command = doc.at("command").get<std::string>();
            params = doc.at("parameters");
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit with 2, --help/--version with 0
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        dispatch(command, params);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
