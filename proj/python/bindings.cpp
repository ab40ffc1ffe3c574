#include "arcov/arcov.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace arcov;

PYBIND11_MODULE(_arcov, m)
{
    m.doc() = "Optimal restricted AR/VAR models for reproducing a target "
              "autocovariance function";
#ifdef ARCOV_VERSION_INFO
    m.attr("__version__") = ARCOV_VERSION_INFO;
#else
    m.attr("__version__") = kVersion;
#endif

    py::register_exception<NonInvertibleTargetError>(m, "NonInvertibleTargetError",
                                                     PyExc_RuntimeError);
    py::register_exception<TargetNotRealizableError>(m, "TargetNotRealizableError",
                                                     PyExc_RuntimeError);
    py::register_exception<NonStationaryModelError>(m, "NonStationaryModelError",
                                                    PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<OptimizationError>(m, "OptimizationError", PyExc_RuntimeError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);

    // --- special functions -------------------------------------------------
    m.def("bessel_k", &bessel_k, py::arg("order"), py::arg("x"),
          "Modified Bessel function of the second kind for real order");
    m.def("gamma_fn", &gamma_fn, py::arg("x"), "Gamma function with pole detection");

    // --- targets -----------------------------------------------------------
    py::class_<TargetAutocovariance>(m, "TargetAutocovariance")
        .def(py::init<std::vector<double>, double>(), py::arg("values"),
             py::arg("delta_r") = 1.0)
        .def_property_readonly("values", &TargetAutocovariance::values)
        .def_property_readonly("delta_r", &TargetAutocovariance::delta_r)
        .def_property_readonly("max_lag", &TargetAutocovariance::max_lag)
        .def("__call__", &TargetAutocovariance::operator(), py::arg("lag"))
        .def("__len__", [](const TargetAutocovariance& t) { return t.values().size(); });

    py::class_<CovarianceMatrixFunction>(m, "CovarianceMatrixFunction")
        .def(py::init<std::vector<Eigen::MatrixXd>, double>(), py::arg("matrices"),
             py::arg("delta_r") = 1.0)
        .def_property_readonly("dim", &CovarianceMatrixFunction::dim)
        .def_property_readonly("delta_r", &CovarianceMatrixFunction::delta_r)
        .def_property_readonly("max_lag", &CovarianceMatrixFunction::max_lag)
        .def_property_readonly("matrices", &CovarianceMatrixFunction::matrices)
        .def("at", &CovarianceMatrixFunction::at, py::arg("lag"),
             "Gamma_l, with Gamma_{-l} = Gamma_l' on negative lags");

    // --- turbulence target -------------------------------------------------
    py::class_<IsotropicModel>(m, "IsotropicModel")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("gamma_exponent"),
             py::arg("length_scale") = 1.0, py::arg("sigma0_sq") = 1.0)
        .def_readwrite("gamma_exponent", &IsotropicModel::gamma_exponent)
        .def_readwrite("length_scale", &IsotropicModel::length_scale)
        .def_readwrite("sigma0_sq", &IsotropicModel::sigma0_sq);

    py::enum_<FrequencyConvention>(m, "FrequencyConvention")
        .value("cyclic", FrequencyConvention::cyclic)
        .value("angular", FrequencyConvention::angular);

    m.def("lambda_ratio", &lambda_ratio, py::arg("model") = IsotropicModel{});
    m.def("longitudinal_f", &longitudinal_f, py::arg("r_nd"),
          py::arg("model") = IsotropicModel{});
    m.def("transverse_g", &transverse_g, py::arg("r_nd"), py::arg("model") = IsotropicModel{});
    m.def("covariance_tensor", &covariance_tensor, py::arg("r_vec"),
          py::arg("model") = IsotropicModel{});
    m.def("make_target", &make_target, py::arg("model"), py::arg("delta_r_nd"),
          py::arg("n_lags"));
    m.def("make_two_point_target", &make_two_point_target, py::arg("model"),
          py::arg("delta_r_nd"), py::arg("delta_y_nd"), py::arg("n_lags"));
    m.def("von_karman_spectrum", &von_karman_spectrum, py::arg("k_nd"),
          py::arg("model") = IsotropicModel{});
    m.def("max_wavenumber", &max_wavenumber, py::arg("delta_r"),
          py::arg("convention") = FrequencyConvention::cyclic);
    m.def("target_spectrum", &target_spectrum, py::arg("target"), py::arg("k_nd"),
          py::arg("convention") = FrequencyConvention::cyclic);
    m.def("target_spectrum_peak", &target_spectrum_peak, py::arg("target"),
          py::arg("convention") = FrequencyConvention::angular);

    // --- AR core -----------------------------------------------------------
    py::class_<LagSelection>(m, "LagSelection")
        .def(py::init<std::vector<int>, std::vector<int>>(), py::arg("j"), py::arg("l"))
        .def_readonly("j", &LagSelection::j)
        .def_readonly("l", &LagSelection::l)
        .def_property_readonly("n_terms", &LagSelection::n_terms);

    py::class_<RestrictedARModel>(m, "RestrictedARModel")
        .def(py::init<std::vector<int>, std::vector<double>, double>(), py::arg("j"),
             py::arg("a"), py::arg("b"))
        .def_property_readonly("j", &RestrictedARModel::lags)
        .def_property_readonly("a", &RestrictedARModel::coeffs)
        .def_property_readonly("b", &RestrictedARModel::noise_coeff)
        .def_property_readonly("order", &RestrictedARModel::order)
        .def_property_readonly("n_terms", &RestrictedARModel::n_terms)
        .def("dense_coeffs", &RestrictedARModel::dense_coeffs);

    py::enum_<AutocovMethod>(m, "AutocovMethod")
        .value("direct_solve", AutocovMethod::direct_solve)
        .value("recursive", AutocovMethod::recursive);

    m.def("theoretical_autocovariance", &theoretical_autocovariance, py::arg("model"),
          py::arg("n"), py::arg("method") = AutocovMethod::direct_solve);
    m.def("fit_linear", &fit_linear, py::arg("target"), py::arg("selection"));
    m.def("fit_nonlinear", &fit_nonlinear, py::arg("target"), py::arg("j"),
          py::arg("match_lags"));
    m.def("ar_spectrum", &ar_spectrum, py::arg("model"), py::arg("k_nd"), py::arg("k_max"),
          py::arg("variance_scale") = 1.0);
    m.def("ar_spectrum_from_autocovariance", &ar_spectrum_from_autocovariance,
          py::arg("model"), py::arg("k_nd"), py::arg("k_max"),
          py::arg("variance_scale") = 1.0);
    m.def("mse", &mse, py::arg("model"), py::arg("target"), py::arg("max_lag_M") = 41);

    // --- VAR core ----------------------------------------------------------
    py::class_<RestrictedVARModel>(m, "RestrictedVARModel")
        .def(py::init<int, std::vector<int>, std::vector<Eigen::MatrixXd>, Eigen::MatrixXd>(),
             py::arg("k"), py::arg("j"), py::arg("A"), py::arg("B"))
        .def_property_readonly("k", &RestrictedVARModel::dim)
        .def_property_readonly("j", &RestrictedVARModel::lags)
        .def_property_readonly("A", &RestrictedVARModel::coeff_matrices)
        .def_property_readonly("B", &RestrictedVARModel::noise_matrix)
        .def_property_readonly("order", &RestrictedVARModel::order)
        .def_property_readonly("n_terms", &RestrictedVARModel::n_terms)
        .def("companion_matrix", &RestrictedVARModel::companion_matrix);

    m.def(
        "fit_var_linear",
        [](const CovarianceMatrixFunction& target, const LagSelection& sel) {
            return fit_var_linear(target, sel);
        },
        py::arg("target"), py::arg("selection"));
    m.def("covariance_via_companion", &covariance_via_companion, py::arg("model"),
          py::arg("n"), py::arg("state_dim_guard") = 200);
    m.def("covariance_via_vma", &covariance_via_vma, py::arg("model"), py::arg("q"),
          py::arg("n"));
    m.def("suggest_vma_truncation", &suggest_vma_truncation, py::arg("model"),
          py::arg("cap") = 10000);

    // --- optimizer ---------------------------------------------------------
    py::class_<GAConfig>(m, "GAConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &GAConfig::population_size)
        .def_readwrite("generations", &GAConfig::generations)
        .def_readwrite("crossover_rate", &GAConfig::crossover_rate)
        .def_readwrite("mutation_rate", &GAConfig::mutation_rate)
        .def_readwrite("elitism_count", &GAConfig::elitism_count)
        .def_readwrite("rng_seed", &GAConfig::rng_seed)
        .def_readwrite("delta", &GAConfig::delta)
        .def_readwrite("max_lag", &GAConfig::max_lag)
        .def_readwrite("mse_max_lag", &GAConfig::mse_max_lag)
        .def_readwrite("tournament_size", &GAConfig::tournament_size);

    py::class_<GenerationRecord>(m, "GenerationRecord")
        .def_readonly("generation", &GenerationRecord::generation)
        .def_readonly("best_mse", &GenerationRecord::best_mse)
        .def_readonly("best_j", &GenerationRecord::best_j)
        .def_readonly("best_l", &GenerationRecord::best_l);

    py::class_<OptimizeResult>(m, "OptimizeResult")
        .def_readonly("selection", &OptimizeResult::selection)
        .def_readonly("model", &OptimizeResult::model)
        .def_readonly("mse", &OptimizeResult::mse)
        .def_readonly("history", &OptimizeResult::history);

    py::class_<BenchmarkRow>(m, "BenchmarkRow")
        .def_readonly("n_terms", &BenchmarkRow::n_terms)
        .def_readonly("approach", &BenchmarkRow::approach)
        .def_readonly("mse", &BenchmarkRow::mse_value)
        .def_readonly("j", &BenchmarkRow::j)
        .def_readonly("l", &BenchmarkRow::l);

    m.def("baseline_yw", &baseline_yw, py::arg("n_terms"));
    m.def("baseline_krenk", &baseline_krenk, py::arg("n_terms"));
    m.def("evaluate_selection", &evaluate_selection, py::arg("target"), py::arg("selection"),
          py::arg("mse_max_lag") = 41);
    m.def("optimize", &optimize, py::arg("target"), py::arg("n_terms"), py::arg("config"),
          py::arg("extra_seeds") = std::vector<LagSelection>{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "benchmark",
        [](const TargetAutocovariance& target, int n_min, int n_max, const GAConfig& config,
           int delta0, int delta1) {
            std::vector<GenerationRecord> history;
            auto rows = benchmark(target, n_min, n_max, config, delta0, delta1, &history);
            return py::make_tuple(rows, history);
        },
        py::arg("target"), py::arg("n_min"), py::arg("n_max"), py::arg("config"),
        py::arg("delta0") = 0, py::arg("delta1") = 10,
        "Returns (rows, ga_history)");

    // --- synthesis ---------------------------------------------------------
    py::class_<SynthesisConfig>(m, "SynthesisConfig")
        .def(py::init<>())
        .def_readwrite("length", &SynthesisConfig::length)
        .def_readwrite("n_realizations", &SynthesisConfig::n_realizations)
        .def_readwrite("burn_in", &SynthesisConfig::burn_in)
        .def_readwrite("rng_seed", &SynthesisConfig::rng_seed);

    py::class_<EnsembleEstimate>(m, "EnsembleEstimate")
        .def_readonly("gamma_e", &EnsembleEstimate::gamma_e)
        .def_readonly("n_realizations", &EnsembleEstimate::n_realizations)
        .def_readonly("max_lag", &EnsembleEstimate::max_lag);

    py::class_<EnsembleMatrixEstimate>(m, "EnsembleMatrixEstimate")
        .def_readonly("gamma_e", &EnsembleMatrixEstimate::gamma_e)
        .def_readonly("n_realizations", &EnsembleMatrixEstimate::n_realizations)
        .def_readonly("max_lag", &EnsembleMatrixEstimate::max_lag);

    m.def("synthesize_ar", &synthesize_ar, py::arg("model"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("synthesize_var", &synthesize_var, py::arg("model"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_autocovariance",
          py::overload_cast<const std::vector<double>&, int>(&sample_autocovariance),
          py::arg("series"), py::arg("max_lag"));
    m.def("sample_autocovariance_matrix",
          py::overload_cast<const Eigen::MatrixXd&, int>(&sample_autocovariance),
          py::arg("series"), py::arg("max_lag"));
    m.def("ensemble_autocovariance",
          py::overload_cast<const std::vector<std::vector<double>>&, int>(
              &ensemble_autocovariance),
          py::arg("realizations"), py::arg("max_lag"));
    m.def("ensemble_autocovariance_matrix",
          py::overload_cast<const std::vector<Eigen::MatrixXd>&, int>(&ensemble_autocovariance),
          py::arg("realizations"), py::arg("max_lag"));

    // raw counter-based generator, exposed for reproducibility checks
    m.def(
        "philox_block",
        [](std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
            const auto words = Philox4x64(seed, stream)(block);
            return py::make_tuple(words[0], words[1], words[2], words[3]);
        },
        py::arg("seed"), py::arg("stream"), py::arg("block"));

    // --- file formats --------------------------------------------------------
    m.def("write_target_csv", &write_target_csv, py::arg("path"), py::arg("target"));
    m.def("read_target_csv", &read_target_csv, py::arg("path"), py::arg("delta_r") = 0.0);
    m.def("write_matrix_target_csv", &write_matrix_target_csv, py::arg("path"),
          py::arg("target"));
    m.def("read_matrix_target_csv", &read_matrix_target_csv, py::arg("path"),
          py::arg("delta_r") = 1.0);
    m.def(
        "write_model_json",
        [](const std::filesystem::path& path, const RestrictedARModel& model) {
            write_model_json(path, model);
        },
        py::arg("path"), py::arg("model"));
    m.def(
        "write_model_json",
        [](const std::filesystem::path& path, const RestrictedVARModel& model) {
            write_model_json(path, model);
        },
        py::arg("path"), py::arg("model"));
    m.def(
        "read_model_json",
        [](const std::filesystem::path& path) -> py::object {
            const auto model = read_model_json(path);
            if (std::holds_alternative<RestrictedARModel>(model))
                return py::cast(std::get<RestrictedARModel>(model));
            return py::cast(std::get<RestrictedVARModel>(model));
        },
        py::arg("path"));
}
