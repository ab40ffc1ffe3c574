#pragma once

#include "arcov/ar.hpp"
#include "arcov/ga.hpp"
#include "arcov/synth.hpp"
#include "arcov/target.hpp"
#include "arcov/var.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace arcov {

using ModelVariant = std::variant<RestrictedARModel, RestrictedVARModel>;

/// Write `text` to `path` atomically (temp file in the same directory,
/// then rename).
void atomic_write(const std::filesystem::path& path, const std::string& text);

// --- CSV formats (UTF-8, LF line endings, '.' decimal point) -------------

/// Target autocovariance, header "lag,value". Values are printed with 17
/// significant digits so that export/import round-trips exactly.
void write_target_csv(const std::filesystem::path& path, const TargetAutocovariance& target);
TargetAutocovariance read_target_csv(const std::filesystem::path& path, double delta_r = 0.0);

/// Covariance matrix function, header "lag,i,j,value" (i, j zero-based).
void write_matrix_target_csv(const std::filesystem::path& path,
                             const CovarianceMatrixFunction& target);
CovarianceMatrixFunction read_matrix_target_csv(const std::filesystem::path& path,
                                                double delta_r = 1.0);

/// Autocovariance sequence, header "lag,value".
void write_autocovariance_csv(const std::filesystem::path& path,
                              const std::vector<double>& gamma);

/// Spectrum samples, header "k,value".
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& k,
                        const std::vector<double>& s);

/// Fit report, header "lag,target,model,abs_err".
void write_fit_report_csv(const std::filesystem::path& path,
                          const std::vector<double>& target_values,
                          const std::vector<double>& model_values);

/// Ensemble comparison, header "lag,gamma_e,gamma_ar,abs_err".
void write_ensemble_csv(const std::filesystem::path& path, const std::vector<double>& gamma_e,
                        const std::vector<double>& gamma_ar);

/// Benchmark table, header "N,approach,mse,j,l"; j and l semicolon-joined.
void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRow>& rows);

/// GA run log: one JSON object per line,
/// {"gen":g,"best_mse":...,"best_j":[...],"best_l":[...]}.
void write_ga_log_jsonl(const std::filesystem::path& path,
                        const std::vector<GenerationRecord>& history);

/// Realization as CSV, header "t,z" (univariate) or "t,z1,...,zk".
void write_realization_csv(const std::filesystem::path& path,
                           const std::vector<double>& series);
void write_realization_csv(const std::filesystem::path& path, const Eigen::MatrixXd& series);

/// Realization as raw binary: 16-byte header (magic "ARSYN1\0\0", u32 k,
/// u32 reserved), then little-endian IEEE doubles, time-major.
void write_realization_bin(const std::filesystem::path& path,
                           const std::vector<double>& series);
void write_realization_bin(const std::filesystem::path& path, const Eigen::MatrixXd& series);

// --- model JSON -----------------------------------------------------------

/// {"kind":"ar","j":[...],"a":[...],"b":<number>}
nlohmann::json model_to_json(const RestrictedARModel& model);
/// {"kind":"var","k":K,"j":[...],"A":[[[...]]],"B":[[...]]}, A row-major.
nlohmann::json model_to_json(const RestrictedVARModel& model);

ModelVariant model_from_json(const nlohmann::json& doc);

void write_model_json(const std::filesystem::path& path, const ModelVariant& model);
ModelVariant read_model_json(const std::filesystem::path& path);

} // namespace arcov
