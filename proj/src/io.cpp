#include "arcov/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace arcov {

namespace {

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != expected_header)
        throw std::invalid_argument(path.string() + ": expected header '" + expected_header
                                    + "', got '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        rows.push_back(split_line(line));
    }
    return rows;
}

double parse_double(const std::string& s, const std::filesystem::path& path)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(path.string() + ": bad numeric field '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::filesystem::path& path)
{
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(path.string() + ": bad integer field '" + s + "'");
    }
}

std::string join_semicolon(const std::vector<int>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

void atomic_write(const std::filesystem::path& path, const std::string& text)
{
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::random_device rd;
    fs::path tmp;
    do {
        tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    } while (fs::exists(tmp));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out)
            throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_target_csv(const std::filesystem::path& path, const TargetAutocovariance& target)
{
    std::string text = "lag,value\n";
    for (int l = 0; l <= target.max_lag(); ++l)
        text += std::to_string(l) + "," + fmt_double(target(l)) + "\n";
    atomic_write(path, text);
}

TargetAutocovariance read_target_csv(const std::filesystem::path& path, double delta_r)
{
    const auto rows = read_csv(path, "lag,value");
    std::vector<double> values(rows.size(), 0.0);
    for (const auto& row : rows) {
        if (row.size() != 2)
            throw std::invalid_argument(path.string() + ": expected 2 fields per row");
        const long lag = parse_long(row[0], path);
        if (lag < 0 || static_cast<std::size_t>(lag) >= values.size())
            throw std::invalid_argument(path.string() + ": lags must be 0..n without gaps");
        values[static_cast<std::size_t>(lag)] = parse_double(row[1], path);
    }
    return TargetAutocovariance(std::move(values), delta_r > 0.0 ? delta_r : 1.0);
}

void write_matrix_target_csv(const std::filesystem::path& path,
                             const CovarianceMatrixFunction& target)
{
    const int k = target.dim();
    std::string text = "lag,i,j,value\n";
    for (int l = 0; l <= target.max_lag(); ++l) {
        const Eigen::MatrixXd m = target.at(l);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                text += std::to_string(l) + "," + std::to_string(r) + "," + std::to_string(c)
                    + "," + fmt_double(m(r, c)) + "\n";
    }
    atomic_write(path, text);
}

CovarianceMatrixFunction read_matrix_target_csv(const std::filesystem::path& path,
                                                double delta_r)
{
    const auto rows = read_csv(path, "lag,i,j,value");
    long max_lag = -1, dim = 0;
    for (const auto& row : rows) {
        if (row.size() != 4)
            throw std::invalid_argument(path.string() + ": expected 4 fields per row");
        max_lag = std::max(max_lag, parse_long(row[0], path));
        dim = std::max({dim, parse_long(row[1], path) + 1, parse_long(row[2], path) + 1});
    }
    if (max_lag < 0 || dim < 1)
        throw std::invalid_argument(path.string() + ": no data rows");
    std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(max_lag) + 1,
                                      Eigen::MatrixXd::Zero(dim, dim));
    for (const auto& row : rows) {
        const long l = parse_long(row[0], path);
        const long r = parse_long(row[1], path);
        const long c = parse_long(row[2], path);
        if (l < 0 || r < 0 || c < 0 || r >= dim || c >= dim)
            throw std::invalid_argument(path.string() + ": index out of range");
        mats[static_cast<std::size_t>(l)](r, c) = parse_double(row[3], path);
    }
    return CovarianceMatrixFunction(std::move(mats), delta_r);
}

void write_autocovariance_csv(const std::filesystem::path& path,
                              const std::vector<double>& gamma)
{
    std::string text = "lag,value\n";
    for (std::size_t l = 0; l < gamma.size(); ++l)
        text += std::to_string(l) + "," + fmt_double(gamma[l]) + "\n";
    atomic_write(path, text);
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& k,
                        const std::vector<double>& s)
{
    if (k.size() != s.size())
        throw std::invalid_argument("spectrum CSV: size mismatch");
    std::string text = "k,value\n";
    for (std::size_t i = 0; i < k.size(); ++i)
        text += fmt_double(k[i]) + "," + fmt_double(s[i]) + "\n";
    atomic_write(path, text);
}

void write_fit_report_csv(const std::filesystem::path& path,
                          const std::vector<double>& target_values,
                          const std::vector<double>& model_values)
{
    if (target_values.size() != model_values.size())
        throw std::invalid_argument("fit report CSV: size mismatch");
    std::string text = "lag,target,model,abs_err\n";
    for (std::size_t l = 0; l < target_values.size(); ++l)
        text += std::to_string(l) + "," + fmt_double(target_values[l]) + ","
            + fmt_double(model_values[l]) + ","
            + fmt_double(std::abs(target_values[l] - model_values[l])) + "\n";
    atomic_write(path, text);
}

void write_ensemble_csv(const std::filesystem::path& path, const std::vector<double>& gamma_e,
                        const std::vector<double>& gamma_ar)
{
    if (gamma_e.size() != gamma_ar.size())
        throw std::invalid_argument("ensemble CSV: size mismatch");
    std::string text = "lag,gamma_e,gamma_ar,abs_err\n";
    for (std::size_t l = 0; l < gamma_e.size(); ++l)
        text += std::to_string(l) + "," + fmt_double(gamma_e[l]) + "," + fmt_double(gamma_ar[l])
            + "," + fmt_double(std::abs(gamma_e[l] - gamma_ar[l])) + "\n";
    atomic_write(path, text);
}

void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRow>& rows)
{
    std::string text = "N,approach,mse,j,l\n";
    for (const auto& row : rows)
        text += std::to_string(row.n_terms) + "," + row.approach + ","
            + fmt_double(row.mse_value) + "," + join_semicolon(row.j) + ","
            + join_semicolon(row.l) + "\n";
    atomic_write(path, text);
}

void write_ga_log_jsonl(const std::filesystem::path& path,
                        const std::vector<GenerationRecord>& history)
{
    std::string text;
    for (const auto& rec : history) {
        nlohmann::json line = {{"gen", rec.generation},
                               {"best_mse", rec.best_mse},
                               {"best_j", rec.best_j},
                               {"best_l", rec.best_l}};
        text += line.dump() + "\n";
    }
    atomic_write(path, text);
}

void write_realization_csv(const std::filesystem::path& path, const std::vector<double>& series)
{
    std::string text = "t,z\n";
    for (std::size_t t = 0; t < series.size(); ++t)
        text += std::to_string(t) + "," + fmt_double(series[t]) + "\n";
    atomic_write(path, text);
}

void write_realization_csv(const std::filesystem::path& path, const Eigen::MatrixXd& series)
{
    std::string text = "t";
    for (Eigen::Index r = 0; r < series.rows(); ++r)
        text += ",z" + std::to_string(r + 1);
    text += "\n";
    for (Eigen::Index t = 0; t < series.cols(); ++t) {
        text += std::to_string(t);
        for (Eigen::Index r = 0; r < series.rows(); ++r)
            text += "," + fmt_double(series(r, t));
        text += "\n";
    }
    atomic_write(path, text);
}

namespace {

std::string bin_payload(const double* data, std::size_t count, std::uint32_t k)
{
    static_assert(sizeof(double) == 8);
    std::string text;
    text.reserve(16 + count * 8);
    text.append("ARSYN1\0\0", 8);
    const std::uint32_t reserved = 0;
    text.append(reinterpret_cast<const char*>(&k), 4);
    text.append(reinterpret_cast<const char*>(&reserved), 4);
    text.append(reinterpret_cast<const char*>(data), count * 8);
    return text;
}

} // namespace

void write_realization_bin(const std::filesystem::path& path, const std::vector<double>& series)
{
    atomic_write(path, bin_payload(series.data(), series.size(), 1));
}

void write_realization_bin(const std::filesystem::path& path, const Eigen::MatrixXd& series)
{
    // time-major: sample t contributes k consecutive doubles
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(series.size()));
    for (Eigen::Index t = 0; t < series.cols(); ++t)
        for (Eigen::Index r = 0; r < series.rows(); ++r)
            flat.push_back(series(r, t));
    atomic_write(path, bin_payload(flat.data(), flat.size(),
                                   static_cast<std::uint32_t>(series.rows())));
}

nlohmann::json model_to_json(const RestrictedARModel& model)
{
    return {{"kind", "ar"}, {"j", model.lags()}, {"a", model.coeffs()},
            {"b", model.noise_coeff()}};
}

nlohmann::json model_to_json(const RestrictedVARModel& model)
{
    nlohmann::json a_list = nlohmann::json::array();
    for (const auto& m : model.coeff_matrices()) {
        nlohmann::json mat = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                row.push_back(m(r, c));
            mat.push_back(row);
        }
        a_list.push_back(mat);
    }
    nlohmann::json b_mat = nlohmann::json::array();
    const auto& b = model.noise_matrix();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            row.push_back(b(r, c));
        b_mat.push_back(row);
    }
    return {{"kind", "var"}, {"k", model.dim()}, {"j", model.lags()}, {"A", a_list},
            {"B", b_mat}};
}

namespace {

Eigen::MatrixXd json_to_matrix(const nlohmann::json& doc, int k)
{
    Eigen::MatrixXd m(k, k);
    if (!doc.is_array() || static_cast<int>(doc.size()) != k)
        throw std::invalid_argument("model JSON: matrix must be a k x k array of rows");
    for (int r = 0; r < k; ++r) {
        const auto& row = doc[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != k)
            throw std::invalid_argument("model JSON: matrix must be a k x k array of rows");
        for (int c = 0; c < k; ++c)
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

} // namespace

ModelVariant model_from_json(const nlohmann::json& doc)
{
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "ar") {
        return RestrictedARModel(doc.at("j").get<std::vector<int>>(),
                                 doc.at("a").get<std::vector<double>>(),
                                 doc.at("b").get<double>());
    }
    if (kind == "var") {
        const int k = doc.at("k").get<int>();
        std::vector<Eigen::MatrixXd> a_mats;
        for (const auto& m : doc.at("A"))
            a_mats.push_back(json_to_matrix(m, k));
        return RestrictedVARModel(k, doc.at("j").get<std::vector<int>>(), std::move(a_mats),
                                  json_to_matrix(doc.at("B"), k));
    }
    throw std::invalid_argument("model JSON: unknown kind '" + kind + "'");
}

void write_model_json(const std::filesystem::path& path, const ModelVariant& model)
{
    const nlohmann::json doc =
        std::visit([](const auto& m) { return model_to_json(m); }, model);
    atomic_write(path, doc.dump(2) + "\n");
}

ModelVariant read_model_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    nlohmann::json doc;
    in >> doc;
    return model_from_json(doc);
}

} // namespace arcov
