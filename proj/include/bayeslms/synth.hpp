// System-identification scenarios: synthetic stationary and random-walk
// channels, plus CSV ingestion of recorded tracking data.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bayeslms/csv.hpp"
#include "bayeslms/model.hpp"
#include "bayeslms/rng.hpp"

namespace bayeslms {

enum class RegressorKind { iid, shift };

/// A data stream with (optionally) the true weights at every step.
struct Scenario {
    /// truth[k] generated samples[k]; empty when the ground truth is unknown.
    std::vector<Vector> truth;
    std::vector<RegressionSample> samples;
    /// Generating parameters; absent for ingested data.
    std::optional<SsmParams> params_hint;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] std::size_t dim() const noexcept {
        return samples.empty() ? 0 : static_cast<std::size_t>(samples.front().regressor.size());
    }
    [[nodiscard]] bool has_truth() const noexcept { return !truth.empty(); }
};

/// Noise variance giving `snr_db` for a unit-power signal. Regressors are
/// N(0, I) and the initial weights have unit norm, so E[(x^T w)^2] = 1.
[[nodiscard]] inline double noise_var_for_snr(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

/// Unit-norm truth with i.i.d. U[-1, 1] entries before normalization.
[[nodiscard]] inline Vector random_unit_weights(std::size_t m, Rng& rng) {
    Vector w(static_cast<Eigen::Index>(m));
    do {
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            w[i] = rng.uniform(-1.0, 1.0);
        }
    } while (w.squaredNorm() == 0.0);
    return w / w.norm();
}

/// Random-walk channel: w_0 unit-norm, w_k = w_{k-1} + N(0, drift_var I),
/// y_k = x_k^T w_k + N(0, sigma_n^2). Regressors are either i.i.d. N(0, I) or
/// a tapped delay line x_k[j] = u_{k-j} over an i.i.d. N(0, 1) input u.
[[nodiscard]] inline Scenario gen_random_walk(std::size_t m, double snr_db, double drift_var,
                                              std::size_t n_steps, std::uint64_t seed,
                                              RegressorKind kind = RegressorKind::iid) {
    if (m < 1 || n_steps < 1) {
        throw std::invalid_argument("scenario needs m >= 1 and n_steps >= 1");
    }
    if (!(drift_var >= 0.0) || !std::isfinite(drift_var) || !std::isfinite(snr_db)) {
        throw std::invalid_argument("drift_var must be finite and >= 0; snr_db must be finite");
    }
    const double noise_var = noise_var_for_snr(snr_db);
    const double noise_sd = std::sqrt(noise_var);
    const double drift_sd = std::sqrt(drift_var);
    const auto dim = static_cast<Eigen::Index>(m);

    Rng rng(seed);
    Scenario sc;
    sc.seed = seed;
    sc.params_hint = make_params(noise_var, drift_var, m);
    sc.truth.reserve(n_steps);
    sc.samples.reserve(n_steps);

    Vector w = random_unit_weights(m, rng);
    Vector delay_line = Vector::Zero(dim);
    if (kind == RegressorKind::shift) {
        // u_{-1}, ..., u_{-(m-1)} so the first regressor is fully populated.
        for (Eigen::Index j = 1; j < dim; ++j) {
            delay_line[j] = rng.normal();
        }
    }

    for (std::size_t k = 0; k < n_steps; ++k) {
        if (k > 0 && drift_var > 0.0) {
            for (Eigen::Index i = 0; i < dim; ++i) {
                w[i] += drift_sd * rng.normal();
            }
        }
        Vector x(dim);
        if (kind == RegressorKind::iid) {
            for (Eigen::Index i = 0; i < dim; ++i) {
                x[i] = rng.normal();
            }
        } else {
            for (Eigen::Index j = dim - 1; j > 0; --j) {
                delay_line[j] = delay_line[j - 1];
            }
            delay_line[0] = rng.normal();
            x = delay_line;
        }
        const double y = x.dot(w) + noise_sd * rng.normal();
        sc.truth.push_back(w);
        sc.samples.push_back({std::move(x), y});
    }
    return sc;
}

/// Fixed unit-norm truth, i.i.d. N(0, I) regressors.
[[nodiscard]] inline Scenario gen_stationary(std::size_t m, double snr_db, std::size_t n_steps,
                                             std::uint64_t seed) {
    return gen_random_walk(m, snr_db, 0.0, n_steps, seed, RegressorKind::iid);
}

// ---- CSV ----
//
// Real schema:    k,y,x_0..x_{M-1}[,w_0..w_{M-1}]
// Complex schema: k,y_re,y_im,x_re_0..,x_im_0..[,w_re_0..,w_im_0..]
// A complex file becomes two real scenarios (real part, imaginary part).

inline void write_tracking_csv(std::ostream& os, const Scenario& sc) {
    const std::size_t m = sc.dim();
    os << "k,y";
    for (std::size_t i = 0; i < m; ++i) {
        os << ",x_" << i;
    }
    if (sc.has_truth()) {
        for (std::size_t i = 0; i < m; ++i) {
            os << ",w_" << i;
        }
    }
    os << '\n';
    for (std::size_t k = 0; k < sc.size(); ++k) {
        const auto& s = sc.samples[k];
        os << k << ',' << csv::format_double(s.observation);
        for (Eigen::Index i = 0; i < s.regressor.size(); ++i) {
            os << ',' << csv::format_double(s.regressor[i]);
        }
        if (sc.has_truth()) {
            for (Eigen::Index i = 0; i < sc.truth[k].size(); ++i) {
                os << ',' << csv::format_double(sc.truth[k][i]);
            }
        }
        os << '\n';
    }
}

inline void write_tracking_csv(const std::string& path, const Scenario& sc) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    write_tracking_csv(os, sc);
    if (!os) {
        throw DataError("write to '" + path + "' failed");
    }
}

namespace detail {

struct ColumnGroup {
    std::string prefix;
    std::size_t first = 0;
    std::size_t count = 0;
};

// Reads consecutive columns prefix0, prefix1, ... starting at `pos`.
inline ColumnGroup indexed_columns(const std::vector<std::string_view>& header, std::size_t pos,
                                   const std::string& prefix) {
    ColumnGroup g{prefix, pos, 0};
    while (pos + g.count < header.size() && header[pos + g.count] == prefix + std::to_string(g.count)) {
        ++g.count;
    }
    return g;
}

inline std::vector<Scenario> parse_tracking_csv(std::istream& is, const std::string& source) {
    std::string line;
    if (!std::getline(is, line)) {
        throw DataError(source + ": empty file", 1);
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = csv::split(line);
    if (header.size() < 3 || header[0] != "k") {
        throw DataError(source + ":1: header must start with 'k'", 1);
    }

    const bool complex = header[1] == "y_re";
    std::vector<std::pair<std::size_t, std::size_t>> y_cols;  // (column, part)
    std::vector<ColumnGroup> x_groups;
    std::vector<ColumnGroup> w_groups;
    std::size_t pos = 0;
    if (complex) {
        if (header.size() < 3 || header[2] != "y_im") {
            throw DataError(source + ":1: complex header needs y_re,y_im", 1);
        }
        y_cols = {{1, 0}, {2, 1}};
        x_groups.push_back(indexed_columns(header, 3, "x_re_"));
        x_groups.push_back(indexed_columns(header, x_groups[0].first + x_groups[0].count, "x_im_"));
        pos = x_groups[1].first + x_groups[1].count;
        w_groups.push_back(indexed_columns(header, pos, "w_re_"));
        w_groups.push_back(indexed_columns(header, pos + w_groups[0].count, "w_im_"));
        pos += w_groups[0].count + w_groups[1].count;
    } else {
        if (header[1] != "y") {
            throw DataError(source + ":1: second column must be 'y'", 1);
        }
        y_cols = {{1, 0}};
        x_groups.push_back(indexed_columns(header, 2, "x_"));
        pos = 2 + x_groups[0].count;
        w_groups.push_back(indexed_columns(header, pos, "w_"));
        pos += w_groups[0].count;
    }

    const std::size_t m = x_groups[0].count;
    if (m == 0) {
        throw DataError(source + ":1: no regressor columns", 1);
    }
    for (const auto& g : x_groups) {
        if (g.count != m) {
            throw DataError(source + ":1: inconsistent regressor column count", 1);
        }
    }
    const bool with_truth = w_groups[0].count > 0;
    for (const auto& g : w_groups) {
        if (g.count != (with_truth ? m : 0)) {
            throw DataError(source + ":1: truth columns must number 0 or " + std::to_string(m), 1);
        }
    }
    if (pos != header.size()) {
        throw DataError(source + ":1: unexpected column '" + std::string(header[pos]) + "'", 1);
    }

    const std::size_t parts = y_cols.size();
    std::vector<Scenario> out(parts);
    const auto dim = static_cast<Eigen::Index>(m);
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != header.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(header.size()) + " columns, got " + std::to_string(fields.size()),
                            line_no);
        }
        long long k = 0;
        if (!csv::parse_long(fields[0], k)) {
            throw DataError(source + ":" + std::to_string(line_no) + ": bad step index '" +
                                std::string(fields[0]) + "'",
                            line_no);
        }
        auto number = [&](std::size_t col) {
            double v = 0.0;
            if (!csv::parse_double(fields[col], v) || !std::isfinite(v)) {
                throw DataError(source + ":" + std::to_string(line_no) + ": bad number '" +
                                    std::string(fields[col]) + "' in column '" + std::string(header[col]) + "'",
                                line_no);
            }
            return v;
        };
        for (std::size_t part = 0; part < parts; ++part) {
            RegressionSample s;
            s.observation = number(y_cols[part].first);
            s.regressor.resize(dim);
            for (std::size_t i = 0; i < m; ++i) {
                s.regressor[static_cast<Eigen::Index>(i)] = number(x_groups[part].first + i);
            }
            out[part].samples.push_back(std::move(s));
            if (with_truth) {
                Vector w(dim);
                for (std::size_t i = 0; i < m; ++i) {
                    w[static_cast<Eigen::Index>(i)] = number(w_groups[part].first + i);
                }
                out[part].truth.push_back(std::move(w));
            }
        }
    }
    if (out[0].samples.empty()) {
        throw DataError(source + ": no data rows", line_no);
    }
    return out;
}

inline std::vector<Scenario> open_and_parse(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw DataError("cannot open '" + path + "'");
    }
    return parse_tracking_csv(is, path);
}

} // namespace detail

/// All parts of a tracking file: one scenario for the real schema, two
/// (real, imaginary) for the complex schema.
[[nodiscard]] inline std::vector<Scenario> load_tracking_parts(const std::string& path) {
    return detail::open_and_parse(path);
}

/// Loads a real-valued tracking file.
[[nodiscard]] inline Scenario load_tracking_csv(const std::string& path) {
    auto parts = detail::open_and_parse(path);
    if (parts.size() != 1) {
        throw DataError(path + ": complex-valued file; use load_tracking_parts");
    }
    return std::move(parts.front());
}

[[nodiscard]] inline std::vector<Scenario> parse_tracking_csv(const std::string& text,
                                                              const std::string& source = "<memory>") {
    std::istringstream is(text);
    return detail::parse_tracking_csv(is, source);
}

} // namespace bayeslms
