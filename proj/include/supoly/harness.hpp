// harness.hpp: experiment configuration, dispatch, CSV / JSON rendering.
//
// run_experiment() is a pure function of the configuration (apart from the
// wall-clock field of the JSON summary); the CLI only adds argument parsing and
// file handling. CSV output never depends on the thread count.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "supoly/supoly.hpp"

namespace supoly {

/// Invalid experiment configuration (CLI exit status 2).
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

inline std::string fmt17(double x) { return format_g17(x); }

/// Minimal ordered JSON object writer; doubles use 17 significant digits.
class JsonObject {
public:
    JsonObject& add(const std::string& key, double v) {
        return raw(key, std::isfinite(v) ? fmt17(v) : std::string("null"));
    }
    JsonObject& add(const std::string& key, std::int64_t v) { return raw(key, std::to_string(v)); }
    JsonObject& add(const std::string& key, std::uint64_t v) { return raw(key, std::to_string(v)); }
    JsonObject& add(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    JsonObject& add(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonObject& add(const std::string& key, const std::string& v) { return raw(key, quote(v)); }
    JsonObject& add(const std::string& key, const char* v) { return raw(key, quote(v)); }
    JsonObject& add(const std::string& key, const JsonObject& v) { return raw(key, v.str()); }
    JsonObject& add(const std::string& key, const std::vector<JsonObject>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
        return raw(key, s + "]");
    }
    JsonObject& raw(const std::string& key, const std::string& value) {
        fields_.emplace_back(key, value);
        return *this;
    }
    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < fields_.size(); ++i)
            s += (i ? "," : "") + quote(fields_[i].first) + ":" + fields_[i].second;
        return s + "}";
    }

    static std::string quote(const std::string& v) {
        std::string s = "\"";
        for (char c : v) {
            if (c == '"' || c == '\\') s += '\\';
            if (c == '\n') {
                s += "\\n";
                continue;
            }
            s += c;
        }
        return s + "\"";
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

// ---------------------------------------------------------------------------
// configuration

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"sample",   "roots",       "counting",     "sphere-avg",
                                                   "hole-mc",  "omega-bound", "fit-exponent", "deviation",
                                                   "invariance-check"};
    return names;
}

struct ExperimentConfig {
    std::string subcommand;
    int m = 1;
    std::vector<int> N_list{10};
    std::vector<double> r_list{1.0};
    double kappa = 1.05;
    double Delta = 0.2;
    std::uint64_t trials = 1000;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;  // `sample` only
    int threads = default_threads();
    bool fit = false;
    double zeta_re = 0.0;
    double zeta_im = 0.0;
    std::string source = "mc";  // fit-exponent: mc | omega
    std::string output;         // base path without extension; empty = default

    void validate() const {
        auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
            fail("unknown subcommand '" + subcommand + "'");
        if (m < 1) fail("--m must be >= 1");
        if (N_list.empty()) fail("--N / --N-list must name at least one degree");
        for (int N : N_list)
            if (N < 0) fail("degrees must be >= 0");
        if (r_list.empty()) fail("--r / --r-list must name at least one radius");
        for (double r : r_list)
            if (!(r > 0.0) || !std::isfinite(r)) fail("radii must be positive and finite");
        if (!(kappa > 1.0) || !std::isfinite(kappa)) fail("--kappa must exceed 1");
        if (!(Delta > 0.0 && Delta < 1.0)) fail("--Delta must lie in (0, 1)");
        if (threads < 1) fail("--threads must be >= 1");
        if (!std::isfinite(zeta_re) || !std::isfinite(zeta_im)) fail("zeta must be finite");

        const bool exact_m1 = subcommand == "roots" || subcommand == "hole-mc" || subcommand == "deviation" ||
                              (subcommand == "fit-exponent" && source == "mc");
        if (exact_m1 && m != 1)
            fail(subcommand + " uses exact root counting and requires --m 1 (m >= 2 holes: see omega-bound)");
        if ((subcommand != "sample" && subcommand != "invariance-check" && subcommand != "omega-bound") &&
            trials < 1)
            fail("--trials must be >= 1");
        if (subcommand == "roots" || subcommand == "deviation" || subcommand == "omega-bound")
            for (int N : N_list)
                if (N < 1) fail(subcommand + " requires N >= 1");
        if (subcommand == "sphere-avg" && samples < 2) fail("--samples must be >= 2");
        if (subcommand == "counting" && samples == 1) fail("--samples must be 0 (exact only) or >= 2");
        if (subcommand == "fit-exponent" || (subcommand == "omega-bound" && fit)) {
            if (N_list.size() < 3) fail("exponent fits need at least three degrees");
            for (std::size_t i = 1; i < N_list.size(); ++i)
                if (N_list[i] <= N_list[i - 1]) fail("--N-list must be strictly increasing for exponent fits");
            if (r_list.size() != 1) fail("exponent fits take a single radius");
            for (int N : N_list)
                if (N < 1) fail("exponent fits require N >= 1");
        }
        if (subcommand == "fit-exponent" && source != "mc" && source != "omega")
            fail("--source must be 'mc' or 'omega'");
        if (subcommand == "invariance-check") {
            if (N_list.size() != 1) fail("invariance-check takes a single --N");
            if (N_list[0] > 30) fail("invariance-check builds dense matrices; use N <= 30");
            if (trials < 2) fail("--trials must be >= 2 for the covariance check");
        }
    }
};

/// Parses `a:b:step` (inclusive) or a comma list `a,b,c`.
inline std::vector<int> parse_degree_list(const std::string& text) {
    std::vector<int> out;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(s, &pos);
            if (pos != s.size()) throw ConfigError("bad integer '" + s + "'");
            return static_cast<int>(v);
        } catch (const std::logic_error&) {
            throw ConfigError("bad integer '" + s + "' in degree list");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("range syntax is a:b:step");
        const int a = to_int(parts[0]), b = to_int(parts[1]), step = to_int(parts[2]);
        if (step <= 0 || b < a) throw ConfigError("range a:b:step needs a <= b and step > 0");
        for (int v = a; v <= b; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(to_int(p));
    if (out.empty()) throw ConfigError("empty degree list");
    return out;
}

inline std::vector<double> parse_radius_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(p, &pos));
            if (pos != p.size()) throw ConfigError("bad radius '" + p + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad radius '" + p + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty radius list");
    return out;
}

/// Command line that regenerates the output (thread count and paths excluded; they do not affect it).
inline std::string canonical_command(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "supoly " << c.subcommand << " --m " << c.m << " --N-list ";
    for (std::size_t i = 0; i < c.N_list.size(); ++i) os << (i ? "," : "") << c.N_list[i];
    os << " --r-list ";
    for (std::size_t i = 0; i < c.r_list.size(); ++i) os << (i ? "," : "") << fmt17(c.r_list[i]);
    os << " --seed " << c.seed;
    const std::string& s = c.subcommand;
    if (s == "sample") os << " --trial " << c.trial;
    if (s != "sample" && s != "omega-bound") os << " --trials " << c.trials;
    if (s == "counting" || s == "sphere-avg") os << " --samples " << c.samples;
    if (s == "counting") os << " --kappa " << fmt17(c.kappa);
    if (s == "deviation") os << " --Delta " << fmt17(c.Delta);
    if (s == "omega-bound" && c.fit) os << " --fit";
    if (s == "fit-exponent") os << " --source " << c.source;
    if (s == "invariance-check") os << " --zeta-re " << fmt17(c.zeta_re) << " --zeta-im " << fmt17(c.zeta_im);
    return os.str();
}

inline std::string metadata_header(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "# supoly " << kVersion << "\n";
    os << "# generator " << kGeneratorName << "\n";
    os << "# command " << canonical_command(c) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// CSV schemas

namespace csv {
inline constexpr const char* kHoleMc = "m,N,r,trials,hits,p_hat,stderr";
inline constexpr const char* kCounting = "m,N,r,trial,n_exact,n_jensen,stat_error,kappa";
inline constexpr const char* kOmega = "m,N,r,log_prob";
inline constexpr const char* kDeviation = "m,N,r,Delta,trials,violations,frequency";
inline constexpr const char* kRoots = "N,trial,index,re,im,abs,residual";
inline constexpr const char* kSphereAvg = "m,N,r,trial,samples,mean_log_abs,stderr";
inline constexpr const char* kInvariance =
    "m,N,zeta_re,zeta_im,unitarity_error,group_error,pointwise_rel_error,covariance_frobenius";

inline std::string hole_row(const HoleEstimate& h) {
    return std::to_string(h.spec.m) + "," + std::to_string(h.spec.N) + "," + fmt17(h.radius) + "," +
           std::to_string(h.trials) + "," + std::to_string(h.hits) + "," + fmt17(h.p_hat) + "," +
           fmt17(h.standard_error);
}
inline std::string omega_row(const OmegaBound& b) {
    return std::to_string(b.spec.m) + "," + std::to_string(b.spec.N) + "," + fmt17(b.radius) + "," +
           fmt17(b.log_prob);
}
}  // namespace csv

/// One-line Omega certificate: `m N r log_prob`.
inline std::string omega_certificate(const OmegaBound& b) {
    return std::to_string(b.spec.m) + " " + std::to_string(b.spec.N) + " " + fmt17(b.radius) + " " +
           fmt17(b.log_prob);
}

inline JsonObject fit_json(const DecayFit& fit, std::optional<int> m) {
    JsonObject j;
    j.add("beta", fit.beta).add("log_c", fit.log_c).add("residual_rms", fit.residual_rms);
    j.add("points", static_cast<std::uint64_t>(fit.points.size()));
    if (m) j.add("reference_exponent", *m + 1);
    return j;
}

// ---------------------------------------------------------------------------
// CSV reading for fit reports

struct FitReport {
    DecayFit fit;
    std::optional<int> m;
    std::vector<std::string> warnings;
};

/**
 * Reads a CSV whose header names a degree column `N` and one of `p_hat`, `p`
 * or `log_prob`; lines starting with '#' are metadata. Rows whose probability
 * is not strictly inside (0, 1) are skipped with a warning.
 */
inline FitReport fit_report(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string f;
        while (std::getline(ss, f, ',')) out.push_back(f);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        header = split(line);
        break;
    }
    if (header.empty()) throw ConfigError("CSV has no header line");
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto nCol = column("N");
    auto pCol = column("p_hat");
    if (!pCol) pCol = column("p");
    const auto logCol = column("log_prob");
    const auto mCol = column("m");
    if (!nCol || (!pCol && !logCol)) throw ConfigError("CSV header needs N and one of p_hat, p, log_prob");

    FitReport report;
    std::vector<DecayPoint> points;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ++row;
        const auto f = split(line);
        if (f.size() != header.size())
            throw ConfigError("CSV row " + std::to_string(row) + " has the wrong number of fields");
        double N = 0.0, log_p = 0.0;
        try {
            N = std::stod(f[*nCol]);
            if (pCol) {
                const double p = std::stod(f[*pCol]);
                if (!(p > 0.0 && p < 1.0)) {
                    report.warnings.push_back("row " + std::to_string(row) + " (N=" + f[*nCol] +
                                              "): p=" + f[*pCol] + " outside (0,1), skipped");
                    continue;
                }
                log_p = std::log(p);
            } else {
                log_p = std::stod(f[*logCol]);
                if (!(log_p < 0.0) || !std::isfinite(log_p)) {
                    report.warnings.push_back("row " + std::to_string(row) + ": log_prob not in (-inf,0), skipped");
                    continue;
                }
            }
            if (mCol) {
                const int m = std::stoi(f[*mCol]);
                if (report.m && *report.m != m) throw ConfigError("CSV mixes different m values");
                report.m = m;
            }
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const ConfigError*>(&e)) throw;
            throw ConfigError("CSV row " + std::to_string(row) + " is not numeric");
        }
        points.push_back({N, log_p});
    }
    if (points.size() < 3) throw ConfigError("fit needs at least three rows with p in (0,1)");
    report.fit = fit_decay_exponent(std::move(points));
    return report;
}

// ---------------------------------------------------------------------------
// dispatch

struct RunOutput {
    std::string csv;     // metadata header + schema + rows (empty for `sample`)
    std::string dump;    // coefficient dump (`sample` only)
    std::string stdout_text;
    JsonObject summary;  // config echo + aggregate + wall clock
    std::vector<std::string> warnings;
};

namespace detail {

inline JsonObject config_json(const ExperimentConfig& c) {
    JsonObject j;
    j.add("subcommand", c.subcommand).add("m", c.m);
    std::string ns = "[", rs = "[";
    for (std::size_t i = 0; i < c.N_list.size(); ++i) ns += (i ? "," : "") + std::to_string(c.N_list[i]);
    for (std::size_t i = 0; i < c.r_list.size(); ++i) rs += (i ? "," : "") + fmt17(c.r_list[i]);
    j.raw("N_list", ns + "]").raw("r_list", rs + "]");
    j.add("kappa", c.kappa).add("Delta", c.Delta).add("trials", c.trials).add("samples", c.samples);
    j.add("seed", c.seed).add("threads", c.threads);
    return j;
}

// Per-trial stream lanes for auxiliary draws.
inline constexpr std::uint32_t kSphereTag = 0x5E0001;
inline constexpr std::uint32_t kCovarianceTag = 0x5E0002;

}  // namespace detail

inline RunOutput run_experiment(const ExperimentConfig& c) {
    c.validate();
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    std::ostringstream csv;
    csv << metadata_header(c);
    JsonObject results;
    const std::string& s = c.subcommand;
    const int threads = c.threads;

    if (s == "sample") {
        const EnsembleSpec spec{c.m, c.N_list.at(0), c.seed};
        const auto psi = sample_polynomial(spec, c.trial);
        std::ostringstream os;
        write_coefficients(os, psi);
        out.dump = os.str();
        results.add("coefficient_count", spec.coefficient_count()).add("trial", c.trial);
        csv.str("");
    } else if (s == "roots") {
        csv << csv::kRoots << "\n";
        std::uint64_t total_roots = 0, fallbacks = 0;
        for (int N : c.N_list) {
            const EnsembleSpec spec{1, N, c.seed};
            const auto sets = parallel_trials(c.trials, threads, [&](std::uint64_t t) {
                return roots_m1(sample_polynomial(spec, t));
            });
            for (std::uint64_t t = 0; t < sets.size(); ++t) {
                const auto& rs = sets[t];
                fallbacks += rs.used_fallback ? 1 : 0;
                for (std::size_t i = 0; i < rs.roots.size(); ++i) {
                    csv << N << "," << t << "," << i << "," << fmt17(rs.roots[i].real()) << ","
                        << fmt17(rs.roots[i].imag()) << "," << fmt17(std::abs(rs.roots[i])) << ","
                        << fmt17(rs.residuals[i]) << "\n";
                    ++total_roots;
                }
            }
        }
        results.add("roots", total_roots).add("companion_fallbacks", fallbacks);
    } else if (s == "counting") {
        csv << csv::kCounting << "\n";
        std::vector<JsonObject> cells;
        for (int N : c.N_list)
            for (double r : c.r_list) {
                const EnsembleSpec spec{c.m, N, c.seed};
                struct Row {
                    int exact = -1;
                    CountingEstimate est;
                };
                const auto rows = parallel_trials(c.trials, threads, [&](std::uint64_t t) {
                    const auto psi = sample_polynomial(spec, t);
                    Row row;
                    if (c.m == 1) row.exact = N == 0 ? 0 : counting_with_retry(psi, r);
                    if (c.samples >= 2) {
                        Stream st = Stream(c.seed, t).substream(detail::kSphereTag);
                        row.est = counting_jensen(psi, r, c.kappa, c.samples, st);
                    }
                    return row;
                });
                double sum_exact = 0.0, sum_jensen = 0.0;
                std::uint64_t heuristic_holes = 0;
                for (std::uint64_t t = 0; t < rows.size(); ++t) {
                    const auto& row = rows[t];
                    csv << c.m << "," << N << "," << fmt17(r) << "," << t << ","
                        << (row.exact >= 0 ? std::to_string(row.exact) : std::string("NA")) << ","
                        << (c.samples >= 2 ? fmt17(row.est.value) : std::string("NA")) << ","
                        << (c.samples >= 2 ? fmt17(row.est.stat_error) : std::string("NA")) << ","
                        << fmt17(c.kappa) << "\n";
                    sum_exact += row.exact;
                    sum_jensen += row.est.value;
                    if (c.samples >= 2 && jensen_hole_heuristic(row.est)) ++heuristic_holes;
                }
                const double n = static_cast<double>(c.trials);
                JsonObject cell;
                cell.add("N", N).add("r", r).add("expected", expected_counting(N, r));
                if (c.m == 1) cell.add("mean_n_exact", sum_exact / n);
                if (c.samples >= 2) {
                    cell.add("mean_n_jensen", sum_jensen / n);
                    if (c.m >= 2)
                        cell.add("heuristic_hole_fraction", static_cast<double>(heuristic_holes) / n)
                            .add("heuristic_note", "Jensen estimate compatible with zero; not a hole decision");
                }
                cells.push_back(cell);
            }
        results.add("cells", cells);
    } else if (s == "sphere-avg") {
        csv << csv::kSphereAvg << "\n";
        for (int N : c.N_list)
            for (double r : c.r_list) {
                const EnsembleSpec spec{c.m, N, c.seed};
                const auto avgs = parallel_trials(c.trials, threads, [&](std::uint64_t t) {
                    Stream st = Stream(c.seed, t).substream(detail::kSphereTag);
                    return sphere_log_average(sample_polynomial(spec, t), r, c.samples, st);
                });
                for (std::uint64_t t = 0; t < avgs.size(); ++t)
                    csv << c.m << "," << N << "," << fmt17(r) << "," << t << "," << avgs[t].samples << ","
                        << fmt17(avgs[t].mean_log_abs) << "," << fmt17(avgs[t].standard_error) << "\n";
            }
    } else if (s == "hole-mc" || (s == "fit-exponent" && c.source == "mc")) {
        csv << csv::kHoleMc << "\n";
        std::vector<JsonObject> cells;
        std::vector<DecayPoint> points;
        for (int N : c.N_list)
            for (double r : c.r_list) {
                const auto h = hole_probability_mc({1, N, c.seed}, r, c.trials, threads);
                csv << csv::hole_row(h) << "\n";
                JsonObject cell;
                cell.add("N", N).add("r", r).add("hits", h.hits).add("p_hat", h.p_hat).add("stderr", h.standard_error);
                cells.push_back(cell);
                if (h.hits > 0 && h.hits < h.trials)
                    points.push_back(DecayPoint::from_probability(N, h.p_hat));
                else if (s == "fit-exponent")
                    out.warnings.push_back("N=" + std::to_string(N) + ": p_hat outside (0,1), excluded from fit");
            }
        results.add("cells", cells);
        if (s == "fit-exponent") {
            if (points.size() < 3) throw NumericError("fewer than three degrees with 0 < p_hat < 1");
            results.add("fit", fit_json(fit_decay_exponent(points), 1));
        }
    } else if (s == "omega-bound" || s == "fit-exponent") {
        csv << csv::kOmega << "\n";
        std::vector<DecayPoint> points;
        std::ostringstream cert;
        for (int N : c.N_list)
            for (double r : c.r_list) {
                const auto b = omega_lower_bound({c.m, N, c.seed}, r);
                csv << csv::omega_row(b) << "\n";
                cert << omega_certificate(b) << "\n";
                points.push_back({static_cast<double>(N), b.log_prob});
            }
        out.stdout_text = cert.str();
        if (c.fit || s == "fit-exponent") results.add("fit", fit_json(fit_decay_exponent(points), c.m));
    } else if (s == "deviation") {
        csv << csv::kDeviation << "\n";
        std::vector<JsonObject> cells;
        for (int N : c.N_list)
            for (double r : c.r_list) {
                const auto d = deviation_experiment({1, N, c.seed}, r, c.Delta, c.trials, threads);
                csv << 1 << "," << N << "," << fmt17(r) << "," << fmt17(c.Delta) << "," << d.trials << ","
                    << d.violations << "," << fmt17(d.frequency) << "\n";
                JsonObject cell;
                cell.add("N", N).add("r", r).add("violations", d.violations).add("frequency", d.frequency);
                cells.push_back(cell);
            }
        results.add("cells", cells);
    } else if (s == "invariance-check") {
        csv << csv::kInvariance << "\n";
        const int N = c.N_list[0];
        const MobiusParameter zeta(cplx{c.zeta_re, c.zeta_im});
        const BasisTransform fwd(c.m, N, zeta);
        const BasisTransform back(c.m, N, MobiusParameter(-zeta.zeta));
        const Eigen::MatrixXcd comp = back.matrix() * fwd.matrix();
        const cplx phase = comp(0, 0);
        const double group_error =
            (comp - phase * Eigen::MatrixXcd::Identity(fwd.side(), fwd.side())).cwiseAbs().maxCoeff() +
            std::abs(std::abs(phase) - 1.0);

        // pointwise identity on random points, normalized scale
        const auto D = static_cast<std::size_t>(fwd.side());
        double pointwise = 0.0;
        Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(fwd.side(), fwd.side());
        for (std::uint64_t t = 0; t < c.trials; ++t) {
            const auto ap = sample_polynomial({c.m, N, c.seed}, t);
            const auto a = transform_coefficients(ap.alpha(), fwd);
            Eigen::Map<const Eigen::VectorXcd> v(a.data(), fwd.side());
            cov += v * v.adjoint();
            if (t < 50) {
                const SUPolynomial lhs({c.m, N, c.seed}, a);
                Stream st = Stream(c.seed, t).substream(detail::kCovarianceTag);
                std::vector<cplx> z(static_cast<std::size_t>(c.m));
                st.sphere_point(2.0 * st.uniform(), z);
                // right side: sum alpha'_j e'_j(z) from the product formula
                cplx rhs{0.0, 0.0};
                const auto& table = index_table(c.m, N);
                for (std::size_t j = 0; j < D; ++j)
                    rhs += ap.alpha()[j] * shifted_basis_value(N, zeta, table->multi_index(j), z);
                const cplx left = evaluate_normalized(lhs, z);
                pointwise = std::max(pointwise, std::abs(left - rhs) / std::max(std::abs(left), 1e-300));
            }
        }
        cov /= static_cast<double>(c.trials);
        const double frob = (cov - Eigen::MatrixXcd::Identity(fwd.side(), fwd.side())).norm();
        csv << c.m << "," << N << "," << fmt17(c.zeta_re) << "," << fmt17(c.zeta_im) << ","
            << fmt17(fwd.unitarity_error()) << "," << fmt17(group_error) << "," << fmt17(pointwise) << ","
            << fmt17(frob) << "\n";
        results.add("unitarity_error", fwd.unitarity_error())
            .add("group_error", group_error)
            .add("pointwise_rel_error", pointwise)
            .add("covariance_frobenius", frob);
    }

    out.csv = csv.str();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.summary.add("toolkit_version", kVersion)
        .add("generator", std::string(kGeneratorName))
        .add("command", canonical_command(c))
        .add("config", detail::config_json(c))
        .add("results", results)
        .add("wall_clock_seconds", wall);
    return out;
}

}  // namespace supoly
