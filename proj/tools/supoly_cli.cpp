// supoly: command-line driver for the SU(m+1) random polynomial experiments.
//
// Exit status: 0 success, 2 configuration / input error, 3 numeric failure.
// Output files are written as <base>.csv / <base>.json (or <base>.txt for
// `sample`) via a `.partial` temporary that is renamed only on success.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "supoly/harness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void write_atomically(const fs::path& target, const std::string& content) {
    fs::path partial = target;
    partial += ".partial";
    {
        std::ofstream os(partial, std::ios::binary | std::ios::trunc);
        if (!os) throw supoly::ConfigError("cannot open " + partial.string() + " for writing");
        os << content;
        if (!os) throw supoly::ConfigError("write failed for " + partial.string());
    }
    fs::rename(partial, target);
}

fs::path default_base(const std::string& subcommand) {
    const char* dir = std::getenv("SUPOLY_OUTPUT_DIR");
    return fs::path(dir && *dir ? dir : ".") / subcommand;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian random SU(m+1) polynomials: sampling, zero statistics, hole probabilities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", supoly::kVersion);

    supoly::ExperimentConfig cfg;
    std::string N_text, N_list_text, r_text, r_list_text;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "number of complex variables")->check(CLI::PositiveNumber);
        sub->add_option("--N", N_text, "degree");
        sub->add_option("--N-list", N_list_text, "degrees, a:b:step or comma list");
        sub->add_option("--r", r_text, "radius");
        sub->add_option("--r-list", r_list_text, "radii, comma list");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--threads", cfg.threads, "worker threads (default: available cores)");
        sub->add_option("--output,-o", cfg.output, "output base path (default $SUPOLY_OUTPUT_DIR/<subcommand>)");
        sub->add_flag("--quiet,-q", quiet, "do not print the JSON summary");
    };

    for (const auto& name : supoly::subcommands()) {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        if (name == "sample") sub->add_option("--trial", cfg.trial, "trial index of the draw");
        if (name != "sample" && name != "omega-bound")
            sub->add_option("--trials", cfg.trials, "number of independent trials");
        if (name == "counting" || name == "sphere-avg")
            sub->add_option("--samples", cfg.samples, "sphere samples per average (counting: 0 = exact only)");
        if (name == "counting") sub->add_option("--kappa", cfg.kappa, "bracketing ratio > 1");
        if (name == "deviation") sub->add_option("--Delta", cfg.Delta, "relative window, in (0,1)");
        if (name == "omega-bound") sub->add_flag("--fit", cfg.fit, "fit log(-log P) against log N");
        if (name == "fit-exponent") sub->add_option("--source", cfg.source, "mc (hole Monte Carlo) or omega");
        if (name == "invariance-check") {
            sub->add_option("--zeta-re", cfg.zeta_re, "real part of zeta");
            sub->add_option("--zeta-im", cfg.zeta_im, "imaginary part of zeta");
        }
    }

    std::string fit_file;
    auto* report = app.add_subcommand("fit-report", "fit the decay exponent from a CSV of (N, p) rows");
    report->add_option("file", fit_file, "CSV with columns N and p_hat | p | log_prob")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (report->parsed()) {
            std::ifstream in(fit_file);
            if (!in) throw supoly::ConfigError("cannot read " + fit_file);
            const auto rep = supoly::fit_report(in);
            for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "beta " << supoly::fmt17(rep.fit.beta) << "\n";
            std::cout << "log_c " << supoly::fmt17(rep.fit.log_c) << "\n";
            std::cout << "residual_rms " << supoly::fmt17(rep.fit.residual_rms) << "\n";
            if (rep.m) std::cout << "reference_exponent " << *rep.m + 1 << "\n";
            std::cout << "points " << rep.fit.points.size() << "\n";
            return kExitOk;
        }

        CLI::App* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        if (!N_text.empty() && !N_list_text.empty()) throw supoly::ConfigError("give --N or --N-list, not both");
        if (!r_text.empty() && !r_list_text.empty()) throw supoly::ConfigError("give --r or --r-list, not both");
        if (!N_text.empty()) cfg.N_list = supoly::parse_degree_list(N_text);
        if (!N_list_text.empty()) cfg.N_list = supoly::parse_degree_list(N_list_text);
        if (!r_text.empty()) cfg.r_list = supoly::parse_radius_list(r_text);
        if (!r_list_text.empty()) cfg.r_list = supoly::parse_radius_list(r_list_text);
        if (!N_text.empty() && cfg.N_list.size() != 1) throw supoly::ConfigError("--N takes a single degree");
        cfg.validate();

        const fs::path base = cfg.output.empty() ? default_base(cfg.subcommand) : fs::path(cfg.output);
        if (base.has_parent_path()) fs::create_directories(base.parent_path());

        const auto out = supoly::run_experiment(cfg);
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";

        fs::path json_path = base;
        json_path += ".json";
        if (cfg.subcommand == "sample") {
            fs::path txt = base;
            txt += ".txt";
            write_atomically(txt, out.dump);
        } else {
            fs::path csv_path = base;
            csv_path += ".csv";
            write_atomically(csv_path, out.csv);
        }
        write_atomically(json_path, out.summary.str() + "\n");
        if (!out.stdout_text.empty()) std::cout << out.stdout_text;
        if (!quiet) std::cout << out.summary.str() << "\n";
        return kExitOk;
    } catch (const supoly::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
