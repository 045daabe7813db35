// Copyright 2026 The lrqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: generate | run | fit | export.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lrqaoa/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitPartial = 4;

int exit_code_for(const lrqaoa::Error &e) {
    switch (e.code()) {
        case lrqaoa::ErrorCode::ConfigError:
        case lrqaoa::ErrorCode::InvalidArgument:
            return kExitConfig;
        case lrqaoa::ErrorCode::ParseError:
        case lrqaoa::ErrorCode::AsymmetricMatrix:
        case lrqaoa::ErrorCode::DimensionMismatch:
        case lrqaoa::ErrorCode::IoError:
            return kExitData;
        default:
            return 1;
    }
}

void print_fits(const lrqaoa::FitSummary &fits) {
    for (const auto &f : fits.scaling) {
        std::cout << f.name << ": alpha=" << f.fit.alpha << " (" << lrqaoa::to_string(f.fit.method) << ", "
                  << f.fit.points_used << " points, " << f.fit.excluded << " excluded)\n";
    }
    if (fits.depth_power_law) {
        std::cout << "depth_power_law: p = " << fits.depth_power_law->a << " * N^" << fits.depth_power_law->b << "\n";
    }
    for (const auto &note : fits.notes) std::cout << "not fitted: " << note << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Linear-ramp QAOA parameter extrapolation and runtime scaling"};
    app.require_subcommand(1);

    // generate
    auto *gen = app.add_subcommand("generate", "Write a synthetic dataset or a configuration template");
    std::string gen_kind = "portfolio";
    std::string gen_out;
    std::size_t gen_n = 30;
    std::size_t gen_rows = 1000;
    std::uint64_t gen_seed = 1;
    double gen_noise = 0.1;
    std::string gen_profile = "desk";
    gen->add_option("kind", gen_kind, "portfolio | feature | moons | blobs | config")
        ->check(CLI::IsMember({"portfolio", "feature", "moons", "blobs", "config"}));
    gen->add_option("-o,--output", gen_out, "Output file")->required();
    gen->add_option("-n,--size", gen_n, "Assets, features or points");
    gen->add_option("--rows", gen_rows, "Observations for feature tables");
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_option("--noise", gen_noise, "Moons noise or blob spread");
    gen->add_option("--profile", gen_profile, "Profile for config templates (desk | full)");

    // run
    auto *run = app.add_subcommand("run", "Run the experiment and write results");
    std::string run_config;
    std::string run_profile = "desk";
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> run_output, run_family;
    std::optional<int> run_n_min, run_n_max, run_n_step, run_instances, run_p0;
    std::optional<unsigned> run_threads;
    bool run_deterministic = false, run_quiet = false;
    run->add_option("-c,--config", run_config, "JSON configuration file");
    run->add_option("--profile", run_profile, "Base profile (desk | full)");
    run->add_option("--seed", run_seed, "Master seed");
    run->add_option("-o,--output", run_output, "Output directory");
    run->add_option("--family", run_family, "portfolio | feature | clustering");
    run->add_option("--n-min", run_n_min, "Smallest problem size");
    run->add_option("--n-max", run_n_max, "Largest problem size");
    run->add_option("--n-step", run_n_step, "Size step");
    run->add_option("--instances", run_instances, "Instances per size");
    run->add_option("--p0", run_p0, "Initial number of layers");
    run->add_option("--threads", run_threads, "Worker threads (0 = hardware)");
    run->add_flag("--deterministic", run_deterministic, "Record classical work units instead of wall time");
    run->add_flag("-q,--quiet", run_quiet, "No progress output");

    // fit / export
    auto *fit = app.add_subcommand("fit", "Recompute scaling fits from a results directory");
    auto *exp = app.add_subcommand("export", "Recompute fits and figure data from a results directory");
    std::string results_dir = "results";
    fit->add_option("-d,--dir", results_dir, "Results directory");
    exp->add_option("-d,--dir", results_dir, "Results directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            const std::uint64_t seed = lrqaoa::derive_seed(gen_seed, {lrqaoa::streams::kDataset});
            std::ofstream out(gen_out);
            if (!out) lrqaoa::fail(lrqaoa::ErrorCode::IoError, "cannot write " + gen_out);
            if (gen_kind == "portfolio") {
                lrqaoa::write_portfolio_csv(out, lrqaoa::generate_portfolio_universe(gen_n, seed));
            } else if (gen_kind == "feature") {
                lrqaoa::write_feature_csv(out, lrqaoa::generate_feature_table(gen_n, gen_rows, seed));
            } else if (gen_kind == "moons") {
                lrqaoa::write_points_csv(out, lrqaoa::generate_moons(gen_n, gen_noise, seed));
            } else if (gen_kind == "blobs") {
                lrqaoa::write_points_csv(out, lrqaoa::generate_blobs(gen_n, {{0.0, 0.0}, {3.0, 3.0}}, gen_noise, seed));
            } else {
                out << lrqaoa::to_json(lrqaoa::profile(gen_profile)).dump(2) << '\n';
            }
            std::cout << "wrote " << gen_out << "\n";
            return 0;
        }

        if (run->parsed()) {
            // Flags are applied after the configuration file.
            lrqaoa::ExperimentConfig config = lrqaoa::profile(run_profile);
            if (!run_config.empty()) config = lrqaoa::load_config(run_config, config);
            if (run_seed) config.seed = *run_seed;
            if (run_output) config.output_dir = *run_output;
            if (run_family) config.family = *run_family;
            if (run_n_min) config.n_min = *run_n_min;
            if (run_n_max) config.n_max = *run_n_max;
            if (run_n_step) config.n_step = *run_n_step;
            if (run_instances) config.instances_per_size = *run_instances;
            if (run_p0) config.p0 = *run_p0;
            if (run_threads) config.threads = *run_threads;
            if (run_deterministic) config.deterministic = true;
            lrqaoa::ProgressSink sink;
            if (!run_quiet) sink = [](const std::string &msg) { std::cerr << msg << "\n"; };
            const lrqaoa::ResultsStore store = lrqaoa::run_experiment(config, sink);
            print_fits(store.fits);
            std::cout << "results in " << config.output_dir << " (config " << lrqaoa::config_hash(config) << ")\n";
            if (store.failures() > 0) {
                std::cerr << store.failures() << " instance(s) failed; see manifest.json\n";
                return kExitPartial;
            }
            return 0;
        }

        lrqaoa::ResultsStore store = lrqaoa::read_store(results_dir);
        store.fits = lrqaoa::compute_fits(store);
        if (fit->parsed()) {
            lrqaoa::write_fits_csv(std::filesystem::path(results_dir) / "fits.csv", store.fits);
        } else {
            lrqaoa::write_fits_csv(std::filesystem::path(results_dir) / "fits.csv", store.fits);
            lrqaoa::export_figures(results_dir, store);
        }
        print_fits(store.fits);
        return 0;
    } catch (const lrqaoa::Error &e) {
        std::cerr << "error [" << lrqaoa::to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
