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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrqaoa/experiment.hpp"

using namespace lrqaoa;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(const std::string &name) {
    ExperimentConfig c;
    c.n_min = 8;
    c.n_max = 8;
    c.instances_per_size = 2;
    c.sub_sizes = {4, 6};
    c.sub_instances_per_size = 3;
    c.grid_resolution = 7;
    c.classical_n_max = 8;
    c.classical_repetitions = 2;
    c.annealing_budget = 200;
    c.deterministic = true;
    c.output_dir = (fs::path(::testing::TempDir()) / ("lrqaoa_" + name)).string();
    fs::remove_all(c.output_dir);
    return c;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::vector<std::string> kOutputs{"instances.csv",         "extrapolation_traces.csv", "descent_traces.csv",
                                        "quantum_runtime.csv",  "classical_bruteforce.csv", "classical_annealing.csv",
                                        "direct_minimization.csv", "fits.csv",               "fig_runtime_vs_n.csv",
                                        "fig_params_vs_n.csv",  "fig_popt_vs_n.csv",        "manifest.json"};

}  // namespace

TEST(config, json_round_trip) {
    ExperimentConfig c = profile("full");
    c.seed = 99;
    c.penalty = "2.5";
    ExperimentConfig back;
    apply_json(back, to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
    EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(config, unknown_key_is_rejected) {
    ExperimentConfig c;
    try {
        apply_json(c, nlohmann::json{{"n_mni", 3}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
        EXPECT_NE(std::string(e.what()).find("n_mni"), std::string::npos);
    }
    EXPECT_THROW(apply_json(c, nlohmann::json{{"n_min", "twelve"}}), Error);
}

TEST(config, hash_tracks_every_field) {
    const ExperimentConfig base;
    const nlohmann::json j = to_json(base);
    std::set<std::string> hashes{config_hash(base)};
    for (const auto &[key, value] : j.items()) {
        nlohmann::json changed = j;
        if (value.is_boolean()) {
            changed[key] = !value.get<bool>();
        } else if (value.is_number_unsigned()) {
            changed[key] = value.get<std::uint64_t>() + 1;
        } else if (value.is_number_integer()) {
            changed[key] = value.get<std::int64_t>() + 1;
        } else if (value.is_number()) {
            changed[key] = value.get<double>() + 0.5;
        } else if (value.is_string()) {
            changed[key] = value.get<std::string>() + "x";
        } else if (value.is_array()) {
            changed[key].push_back(99);
        }
        ExperimentConfig c;
        apply_json(c, changed);
        EXPECT_TRUE(hashes.insert(config_hash(c)).second) << key;
    }
}

TEST(config, validation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    c.sub_sizes = {4, 6, 12};
    EXPECT_THROW(c.validate(), Error);
    c = ExperimentConfig{};
    c.penalty = "loose";
    EXPECT_THROW(c.validate(), Error);
    c = ExperimentConfig{};
    c.family = "maxsat";
    EXPECT_THROW(c.validate(), Error);
    EXPECT_THROW(profile("laptop"), Error);
}

TEST(config, file_loading) {
    const fs::path path = fs::path(::testing::TempDir()) / "lrqaoa_cfg.json";
    {
        std::ofstream out(path);
        out << R"({"n_max": 14, "seed": 5})";
    }
    const ExperimentConfig c = load_config(path.string());
    EXPECT_EQ(c.n_max, 14);
    EXPECT_EQ(c.seed, 5u);
    EXPECT_EQ(c.n_min, 12);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    EXPECT_THROW(load_config(path.string()), Error);
    EXPECT_THROW(load_config("/nonexistent/cfg.json"), Error);
}

TEST(instance_factory, seeded_and_sized) {
    ExperimentConfig c = tiny("factory");
    InstanceFactory f(c);
    const QuboInstance a = f.make(8, 1);
    EXPECT_EQ(a.n(), 8u);
    EXPECT_EQ(a.label(), "portfolio-N8-1");
    EXPECT_EQ(a.constraint()->budget, 4);
    EXPECT_EQ(a.matrix(), InstanceFactory(c).make(8, 1).matrix());
    EXPECT_NE(a.matrix(), f.make(8, 2).matrix());
    c.family = "clustering";
    EXPECT_EQ(InstanceFactory(c).make(6, 0).family(), ProblemFamily::Clustering);
    c.family = "feature";
    EXPECT_EQ(InstanceFactory(c).make(6, 0).family(), ProblemFamily::FeatureSelection);
}

TEST(experiment, minimal_run_emits_every_file) {
    ExperimentConfig c = tiny("minimal");
    c.n_min = c.n_max = 12;
    c.classical_n_max = 12;
    c.direct_min_sizes = {12};
    c.direct_min_instances = 1;
    const ResultsStore store = run_experiment(c);
    for (const auto &f : kOutputs) EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / f)) << f;
    ASSERT_EQ(store.instances.size(), 2u);
    EXPECT_EQ(store.failures(), 0u);
    EXPECT_EQ(store.direct.size(), 1u);
    EXPECT_EQ(store.bruteforce.size(), 4u);
    for (const auto &r : store.instances) {
        EXPECT_TRUE(r.ok);
        EXPECT_GT(r.p_star, 0);
        EXPECT_GT(r.p_opt_realized, 0.0);
    }
    EXPECT_EQ(store.manifest["config_hash"], config_hash(c));
    EXPECT_EQ(store.manifest["classical_runtime_unit"], "work_units");
}

TEST(experiment, first_instance_starts_at_p0_then_chains) {
    ExperimentConfig c = tiny("chain");
    c.instances_per_size = 3;
    const ResultsStore store = run_experiment(c);
    std::map<std::string, int> first_p;
    for (const auto &line : csv::read_lines((fs::path(c.output_dir) / "descent_traces.csv").string())) {
        const auto cells = csv::split(line);
        if (cells[0] != "instance" && !first_p.count(cells[0])) first_p[cells[0]] = std::stoi(cells[1]);
    }
    ASSERT_EQ(store.instances.size(), 3u);
    EXPECT_EQ(first_p.at("portfolio-N8-0"), 6);
    EXPECT_EQ(first_p.at("portfolio-N8-1"), store.instances[0].p_star);
    EXPECT_EQ(first_p.at("portfolio-N8-2"), store.instances[1].p_star);
}

TEST(experiment, deterministic_outputs_are_byte_identical) {
    ExperimentConfig c = tiny("det");
    c.use_chain_cache = false;
    c.threads = 1;
    std::map<std::string, std::string> first;
    run_experiment(c);
    for (const auto &f : kOutputs) first[f] = slurp(fs::path(c.output_dir) / f);
    fs::remove_all(c.output_dir);
    run_experiment(c);
    for (const auto &f : kOutputs) EXPECT_EQ(slurp(fs::path(c.output_dir) / f), first[f]) << f;
    // The manifest records the thread count; every data file must not depend on it.
    fs::remove_all(c.output_dir);
    c.threads = 3;
    run_experiment(c);
    for (const auto &f : kOutputs) {
        if (f != "manifest.json") {
            EXPECT_EQ(slurp(fs::path(c.output_dir) / f), first[f]) << f;
        }
    }
}

TEST(experiment, chain_cache_reuse_gives_identical_results) {
    ExperimentConfig c = tiny("cache");
    run_experiment(c);
    const std::string first = slurp(fs::path(c.output_dir) / "instances.csv");
    EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "chain_cache.json"));
    run_experiment(c);
    EXPECT_EQ(slurp(fs::path(c.output_dir) / "instances.csv"), first);
}

TEST(experiment, fits_and_figures_rederive_from_records) {
    ExperimentConfig c = tiny("refit");
    c.n_min = 7;
    c.n_max = 9;
    c.n_step = 1;
    c.classical_n_max = 11;
    const ResultsStore store = run_experiment(c);
    const fs::path dir(c.output_dir);
    const std::string fits = slurp(dir / "fits.csv");
    const std::string runtime = slurp(dir / "fig_runtime_vs_n.csv");
    const std::string params = slurp(dir / "fig_params_vs_n.csv");
    const std::string popt = slurp(dir / "fig_popt_vs_n.csv");
    EXPECT_NE(fits.find("quantum_total_depth,ols_geomean"), std::string::npos);
    EXPECT_NE(fits.find("classical_bruteforce,theil_sen"), std::string::npos);
    EXPECT_NE(popt.find("geomean,8,,"), std::string::npos);

    ResultsStore reread = read_store(dir);
    reread.fits = compute_fits(reread);
    fs::remove(dir / "fits.csv");
    fs::remove(dir / "fig_popt_vs_n.csv");
    write_fits_csv(dir / "fits.csv", reread.fits);
    export_figures(dir, reread);
    EXPECT_EQ(slurp(dir / "fits.csv"), fits);
    EXPECT_EQ(slurp(dir / "fig_runtime_vs_n.csv"), runtime);
    EXPECT_EQ(slurp(dir / "fig_params_vs_n.csv"), params);
    EXPECT_EQ(slurp(dir / "fig_popt_vs_n.csv"), popt);
    EXPECT_EQ(reread.instances.size(), store.instances.size());
}

TEST(experiment, instance_failure_is_recorded_and_run_continues) {
    ExperimentConfig c = tiny("partial");
    const fs::path csv_path = fs::path(::testing::TempDir()) / "lrqaoa_small_universe.csv";
    {
        std::ofstream out(csv_path);
        write_portfolio_csv(out, generate_portfolio_universe(10, 3));
    }
    c.portfolio_csv = csv_path.string();
    c.n_min = 8;
    c.n_max = 12;
    c.n_step = 4;
    c.instances_per_size = 1;
    c.classical_n_max = 12;
    const ResultsStore store = run_experiment(c);
    ASSERT_EQ(store.instances.size(), 2u);
    EXPECT_TRUE(store.instances[0].ok);
    EXPECT_FALSE(store.instances[1].ok);
    EXPECT_EQ(store.failures(), 1u);
    EXPECT_EQ(store.manifest["failures"].size(), 1u);
    const auto back = read_instances_csv(fs::path(c.output_dir) / "instances.csv");
    EXPECT_FALSE(back[1].ok);
    EXPECT_EQ(back[1].error, store.instances[1].error);
}

TEST(experiment, other_families_run) {
    for (const std::string family : {"feature", "clustering"}) {
        ExperimentConfig c = tiny("family_" + family);
        c.family = family;
        c.instances_per_size = 1;
        const ResultsStore store = run_experiment(c);
        ASSERT_EQ(store.instances.size(), 1u);
        EXPECT_TRUE(store.instances[0].ok) << store.instances[0].error;
        if (family == "clustering") {
            EXPECT_EQ(store.instances[0].optima_count % 2, 0u);
        }
    }
}
