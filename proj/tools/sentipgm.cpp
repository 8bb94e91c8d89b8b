/*
 * Copyright 2026 The sentipgm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: prepare, train, evaluate, benchmark, report.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sentipgm/app/commands.hpp"
#include "sentipgm/app/config.hpp"
#include "sentipgm/error.hpp"

namespace {

using sentipgm::app::ExperimentConfig;

ExperimentConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
    ExperimentConfig cfg = sentipgm::app::load_config(path);
    if (seed) {
        cfg.seed = *seed;
        cfg.split.seed = *seed;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sentipgm: probabilistic graphical models for sentiment classification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::vector<std::string> configs;
    std::optional<std::uint64_t> seed;
    sentipgm::app::RunOptions opts;
    std::string out;
    app.add_option("--config", configs, "Experiment config file (benchmark accepts several)")->envname("SENTIPGM_CONFIG");
    app.add_option("--seed", seed, "Override the experiment seed")->envname("SENTIPGM_SEED");
    app.add_option("--out", out, "Output directory")->envname("SENTIPGM_OUT");
    app.add_option("--threads", opts.threads, "Worker threads; outputs do not depend on it")
        ->envname("SENTIPGM_THREADS")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", opts.format, "What to print on standard output")
        ->envname("SENTIPGM_FORMAT")
        ->check(CLI::IsMember({"text", "csv"}));

    auto* prepare = app.add_subcommand("prepare", "Split and vectorize a dataset");
    auto* train = app.add_subcommand("train", "Train the configured model");
    auto* evaluate = app.add_subcommand("evaluate", "Score a trained model on held-out data");
    std::string model_path, artifacts, split = "test";
    evaluate->add_option("--model", model_path, "Model file written by train")->required();
    evaluate->add_option("--artifacts", artifacts, "Directory written by prepare");
    evaluate->add_option("--split", split, "Which split to score")->check(CLI::IsMember({"train", "test"}));
    auto* benchmark = app.add_subcommand("benchmark", "Run several experiments and build the summary grid");
    benchmark->add_option("configs", configs, "Experiment config files");
    auto* report = app.add_subcommand("report", "Regenerate combined reports from a benchmark directory");
    std::string input;
    report->add_option("--input", input, "Benchmark output directory")->required();

    CLI11_PARSE(app, argc, argv);
    opts.out = out;

    auto single_config = [&]() -> ExperimentConfig {
        if (configs.size() != 1) sentipgm::fail(sentipgm::ErrorCode::Config, "exactly one --config is required");
        return load(configs.front(), seed);
    };

    try {
        if (*prepare) {
            sentipgm::app::cmd_prepare(single_config(), opts);
        } else if (*train) {
            sentipgm::app::cmd_train(single_config(), opts);
        } else if (*evaluate) {
            sentipgm::app::EvaluateArgs args;
            args.model = model_path;
            args.artifacts = artifacts;
            if (!configs.empty()) args.config = single_config();
            args.split = split == "train" ? sentipgm::app::EvalSplit::Train : sentipgm::app::EvalSplit::Test;
            sentipgm::app::cmd_evaluate(args, opts);
        } else if (*benchmark) {
            std::vector<ExperimentConfig> cells;
            for (const auto& c : configs) cells.push_back(load(c, seed));
            const std::size_t failed = sentipgm::app::cmd_benchmark(cells, opts);
            if (failed) {
                std::cerr << "sentipgm: " << failed << " of " << cells.size() << " benchmark cells failed\n";
                return 1;
            }
        } else if (*report) {
            sentipgm::app::cmd_report(input, opts);
        }
    } catch (const sentipgm::Error& e) {
        std::cerr << "sentipgm: " << e.what() << "\n";
        return sentipgm::app::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "sentipgm: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
