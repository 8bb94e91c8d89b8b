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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sentipgm/app/config.hpp"
#include "sentipgm/error.hpp"
#include "sentipgm/eval.hpp"
#include "sentipgm/textprep.hpp"

namespace sentipgm::app {

/// Exit status for a failure of the given kind: 2 for I/O problems such as a
/// missing dataset, 3 for invalid configuration, 4 for a vocabulary mismatch,
/// 1 otherwise.
int exit_code_for(ErrorCode code) noexcept;

struct RunOptions {
    /// Overrides the config's output directory when non-empty.
    std::filesystem::path out;
    /// Worker threads. Never changes any output byte.
    std::size_t threads = 1;
    /// "text" or "csv"; selects what evaluate/benchmark/report print.
    std::string format = "text";
    std::ostream* out_stream = nullptr;  // defaults to std::cout
    std::ostream* err_stream = nullptr;  // defaults to std::cerr
};

/// Vectorized train/test split plus the token streams HMMs consume.
struct PreparedData {
    textprep::Vocabulary vocab;
    textprep::FeatureMatrix train;
    textprep::FeatureMatrix test;
    std::vector<textprep::Tokens> train_tokens;
    std::vector<textprep::Tokens> test_tokens;
    std::string manifest;
};

PreparedData prepare_data(const ExperimentConfig& cfg, std::size_t threads);
/// vocab.txt, train.svm, test.svm, train.tokens, test.tokens, manifest.txt.
void write_artifacts(const PreparedData& data, const std::filesystem::path& dir);
PreparedData read_artifacts(const std::filesystem::path& dir);

struct TrainedModel {
    /// Envelope header (kind, labels, vocabulary hash) followed by the model body.
    std::string file;
    std::string log;
};

TrainedModel train_model(const ExperimentConfig& cfg, const PreparedData& data, std::size_t threads);

struct Evaluation {
    eval::NamedResult result;
    eval::ConfusionMatrix confusion{{}};
};

enum class EvalSplit { Train, Test };

/// Throws Error(VocabHashMismatch) when the model was trained on a different
/// feature space than `data`.
Evaluation evaluate_model(const std::string& model_file, const PreparedData& data, EvalSplit split = EvalSplit::Test);

/// Text report with the confusion matrix, and the CSV from format_report.
eval::Report render_evaluation(const Evaluation& ev);
std::string serialize_metrics(const eval::NamedResult& r);
eval::NamedResult parse_metrics(std::string_view text);

void cmd_prepare(const ExperimentConfig& cfg, const RunOptions& opts);
void cmd_train(const ExperimentConfig& cfg, const RunOptions& opts);

struct EvaluateArgs {
    std::filesystem::path model;
    std::optional<ExperimentConfig> config;
    std::filesystem::path artifacts;
    EvalSplit split = EvalSplit::Test;
};
void cmd_evaluate(const EvaluateArgs& args, const RunOptions& opts);

/// Runs every experiment (concurrently up to opts.threads), then writes the
/// combined reports. Returns the number of failed cells.
std::size_t cmd_benchmark(const std::vector<ExperimentConfig>& configs, const RunOptions& opts);

/// Regenerates the combined reports from a benchmark directory.
void cmd_report(const std::filesystem::path& benchmark_dir, const RunOptions& opts);

}  // namespace sentipgm::app
