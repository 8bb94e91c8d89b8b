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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sentipgm/baselines.hpp"
#include "sentipgm/bayesnet/scoring.hpp"
#include "sentipgm/bayesnet/search.hpp"
#include "sentipgm/corpus.hpp"
#include "sentipgm/textprep.hpp"

namespace sentipgm::app {

enum class ModelKind { BayesNet, Hmm, NaiveBayes, LogReg, Svm };

const char* to_string(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view name);

struct DatasetConfig {
    std::string name;
    std::filesystem::path path;
    std::string format = "csv";  // csv | arff
    std::string text_column = "text";
    std::string label_column = "label";
    char delimiter = ',';
    std::string id_column;
};

struct BayesNetParams {
    bayesnet::SearchAlgorithm search = bayesnet::SearchAlgorithm::Tan;
    bayesnet::ScoreConfig score;
    double smoothing = 0.5;
    std::size_t max_steps = 1000;
    std::size_t restarts = 10;
    std::size_t look_ahead = 2;
    std::size_t good_ops = 5;
    std::size_t tabu_length = 5;
};

struct HmmParams {
    std::size_t n_states = 3;
    /// 0 means "same as pipeline.words_to_keep".
    std::size_t vocab_size = 0;
    std::size_t max_iters = 100;
    double tol = 1e-6;
    double emission_smoothing = 1e-3;
};

/// One experiment: dataset, pipeline, split, and exactly one model section.
struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    bool upsample = false;
    std::filesystem::path output_dir;

    DatasetConfig dataset;
    textprep::PipelineConfig pipeline;
    std::filesystem::path stopwords_path;
    corpus::SplitSpec split;

    ModelKind model = ModelKind::NaiveBayes;
    BayesNetParams bayesnet;
    HmmParams hmm;
    baselines::TrainConfig train;

    /// Every setting that affects results, in a fixed order. Output
    /// directory and thread count are excluded.
    std::string canonical() const;
    std::uint64_t hash() const;

    /// Short label such as "bayesnet-tan-k2" used in reports.
    std::string classifier_label() const;
};

/// Parses INI text. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Reads and parses a config file; throws Error(Io) if it is missing.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sentipgm::app
