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
#include <string>
#include <string_view>
#include <vector>

#include "sentipgm/textprep.hpp"

namespace sentipgm::baselines {

struct TrainConfig {
    /// η_t = learning_rate / (1 + decay * t), t = global SGD step.
    double learning_rate = 0.1;
    double decay = 1e-4;
    double l2_lambda = 1e-4;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
    /// Additive smoothing for multinomial naive Bayes.
    double smoothing = 1.0;

    void validate() const;
};

struct Scores {
    std::size_t label = 0;
    std::vector<double> scores;
};

struct NaiveBayesModel {
    std::vector<std::string> class_labels;
    std::size_t n_features = 0;
    std::vector<double> class_log_priors;
    std::vector<double> feature_log_likelihoods;  // classes x n_features

    double log_likelihood(std::size_t c, std::size_t t) const { return feature_log_likelihoods[c * n_features + t]; }

    std::string serialize() const;
    static NaiveBayesModel parse(std::string_view text);
};

/// ln P(t|c) = ln((W_tc + s) / (Σ_t' W_t'c + s V)); W are summed feature
/// weights, so fractional TF-IDF values are accepted.
NaiveBayesModel train_multinomial_nb(const textprep::FeatureMatrix& matrix, const TrainConfig& cfg);

/// Joint log scores ln P(c) + Σ_t x_t ln P(t|c).
Scores predict_nb(const NaiveBayesModel& model, const textprep::SparseVector& row);

enum class LinearKind { Logistic, Svm };
const char* to_string(LinearKind k) noexcept;

/// One weight row for two classes (the positive class is index 1), otherwise
/// one row per class.
struct LinearModel {
    LinearKind kind = LinearKind::Logistic;
    std::vector<std::string> class_labels;
    std::size_t n_features = 0;
    std::vector<std::vector<double>> weights;
    std::vector<double> bias;

    bool binary() const noexcept { return weights.size() == 1; }

    std::string serialize() const;
    static LinearModel parse(std::string_view text);
};

struct LinearTraining {
    LinearModel model;
    /// Full training objective after every epoch.
    std::vector<double> epoch_objective;
};

/// L2-regularized negative log-likelihood (sigmoid for two classes, softmax
/// otherwise) and its gradient.
struct ObjectiveGradient {
    double objective = 0.0;
    std::vector<std::vector<double>> weight_grad;
    std::vector<double> bias_grad;
};

ObjectiveGradient logistic_objective(const LinearModel& model, const textprep::FeatureMatrix& matrix, double l2_lambda);

/// λ/2 ‖w‖² + mean hinge loss, summed over one-vs-rest rows.
double svm_objective(const LinearModel& model, const textprep::FeatureMatrix& matrix, double l2_lambda);

LinearTraining train_logreg(const textprep::FeatureMatrix& matrix, const TrainConfig& cfg);

/// Subgradient descent on the hinge objective; returns the running average
/// of end-of-epoch iterates. More than two classes train one-vs-rest.
LinearTraining train_linear_svm(const textprep::FeatureMatrix& matrix, const TrainConfig& cfg);

/// Logistic: class probabilities. SVM: raw margins. Ties -> lowest class.
Scores predict_linear(const LinearModel& model, const textprep::SparseVector& row);

}  // namespace sentipgm::baselines
