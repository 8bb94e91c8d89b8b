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

#include "sentipgm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::baselines {

using textprep::FeatureMatrix;
using textprep::SparseVector;

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) fail(ErrorCode::InvalidArgument, "learning_rate must be > 0");
    if (!(decay >= 0.0)) fail(ErrorCode::InvalidArgument, "decay must be >= 0");
    if (!(l2_lambda >= 0.0)) fail(ErrorCode::InvalidArgument, "l2_lambda must be >= 0");
    if (epochs < 1) fail(ErrorCode::InvalidArgument, "epochs must be >= 1");
    if (!(smoothing > 0.0)) fail(ErrorCode::InvalidArgument, "smoothing must be > 0");
}

const char* to_string(LinearKind k) noexcept { return k == LinearKind::Logistic ? "logistic" : "svm"; }

namespace {

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_columns(const SparseVector& row, std::size_t n_features) {
    for (const auto& e : row)
        if (e.column >= n_features) fail(ErrorCode::ColumnOutOfRange, "column " + std::to_string(e.column));
}

double dot(const std::vector<double>& w, const SparseVector& x) {
    double s = 0.0;
    for (const auto& e : x) s += w[e.column] * e.weight;
    return s;
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

void softmax_inplace(std::vector<double>& z) {
    double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) sum += (v = std::exp(v - m));
    for (double& v : z) v /= sum;
}

void require_two_classes(const FeatureMatrix& m) {
    std::set<std::size_t> present(m.labels.begin(), m.labels.end());
    if (present.size() < 2 || m.n_classes() < 2)
        fail(ErrorCode::SingleClass, "training a discriminative model needs at least two populated classes");
}

double squared_norm(const std::vector<std::vector<double>>& w) {
    double s = 0.0;
    for (const auto& row : w)
        for (double x : row) s += x * x;
    return s;
}

// Weight vector represented as scale * v so the L2 shrink is O(1) per step.
struct ScaledVector {
    std::vector<double> v;
    double scale = 1.0;

    explicit ScaledVector(std::size_t n) : v(n, 0.0) {}

    double dot(const SparseVector& x) const { return scale * baselines::dot(v, x); }
    void shrink(double factor) {
        scale *= factor;
        if (scale < 1e-9) {
            for (double& x : v) x *= scale;
            scale = 1.0;
        }
    }
    void add(const SparseVector& x, double coef) {
        for (const auto& e : x) v[e.column] += coef / scale * e.weight;
    }
    std::vector<double> dense() const {
        std::vector<double> out(v);
        for (double& x : out) x *= scale;
        return out;
    }
};

std::string join_row(const double* p, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += util::format_real(p[i]);
    }
    return out;
}

std::string read_line(std::istringstream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::ModelFormat, "unexpected end of model");
    return line;
}

std::vector<std::string> expect_fields(std::istringstream& in, std::string_view keyword, std::size_t count) {
    auto f = util::split_whitespace(read_line(in));
    if (f.empty() || f[0] != keyword || (count && f.size() != count))
        fail(ErrorCode::ModelFormat, "expected '" + std::string(keyword) + "'");
    return f;
}

std::vector<double> parse_row(const std::string& line, std::size_t n) {
    auto f = util::split_whitespace(line);
    if (f.size() != n) fail(ErrorCode::ModelFormat, "row width mismatch");
    std::vector<double> out;
    out.reserve(n);
    for (const auto& x : f) out.push_back(util::parse_real(x));
    return out;
}

}  // namespace

NaiveBayesModel train_multinomial_nb(const FeatureMatrix& matrix, const TrainConfig& cfg) {
    cfg.validate();
    if (matrix.n_rows() == 0) fail(ErrorCode::EmptyCorpus, "no training rows");
    const std::size_t classes = matrix.n_classes(), v = matrix.n_columns;
    std::vector<double> mass(classes * v, 0.0), totals(classes, 0.0), docs(classes, 0.0);
    for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
        const std::size_t c = matrix.labels[r];
        docs[c] += 1.0;
        for (const auto& e : matrix.rows[r]) {
            if (e.weight < 0.0) fail(ErrorCode::NegativeFeature, "row " + std::to_string(r));
            if (e.column >= v) fail(ErrorCode::ColumnOutOfRange, "column " + std::to_string(e.column));
            mass[c * v + e.column] += e.weight;
            totals[c] += e.weight;
        }
    }
    NaiveBayesModel m;
    m.class_labels = matrix.class_labels;
    m.n_features = v;
    m.feature_log_likelihoods.resize(classes * v);
    const double n = static_cast<double>(matrix.n_rows());
    for (std::size_t c = 0; c < classes; ++c) {
        m.class_log_priors.push_back(docs[c] > 0 ? std::log(docs[c] / n) : -INFINITY);
        const double denom = std::log(totals[c] + cfg.smoothing * static_cast<double>(v));
        for (std::size_t t = 0; t < v; ++t)
            m.feature_log_likelihoods[c * v + t] = std::log(mass[c * v + t] + cfg.smoothing) - denom;
    }
    return m;
}

Scores predict_nb(const NaiveBayesModel& model, const SparseVector& row) {
    check_columns(row, model.n_features);
    Scores s;
    s.scores = model.class_log_priors;
    for (std::size_t c = 0; c < s.scores.size(); ++c)
        for (const auto& e : row) s.scores[c] += e.weight * model.log_likelihood(c, e.column);
    s.label = argmax(s.scores);
    return s;
}

ObjectiveGradient logistic_objective(const LinearModel& model, const FeatureMatrix& matrix, double l2_lambda) {
    const std::size_t rows_w = model.weights.size(), v = model.n_features;
    ObjectiveGradient g;
    g.weight_grad.assign(rows_w, std::vector<double>(v, 0.0));
    g.bias_grad.assign(rows_w, 0.0);
    const double n = static_cast<double>(matrix.n_rows());
    double loss = 0.0;
    for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
        const auto& x = matrix.rows[r];
        const std::size_t y = matrix.labels[r];
        if (model.binary()) {
            const double z = dot(model.weights[0], x) + model.bias[0];
            const double target = y == 1 ? 1.0 : 0.0;
            loss += softplus(z) - target * z;
            const double d = (sigmoid(z) - target) / n;
            for (const auto& e : x) g.weight_grad[0][e.column] += d * e.weight;
            g.bias_grad[0] += d;
        } else {
            std::vector<double> z(rows_w);
            for (std::size_t c = 0; c < rows_w; ++c) z[c] = dot(model.weights[c], x) + model.bias[c];
            const double m = *std::max_element(z.begin(), z.end());
            double lse = 0.0;
            for (double zc : z) lse += std::exp(zc - m);
            loss += m + std::log(lse) - z[y];
            softmax_inplace(z);
            for (std::size_t c = 0; c < rows_w; ++c) {
                const double d = (z[c] - (c == y ? 1.0 : 0.0)) / n;
                for (const auto& e : x) g.weight_grad[c][e.column] += d * e.weight;
                g.bias_grad[c] += d;
            }
        }
    }
    for (std::size_t c = 0; c < rows_w; ++c)
        for (std::size_t t = 0; t < v; ++t) g.weight_grad[c][t] += l2_lambda * model.weights[c][t];
    g.objective = loss / n + 0.5 * l2_lambda * squared_norm(model.weights);
    return g;
}

LinearTraining train_logreg(const FeatureMatrix& matrix, const TrainConfig& cfg) {
    cfg.validate();
    require_two_classes(matrix);
    const std::size_t classes = matrix.n_classes(), v = matrix.n_columns;
    const std::size_t rows_w = classes == 2 ? 1 : classes;
    for (const auto& row : matrix.rows) check_columns(row, v);

    std::vector<ScaledVector> w(rows_w, ScaledVector(v));
    std::vector<double> b(rows_w, 0.0);
    std::vector<std::size_t> order(matrix.n_rows());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg.seed);

    LinearTraining out;
    out.model.kind = LinearKind::Logistic;
    out.model.class_labels = matrix.class_labels;
    out.model.n_features = v;
    auto snapshot = [&] {
        out.model.weights.clear();
        for (const auto& sv : w) out.model.weights.push_back(sv.dense());
        out.model.bias = b;
    };

    std::size_t step = 0;
    std::vector<double> z(rows_w);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r : order) {
            const double eta = cfg.learning_rate / (1.0 + cfg.decay * static_cast<double>(step++));
            const auto& x = matrix.rows[r];
            const std::size_t y = matrix.labels[r];
            for (std::size_t c = 0; c < rows_w; ++c) z[c] = w[c].dot(x) + b[c];
            if (rows_w == 1) {
                z[0] = sigmoid(z[0]) - (y == 1 ? 1.0 : 0.0);
            } else {
                softmax_inplace(z);
                z[y] -= 1.0;
            }
            for (std::size_t c = 0; c < rows_w; ++c) {
                w[c].shrink(1.0 - eta * cfg.l2_lambda);
                w[c].add(x, -eta * z[c]);
                b[c] -= eta * z[c];
            }
        }
        snapshot();
        out.epoch_objective.push_back(logistic_objective(out.model, matrix, cfg.l2_lambda).objective);
    }
    return out;
}

double svm_objective(const LinearModel& model, const FeatureMatrix& matrix, double l2_lambda) {
    const double n = static_cast<double>(matrix.n_rows());
    double total = 0.0;
    for (std::size_t c = 0; c < model.weights.size(); ++c) {
        const std::size_t positive = model.binary() ? 1 : c;
        double hinge = 0.0;
        for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
            const double y = matrix.labels[r] == positive ? 1.0 : -1.0;
            hinge += std::max(0.0, 1.0 - y * (dot(model.weights[c], matrix.rows[r]) + model.bias[c]));
        }
        double sq = 0.0;
        for (double x : model.weights[c]) sq += x * x;
        total += 0.5 * l2_lambda * sq + hinge / n;
    }
    return total;
}

LinearTraining train_linear_svm(const FeatureMatrix& matrix, const TrainConfig& cfg) {
    cfg.validate();
    require_two_classes(matrix);
    const std::size_t classes = matrix.n_classes(), v = matrix.n_columns;
    const std::size_t rows_w = classes == 2 ? 1 : classes;
    for (const auto& row : matrix.rows) check_columns(row, v);

    LinearTraining out;
    out.model.kind = LinearKind::Svm;
    out.model.class_labels = matrix.class_labels;
    out.model.n_features = v;
    out.model.weights.assign(rows_w, std::vector<double>(v, 0.0));
    out.model.bias.assign(rows_w, 0.0);
    out.epoch_objective.assign(cfg.epochs, 0.0);

    for (std::size_t c = 0; c < rows_w; ++c) {
        const std::size_t positive = rows_w == 1 ? 1 : c;
        ScaledVector w(v);
        double b = 0.0;
        std::vector<double>& avg_w = out.model.weights[c];
        double& avg_b = out.model.bias[c];
        std::vector<std::size_t> order(matrix.n_rows());
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(util::derive_seed(cfg.seed, c));
        std::size_t step = 0;
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t r : order) {
                const double eta = cfg.learning_rate / (1.0 + cfg.decay * static_cast<double>(step++));
                const auto& x = matrix.rows[r];
                const double y = matrix.labels[r] == positive ? 1.0 : -1.0;
                const double margin = y * (w.dot(x) + b);
                w.shrink(1.0 - eta * cfg.l2_lambda);
                if (margin < 1.0) {
                    w.add(x, eta * y);
                    b += eta * y;
                }
            }
            const auto dense = w.dense();
            const double k = static_cast<double>(epoch + 1);
            for (std::size_t t = 0; t < v; ++t) avg_w[t] += (dense[t] - avg_w[t]) / k;
            avg_b += (b - avg_b) / k;

            // Objective of this row's averaged iterate with `positive` as +1.
            double hinge = 0.0;
            for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
                const double y = matrix.labels[r] == positive ? 1.0 : -1.0;
                hinge += std::max(0.0, 1.0 - y * (dot(avg_w, matrix.rows[r]) + avg_b));
            }
            double sq = 0.0;
            for (double x : avg_w) sq += x * x;
            out.epoch_objective[epoch] += 0.5 * cfg.l2_lambda * sq + hinge / static_cast<double>(matrix.n_rows());
        }
    }
    return out;
}

Scores predict_linear(const LinearModel& model, const SparseVector& row) {
    check_columns(row, model.n_features);
    Scores s;
    if (model.binary()) {
        const double z = dot(model.weights[0], row) + model.bias[0];
        if (model.kind == LinearKind::Logistic) {
            const double p = sigmoid(z);
            s.scores = {1.0 - p, p};
        } else {
            s.scores = {-z, z};
        }
    } else {
        s.scores.resize(model.weights.size());
        for (std::size_t c = 0; c < model.weights.size(); ++c) s.scores[c] = dot(model.weights[c], row) + model.bias[c];
        if (model.kind == LinearKind::Logistic) softmax_inplace(s.scores);
    }
    s.label = argmax(s.scores);
    return s;
}

std::string NaiveBayesModel::serialize() const {
    std::ostringstream out;
    out << "naive_bayes\nclasses " << class_labels.size() << "\n";
    for (const auto& l : class_labels) out << l << "\n";
    out << "features " << n_features << "\n";
    for (std::size_t c = 0; c < class_labels.size(); ++c) {
        out << "prior " << util::format_real(class_log_priors[c]) << "\n";
        out << join_row(feature_log_likelihoods.data() + c * n_features, n_features) << "\n";
    }
    return out.str();
}

NaiveBayesModel NaiveBayesModel::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    if (util::trim(read_line(in)) != "naive_bayes") fail(ErrorCode::ModelFormat, "not a naive_bayes model");
    NaiveBayesModel m;
    const std::size_t k = util::parse_uint(expect_fields(in, "classes", 2)[1]);
    for (std::size_t i = 0; i < k; ++i) m.class_labels.push_back(read_line(in));
    m.n_features = util::parse_uint(expect_fields(in, "features", 2)[1]);
    for (std::size_t c = 0; c < k; ++c) {
        m.class_log_priors.push_back(util::parse_real(expect_fields(in, "prior", 2)[1]));
        auto row = parse_row(read_line(in), m.n_features);
        m.feature_log_likelihoods.insert(m.feature_log_likelihoods.end(), row.begin(), row.end());
    }
    return m;
}

std::string LinearModel::serialize() const {
    std::ostringstream out;
    out << "linear " << to_string(kind) << "\nclasses " << class_labels.size() << "\n";
    for (const auto& l : class_labels) out << l << "\n";
    out << "features " << n_features << "\nrows " << weights.size() << "\n";
    for (std::size_t c = 0; c < weights.size(); ++c) {
        out << "bias " << util::format_real(bias[c]) << "\n";
        out << join_row(weights[c].data(), n_features) << "\n";
    }
    return out.str();
}

LinearModel LinearModel::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    auto head = util::split_whitespace(read_line(in));
    if (head.size() != 2 || head[0] != "linear") fail(ErrorCode::ModelFormat, "not a linear model");
    LinearModel m;
    if (head[1] == "logistic") m.kind = LinearKind::Logistic;
    else if (head[1] == "svm") m.kind = LinearKind::Svm;
    else fail(ErrorCode::ModelFormat, "unknown linear kind '" + head[1] + "'");
    const std::size_t k = util::parse_uint(expect_fields(in, "classes", 2)[1]);
    for (std::size_t i = 0; i < k; ++i) m.class_labels.push_back(read_line(in));
    m.n_features = util::parse_uint(expect_fields(in, "features", 2)[1]);
    const std::size_t rows = util::parse_uint(expect_fields(in, "rows", 2)[1]);
    for (std::size_t c = 0; c < rows; ++c) {
        m.bias.push_back(util::parse_real(expect_fields(in, "bias", 2)[1]));
        m.weights.push_back(parse_row(read_line(in), m.n_features));
    }
    return m;
}

}  // namespace sentipgm::baselines
