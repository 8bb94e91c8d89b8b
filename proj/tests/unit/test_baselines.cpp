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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sentipgm/baselines.hpp"
#include "test_support.hpp"

using namespace sentipgm;
using namespace sentipgm::baselines;
using textprep::FeatureMatrix;
using textprep::SparseVector;
using testsupport::rng_for;
using testsupport::thrown_code;

namespace {

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::size_t classes, std::mt19937_64& rng) {
    FeatureMatrix m;
    m.n_columns = cols;
    for (std::size_t c = 0; c < classes; ++c) m.class_labels.push_back("c" + std::to_string(c));
    std::uniform_real_distribution<double> w(0.1, 2.0);
    std::bernoulli_distribution present(0.5);
    for (std::size_t r = 0; r < rows; ++r) {
        SparseVector row;
        for (std::size_t j = 0; j < cols; ++j)
            if (present(rng)) row.push_back({j, w(rng)});
        m.rows.push_back(std::move(row));
        m.labels.push_back(r % classes);
    }
    return m;
}

// x = +1 on column 0 for "pos", column 1 for "neg".
FeatureMatrix separable() {
    FeatureMatrix m;
    m.n_columns = 2;
    m.class_labels = {"neg", "pos"};
    for (int i = 0; i < 10; ++i) {
        m.rows.push_back({{0, 1.0}});
        m.labels.push_back(1);
        m.rows.push_back({{1, 1.0}});
        m.labels.push_back(0);
    }
    return m;
}

double weight_norm(const LinearModel& m) {
    double s = 0;
    for (const auto& r : m.weights)
        for (double w : r) s += w * w;
    return std::sqrt(s);
}

LinearModel random_linear(std::size_t rows, std::size_t cols, std::size_t classes, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 0.7);
    LinearModel m;
    m.n_features = cols;
    for (std::size_t c = 0; c < classes; ++c) m.class_labels.push_back("c" + std::to_string(c));
    m.weights.assign(rows, std::vector<double>(cols));
    for (auto& r : m.weights)
        for (double& w : r) w = g(rng);
    for (std::size_t k = 0; k < rows; ++k) m.bias.push_back(g(rng));
    return m;
}

}  // namespace

TEST_SUITE("naive bayes") {
    TEST_CASE("a single class has log prior zero") {
        FeatureMatrix m;
        m.n_columns = 2;
        m.class_labels = {"only"};
        m.rows = {{{0, 1.0}}, {{1, 2.0}}};
        m.labels = {0, 0};
        auto nb = train_multinomial_nb(m, {});
        CHECK(nb.class_log_priors == std::vector<double>{0.0});
    }

    TEST_CASE("disjoint single terms with unit smoothing") {
        FeatureMatrix m;
        m.n_columns = 2;
        m.class_labels = {"c1", "c2"};
        m.rows = {{{0, 1.0}}, {{1, 1.0}}};
        m.labels = {0, 1};
        auto nb = train_multinomial_nb(m, {});
        CHECK(std::exp(nb.log_likelihood(0, 0)) == doctest::Approx(2.0 / 3));
        CHECK(std::exp(nb.log_likelihood(0, 1)) == doctest::Approx(1.0 / 3));
        CHECK(nb.class_log_priors[0] == doctest::Approx(std::log(0.5)));
    }

    TEST_CASE("scores recompute from the model and scaling a row keeps the argmax under uniform priors") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto rng = rng_for(seed);
            auto m = random_matrix(12, 5, 3, rng);
            auto nb = train_multinomial_nb(m, {});
            for (double p : nb.class_log_priors) CHECK(p == doctest::Approx(std::log(1.0 / 3)));
            for (const auto& row : m.rows) {
                auto s = predict_nb(nb, row);
                SparseVector doubled = row;
                for (auto& e : doubled) e.weight *= 2;
                auto s2 = predict_nb(nb, doubled);
                CHECK(s2.label == s.label);
                for (std::size_t c = 0; c < 3; ++c) {
                    double expected = nb.class_log_priors[c];
                    for (const auto& e : row) expected += e.weight * nb.log_likelihood(c, e.column);
                    CHECK(s.scores[c] == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("negative weights are rejected") {
        FeatureMatrix m = separable();
        m.rows[0][0].weight = -1;
        CHECK(thrown_code([&] { train_multinomial_nb(m, {}); }) == ErrorCode::NegativeFeature);
    }

    TEST_CASE("round trip") {
        auto rng = rng_for(3);
        auto nb = train_multinomial_nb(random_matrix(10, 4, 2, rng), {});
        CHECK(NaiveBayesModel::parse(nb.serialize()).serialize() == nb.serialize());
    }
}

TEST_SUITE("logistic regression") {
    TEST_CASE("separable data puts positive weight on the positive feature") {
        auto t = train_logreg(separable(), {});
        REQUIRE(t.model.binary());
        CHECK(t.model.weights[0][0] > 0);
        CHECK(t.model.weights[0][1] < 0);
        CHECK(predict_linear(t.model, {{0, 1.0}}).label == 1);
        CHECK(predict_linear(t.model, {{1, 1.0}}).label == 0);
    }

    TEST_CASE("analytic gradient matches central differences") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto rng = rng_for(seed);
            const std::size_t classes = 2 + seed % 2, rows = classes == 2 ? 1 : classes;
            auto x = random_matrix(8, 4, classes, rng);
            auto m = random_linear(rows, 4, classes, rng);
            const double lambda = 0.05;
            auto g = logistic_objective(m, x, lambda);
            CHECK(g.objective == doctest::Approx(oracle::logistic_loss(m, x, lambda)).epsilon(1e-12));
            std::vector<double> analytic, numeric;
            const double h = 1e-5;
            for (std::size_t k = 0; k < rows; ++k) {
                for (std::size_t j = 0; j < 4; ++j) {
                    LinearModel plus = m, minus = m;
                    plus.weights[k][j] += h;
                    minus.weights[k][j] -= h;
                    analytic.push_back(g.weight_grad[k][j]);
                    numeric.push_back((oracle::logistic_loss(plus, x, lambda) - oracle::logistic_loss(minus, x, lambda)) /
                                      (2 * h));
                }
                LinearModel plus = m, minus = m;
                plus.bias[k] += h;
                minus.bias[k] -= h;
                analytic.push_back(g.bias_grad[k]);
                numeric.push_back((oracle::logistic_loss(plus, x, lambda) - oracle::logistic_loss(minus, x, lambda)) / (2 * h));
            }
            double worst = 0;
            for (std::size_t i = 0; i < analytic.size(); ++i) {
                const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-8});
                worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
            }
            CHECK(worst < 1e-5);
        }
    }

    TEST_CASE("weight norm shrinks as lambda grows") {
        auto rng = rng_for(11);
        auto x = random_matrix(30, 6, 2, rng);
        double previous = INFINITY;
        for (double lambda : {1e-4, 1e-2, 1e-1, 1.0, 10.0}) {
            TrainConfig cfg;
            cfg.l2_lambda = lambda;
            cfg.epochs = 100;
            cfg.learning_rate = 0.05;
            double norm = weight_norm(train_logreg(x, cfg).model);
            CHECK(norm < previous);
            previous = norm;
        }
        CHECK(previous < 0.1);
    }

    TEST_CASE("three classes use softmax rows that sum to one") {
        auto rng = rng_for(12);
        auto x = random_matrix(15, 4, 3, rng);
        auto t = train_logreg(x, {});
        CHECK(t.model.weights.size() == 3);
        auto s = predict_linear(t.model, x.rows[0]);
        CHECK(s.scores[0] + s.scores[1] + s.scores[2] == doctest::Approx(1.0));
    }

    TEST_CASE("same seed reproduces training") {
        auto rng = rng_for(13);
        auto x = random_matrix(20, 5, 2, rng);
        TrainConfig cfg;
        cfg.seed = 4;
        CHECK(train_logreg(x, cfg).model.serialize() == train_logreg(x, cfg).model.serialize());
    }

    TEST_CASE("one class is rejected") {
        FeatureMatrix x = separable();
        for (auto& l : x.labels) l = 0;
        CHECK(thrown_code([&] { train_logreg(x, {}); }) == ErrorCode::SingleClass);
        CHECK(thrown_code([&] { train_linear_svm(x, {}); }) == ErrorCode::SingleClass);
    }
}

TEST_SUITE("svm") {
    TEST_CASE("separable data is classified perfectly") {
        auto x = separable();
        auto t = train_linear_svm(x, {});
        for (std::size_t r = 0; r < x.n_rows(); ++r) CHECK(predict_linear(t.model, x.rows[r]).label == x.labels[r]);
    }

    TEST_CASE("objective at the averaged iterate does not increase") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto rng = rng_for(seed);
            auto x = random_matrix(40, 6, 2, rng);
            TrainConfig cfg;
            cfg.seed = seed;
            cfg.l2_lambda = 0.01;
            // The trend needs a step size that actually decays over so few
            // updates; the default decay is sized for large corpora.
            cfg.decay = 0.1;
            auto t = train_linear_svm(x, cfg);
            const auto& obj = t.epoch_objective;
            REQUIRE(obj.size() == cfg.epochs);
            CHECK(obj.back() == doctest::Approx(svm_objective(t.model, x, cfg.l2_lambda)).epsilon(1e-12));
            for (std::size_t e = 1; e < obj.size(); ++e) CHECK(obj[e] <= obj[e - 1] + 1e-9);
            CHECK(obj.back() < obj.front());
        }
    }

    TEST_CASE("three classes give three one-vs-rest rows") {
        auto rng = rng_for(21);
        auto t = train_linear_svm(random_matrix(15, 4, 3, rng), {});
        CHECK(t.model.weights.size() == 3);
        CHECK(t.model.bias.size() == 3);
    }

    TEST_CASE("round trip") {
        auto t = train_linear_svm(separable(), {});
        CHECK(LinearModel::parse(t.model.serialize()).serialize() == t.model.serialize());
    }
}

TEST_SUITE("linear prediction") {
    TEST_CASE("zero weights tie toward class zero") {
        LinearModel m;
        m.kind = LinearKind::Svm;
        m.class_labels = {"a", "b", "c"};
        m.n_features = 2;
        m.weights.assign(3, {0.0, 0.0});
        m.bias = {0, 0, 0};
        CHECK(predict_linear(m, {{1, 3.0}}).label == 0);
    }

    TEST_CASE("binary logistic at margin zero gives one half") {
        LinearModel m;
        m.class_labels = {"neg", "pos"};
        m.n_features = 1;
        m.weights = {{0.0}};
        m.bias = {0.0};
        auto s = predict_linear(m, {{0, 1.0}});
        CHECK(s.scores[1] == doctest::Approx(0.5));
        CHECK(s.label == 0);
    }

    TEST_CASE("columns beyond the model are rejected") {
        auto t = train_logreg(separable(), {});
        CHECK(thrown_code([&] { predict_linear(t.model, {{7, 1.0}}); }) == ErrorCode::ColumnOutOfRange);
    }

    TEST_CASE("invalid hyperparameters are rejected") {
        TrainConfig cfg;
        cfg.learning_rate = 0;
        CHECK(thrown_code([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
        cfg = {};
        cfg.epochs = 0;
        CHECK(thrown_code([&] { train_logreg(separable(), cfg); }) == ErrorCode::InvalidArgument);
    }
}
