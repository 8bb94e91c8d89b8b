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

#include "sentipgm/bayesnet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sentipgm/bayesnet/scoring.hpp"
#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::bayesnet {

BayesNetClassifier::BayesNetClassifier(Dag dag, std::vector<Cpt> cpts, std::vector<std::size_t> cardinalities,
                                       std::vector<std::string> class_labels)
    : dag_(std::move(dag)),
      cpts_(std::move(cpts)),
      cardinalities_(std::move(cardinalities)),
      class_labels_(std::move(class_labels)) {
    const std::size_t n = dag_.size();
    if (cpts_.size() != n || cardinalities_.size() != n)
        fail(ErrorCode::ModelFormat, "one CPT and cardinality per variable required");
    if (n == 0 || cardinalities_[kClassVar] != class_labels_.size())
        fail(ErrorCode::ModelFormat, "class cardinality must equal the number of class labels");
    if (!dag_.parents(kClassVar).empty() || !dag_.is_acyclic())
        fail(ErrorCode::InvalidStructure, "class must be a root of an acyclic graph");
    log_tables_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t q = 1;
        for (std::size_t p : dag_.parents(v)) q *= cardinalities_[p];
        const Cpt& c = cpts_[v];
        if (c.var != v || c.q != q || c.r != cardinalities_[v] || c.table.size() != q * c.r)
            fail(ErrorCode::ModelFormat, "CPT shape of variable " + std::to_string(v) + " disagrees with the graph");
        log_tables_[v].resize(c.table.size());
        for (std::size_t i = 0; i < c.table.size(); ++i) log_tables_[v][i] = std::log(c.table[i]);
    }
}

std::size_t BayesNetClassifier::config_index(std::size_t var, std::span<const std::size_t> values,
                                             std::size_t class_value) const {
    std::size_t j = 0;
    for (std::size_t p : dag_.parents(var)) j = j * cardinalities_[p] + (p == kClassVar ? class_value : values[p]);
    return j;
}

Prediction BayesNetClassifier::predict(std::span<const std::size_t> values) const {
    const std::size_t n = dag_.size();
    if (values.size() != n) fail(ErrorCode::ValueOutOfRange, "row has the wrong number of variables");
    for (std::size_t v = 1; v < n; ++v)
        if (values[v] >= cardinalities_[v]) fail(ErrorCode::ValueOutOfRange, "variable " + std::to_string(v));
    const std::size_t classes = class_labels_.size();
    Prediction out;
    out.log_posterior.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        double s = log_tables_[kClassVar][c];
        for (std::size_t v = 1; v < n; ++v)
            s += log_tables_[v][config_index(v, values, c) * cardinalities_[v] + values[v]];
        out.log_posterior[c] = s;
    }
    out.label = static_cast<std::size_t>(
        std::max_element(out.log_posterior.begin(), out.log_posterior.end()) - out.log_posterior.begin());
    const double m = out.log_posterior[out.label];
    double z = 0.0;
    for (double s : out.log_posterior) z += std::exp(s - m);
    const double log_z = m + std::log(z);
    for (double& s : out.log_posterior) s -= log_z;
    return out;
}

Prediction BayesNetClassifier::predict(const DiscreteData& data, std::size_t row) const {
    auto values = data.row(row);
    return predict(std::span<const std::size_t>(values));
}

std::string BayesNetClassifier::serialize() const {
    std::ostringstream out;
    out << "bayesnet\n";
    out << "variables " << dag_.size() << "\n";
    out << "cardinalities";
    for (auto r : cardinalities_) out << ' ' << r;
    out << "\nclasses " << class_labels_.size() << "\n";
    for (const auto& l : class_labels_) out << l << "\n";
    for (std::size_t v = 0; v < dag_.size(); ++v) {
        out << "parents " << v << ":";
        for (auto p : dag_.parents(v)) out << ' ' << p;
        out << "\n";
    }
    for (const auto& c : cpts_) {
        out << "cpt " << c.var << ' ' << c.q << ' ' << c.r << "\n";
        for (std::size_t j = 0; j < c.q; ++j) {
            for (std::size_t k = 0; k < c.r; ++k) out << (k ? " " : "") << util::format_real(c.at(j, k));
            out << "\n";
        }
    }
    return out.str();
}

namespace {

std::string next_line(std::istringstream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::ModelFormat, "unexpected end of bayesnet model");
    return line;
}

std::vector<std::string> expect_fields(std::istringstream& in, std::string_view keyword) {
    auto fields = util::split_whitespace(next_line(in));
    if (fields.empty() || fields[0] != keyword) fail(ErrorCode::ModelFormat, "expected '" + std::string(keyword) + "'");
    return fields;
}

}  // namespace

BayesNetClassifier BayesNetClassifier::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    if (util::trim(next_line(in)) != "bayesnet") fail(ErrorCode::ModelFormat, "not a bayesnet model");
    auto f = expect_fields(in, "variables");
    const std::size_t n = util::parse_uint(f.at(1));
    f = expect_fields(in, "cardinalities");
    if (f.size() != n + 1) fail(ErrorCode::ModelFormat, "cardinality count mismatch");
    std::vector<std::size_t> card;
    for (std::size_t i = 1; i < f.size(); ++i) card.push_back(util::parse_uint(f[i]));
    f = expect_fields(in, "classes");
    const std::size_t k = util::parse_uint(f.at(1));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back(next_line(in));
    Dag dag(n);
    for (std::size_t v = 0; v < n; ++v) {
        f = expect_fields(in, "parents");
        if (f.size() < 2 || f[1] != std::to_string(v) + ":") fail(ErrorCode::ModelFormat, "parents line out of order");
        for (std::size_t i = 2; i < f.size(); ++i) dag.add_edge(util::parse_uint(f[i]), v);
    }
    std::vector<Cpt> cpts;
    for (std::size_t v = 0; v < n; ++v) {
        f = expect_fields(in, "cpt");
        Cpt c;
        c.var = util::parse_uint(f.at(1));
        c.q = util::parse_uint(f.at(2));
        c.r = util::parse_uint(f.at(3));
        for (std::size_t j = 0; j < c.q; ++j) {
            auto row = util::split_whitespace(next_line(in));
            if (row.size() != c.r) fail(ErrorCode::ModelFormat, "CPT row width mismatch");
            for (const auto& x : row) c.table.push_back(util::parse_real(x));
        }
        cpts.push_back(std::move(c));
    }
    return BayesNetClassifier(std::move(dag), std::move(cpts), std::move(card), std::move(labels));
}

BayesNetClassifier estimate_cpts(const DiscreteData& data, const Dag& dag, double smoothing) {
    if (!(smoothing > 0.0)) fail(ErrorCode::InvalidArgument, "smoothing must be positive");
    if (dag.size() != data.n_vars()) fail(ErrorCode::InvalidStructure, "graph and data disagree on variable count");
    std::vector<Cpt> cpts;
    cpts.reserve(dag.size());
    for (std::size_t v = 0; v < dag.size(); ++v) {
        CountTable t = collect_counts(data, v, dag.parents(v));
        Cpt c{v, t.q, t.r, std::vector<double>(t.q * t.r)};
        for (std::size_t j = 0; j < t.q; ++j) {
            const double denom = static_cast<double>(t.marginals[j]) + static_cast<double>(t.r) * smoothing;
            for (std::size_t k = 0; k < t.r; ++k)
                c.table[j * t.r + k] = (static_cast<double>(t.at(j, k)) + smoothing) / denom;
        }
        cpts.push_back(std::move(c));
    }
    std::vector<std::string> labels = data.class_labels();
    if (labels.empty())
        for (std::size_t c = 0; c < data.cardinality(kClassVar); ++c) labels.push_back(std::to_string(c));
    return BayesNetClassifier(dag, std::move(cpts), data.cardinalities(), std::move(labels));
}

}  // namespace sentipgm::bayesnet
