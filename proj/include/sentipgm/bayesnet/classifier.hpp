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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentipgm/bayesnet/dag.hpp"
#include "sentipgm/bayesnet/discrete_data.hpp"

namespace sentipgm::bayesnet {

struct Cpt {
    std::size_t var = 0;
    std::size_t q = 1;
    std::size_t r = 0;
    std::vector<double> table;  // q * r, row j = parent configuration

    double at(std::size_t j, std::size_t k) const { return table[j * r + k]; }
};

struct Prediction {
    std::size_t label = 0;
    /// Normalized ln P(C = c | x).
    std::vector<double> log_posterior;
};

class BayesNetClassifier {
public:
    BayesNetClassifier() = default;
    BayesNetClassifier(Dag dag, std::vector<Cpt> cpts, std::vector<std::size_t> cardinalities,
                       std::vector<std::string> class_labels);

    const Dag& dag() const noexcept { return dag_; }
    const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
    const std::vector<std::size_t>& cardinalities() const noexcept { return cardinalities_; }
    const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }

    /// `values` holds one state per variable; the class slot is ignored.
    Prediction predict(std::span<const std::size_t> values) const;
    Prediction predict(const DiscreteData& data, std::size_t row) const;

    std::string serialize() const;
    static BayesNetClassifier parse(std::string_view text);

private:
    std::size_t config_index(std::size_t var, std::span<const std::size_t> values, std::size_t class_value) const;

    Dag dag_;
    std::vector<Cpt> cpts_;
    std::vector<std::size_t> cardinalities_;
    std::vector<std::string> class_labels_;
    std::vector<std::vector<double>> log_tables_;
};

/// P(X_i = k | j) = (N_ijk + s) / (N_ij + r_i s).
BayesNetClassifier estimate_cpts(const DiscreteData& data, const Dag& dag, double smoothing = 0.5);

}  // namespace sentipgm::bayesnet
