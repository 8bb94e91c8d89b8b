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
#include <vector>

#include "sentipgm/textprep.hpp"

namespace sentipgm::bayesnet {

/// Column-major table of discrete variables. Variable 0 is the class.
class DiscreteData {
public:
    using Value = std::uint8_t;

    DiscreteData() = default;
    /// columns[v][row]; every value must be < cardinalities[v].
    DiscreteData(std::vector<std::vector<Value>> columns, std::vector<std::size_t> cardinalities,
                 std::vector<std::string> class_labels);

    std::size_t n_vars() const noexcept { return columns_.size(); }
    std::size_t n_rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
    std::size_t n_features() const noexcept { return n_vars() == 0 ? 0 : n_vars() - 1; }
    std::size_t cardinality(std::size_t var) const { return cardinalities_.at(var); }
    const std::vector<std::size_t>& cardinalities() const noexcept { return cardinalities_; }
    const std::vector<Value>& column(std::size_t var) const { return columns_.at(var); }
    Value value(std::size_t var, std::size_t row) const { return columns_[var][row]; }
    const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }

    /// All variable values for one row, class slot included.
    std::vector<std::size_t> row(std::size_t r) const;

private:
    std::vector<std::vector<Value>> columns_;
    std::vector<std::size_t> cardinalities_;
    std::vector<std::string> class_labels_;
};

/// Binary presence discretization: weight > 0 -> state 1.
DiscreteData discretize_presence(const textprep::FeatureMatrix& matrix);

}  // namespace sentipgm::bayesnet
