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

#include "sentipgm/bayesnet/discrete_data.hpp"

#include "sentipgm/error.hpp"

namespace sentipgm::bayesnet {

DiscreteData::DiscreteData(std::vector<std::vector<Value>> columns, std::vector<std::size_t> cardinalities,
                           std::vector<std::string> class_labels)
    : columns_(std::move(columns)), cardinalities_(std::move(cardinalities)), class_labels_(std::move(class_labels)) {
    if (columns_.size() != cardinalities_.size())
        fail(ErrorCode::InvalidArgument, "one cardinality per column required");
    if (columns_.empty()) fail(ErrorCode::InvalidArgument, "data needs at least the class variable");
    const std::size_t rows = columns_.front().size();
    for (std::size_t v = 0; v < columns_.size(); ++v) {
        if (columns_[v].size() != rows) fail(ErrorCode::InvalidArgument, "ragged columns");
        if (cardinalities_[v] < 1 || cardinalities_[v] > 256)
            fail(ErrorCode::InvalidArgument, "cardinality must lie in [1, 256]");
        for (Value x : columns_[v])
            if (x >= cardinalities_[v])
                fail(ErrorCode::ValueOutOfRange, "variable " + std::to_string(v) + " value out of range");
    }
    if (!class_labels_.empty() && class_labels_.size() != cardinalities_[0])
        fail(ErrorCode::InvalidArgument, "class label count must equal class cardinality");
}

std::vector<std::size_t> DiscreteData::row(std::size_t r) const {
    std::vector<std::size_t> out(columns_.size());
    for (std::size_t v = 0; v < columns_.size(); ++v) out[v] = columns_[v][r];
    return out;
}

DiscreteData discretize_presence(const textprep::FeatureMatrix& matrix) {
    const std::size_t rows = matrix.n_rows();
    std::vector<std::vector<DiscreteData::Value>> cols(matrix.n_columns + 1,
                                                       std::vector<DiscreteData::Value>(rows, 0));
    for (std::size_t r = 0; r < rows; ++r) {
        cols[0][r] = static_cast<DiscreteData::Value>(matrix.labels.at(r));
        for (const auto& e : matrix.rows[r])
            if (e.weight > 0.0) cols[e.column + 1][r] = 1;
    }
    std::vector<std::size_t> card(matrix.n_columns + 1, 2);
    card[0] = matrix.n_classes();
    return DiscreteData(std::move(cols), std::move(card), matrix.class_labels);
}

}  // namespace sentipgm::bayesnet
