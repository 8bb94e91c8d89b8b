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
#include <utility>
#include <vector>

namespace sentipgm::corpus {

struct Document {
    std::string id;
    std::string text;
    std::string label;
};

/// Labeled documents plus the ordered label set. Immutable once built;
/// construction validates id uniqueness and label membership.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Document> documents, std::vector<std::string> labels);

    /// Builds the label set in first-appearance order.
    static Dataset from_documents(std::vector<Document> documents);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return documents_.size(); }
    bool empty() const noexcept { return documents_.empty(); }

    /// Index of `label` in labels(); throws UnknownLabel if absent.
    std::size_t label_index(const std::string& label) const;
    std::vector<std::size_t> label_indices() const;
    /// Per-label document counts, aligned with labels().
    std::vector<std::size_t> class_counts() const;

private:
    std::vector<Document> documents_;
    std::vector<std::string> labels_;
};

struct CsvOptions {
    char delimiter = ',';
    /// Optional id column; documents are numbered by data row when empty.
    std::string id_column;
};

Dataset load_csv(const std::filesystem::path& path, const std::string& text_column,
                 const std::string& label_column, const CsvOptions& options = {});

/// Reader for the string-attribute + nominal-class ARFF shape.
Dataset load_arff(const std::filesystem::path& path);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

/// Per-class stratified split; returns (train, held-out).
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, const SplitSpec& spec);

/// Duplicates randomly drawn documents of every non-majority class until all
/// classes match the majority count.
Dataset upsample_minority(const Dataset& data, std::uint64_t seed);

}  // namespace sentipgm::corpus
