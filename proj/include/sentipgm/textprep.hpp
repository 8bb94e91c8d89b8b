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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sentipgm/corpus.hpp"

namespace sentipgm::textprep {

enum class Weighting { TfidfWeka, TfidfSmoothL2, BinaryPresence };

Weighting parse_weighting(std::string_view name);
const char* to_string(Weighting w) noexcept;

struct PipelineConfig {
    std::size_t words_to_keep = 1000;
    Weighting weighting = Weighting::TfidfSmoothL2;
    bool lowercase = true;
    std::size_t min_token_length = 1;
    std::optional<std::set<std::string>> stopwords;
};

using Tokens = std::vector<std::string>;

/// URL -> "URL", strip punctuation, digits and symbols, lowercase, collapse
/// whitespace. Idempotent.
std::string normalize_text(std::string_view raw, bool lowercase = true);

Tokens tokenize(std::string_view normalized, const PipelineConfig& cfg);

class Vocabulary {
public:
    Vocabulary() = default;
    /// terms must already be in column order; doc_freq aligned with terms.
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t corpus_size);

    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<std::size_t>& doc_freqs() const noexcept { return doc_freq_; }
    std::size_t corpus_size() const noexcept { return corpus_size_; }
    std::size_t size() const noexcept { return terms_.size(); }

    std::optional<std::size_t> column(const std::string& term) const;
    std::size_t doc_freq(std::size_t column) const { return doc_freq_.at(column); }

    /// "# corpus_size\t<N>" header then "term\tdoc_freq" lines.
    std::string serialize() const;
    static Vocabulary parse(std::string_view text);
    /// Content digest of serialize().
    std::uint64_t hash() const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.terms_ == b.terms_ && a.doc_freq_ == b.doc_freq_ && a.corpus_size_ == b.corpus_size_;
    }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> doc_freq_;
    std::size_t corpus_size_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Keeps the words_to_keep terms of highest document frequency; columns in
/// (doc_freq desc, term asc) order.
Vocabulary build_vocabulary(const std::vector<Tokens>& docs, const PipelineConfig& cfg);

struct SparseEntry {
    std::size_t column;
    double weight;
    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sorted by column, strictly increasing, no stored zeros.
using SparseVector = std::vector<SparseEntry>;

struct FeatureMatrix {
    std::vector<SparseVector> rows;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_labels;
    std::size_t n_columns = 0;

    std::size_t n_rows() const noexcept { return rows.size(); }
    std::size_t n_classes() const noexcept { return class_labels.size(); }

    /// One "label_index col:weight col:weight ..." line per row, preceded by a
    /// "# columns <n> classes <label>..." header line.
    std::string serialize() const;
    static FeatureMatrix parse(std::string_view text);
};

/// Weights one row per document. `threads` only splits the work; output is
/// identical for any value.
FeatureMatrix tfidf_transform(const std::vector<Tokens>& docs, const Vocabulary& vocab, Weighting weighting,
                              std::size_t threads = 1);

std::vector<Tokens> tokenize_dataset(const corpus::Dataset& data, const PipelineConfig& cfg);

/// normalize -> tokenize -> fit vocabulary -> weight.
std::pair<FeatureMatrix, Vocabulary> vectorize_dataset(const corpus::Dataset& data, const PipelineConfig& cfg,
                                                       std::size_t threads = 1);

/// Applies a fitted vocabulary to held-out data without refitting.
FeatureMatrix vectorize_with(const corpus::Dataset& data, const Vocabulary& vocab, const PipelineConfig& cfg,
                             std::size_t threads = 1);

}  // namespace sentipgm::textprep
