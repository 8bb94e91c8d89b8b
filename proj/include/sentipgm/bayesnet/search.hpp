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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentipgm/bayesnet/dag.hpp"
#include "sentipgm/bayesnet/discrete_data.hpp"
#include "sentipgm/bayesnet/scoring.hpp"

namespace sentipgm::bayesnet {

enum class MoveKind { Add = 0, Delete = 1, Reverse = 2 };

/// A single arc operation between feature variables. Ordering (kind, from,
/// to) is the deterministic tie-break used by every search.
struct Move {
    MoveKind kind;
    std::size_t from;
    std::size_t to;

    Move inverse() const;
    std::string describe() const;
    friend auto operator<=>(const Move&, const Move&) = default;
};

struct SearchResult {
    Dag dag;
    double score = 0.0;
    /// Network score of the starting structure followed by the score after
    /// every applied move.
    std::vector<double> trace;
    std::vector<Move> moves;
};

/// Memoized family scores for one (data, config) pair.
class FamilyScorer {
public:
    FamilyScorer(const DiscreteData& data, const ScoreConfig& cfg) : data_(data), cfg_(cfg) {}

    double score(std::size_t var, const std::vector<std::size_t>& parents);
    double total(const Dag& dag);
    /// Score change of applying `m` to `dag` (which must admit it).
    double delta(const Dag& dag, const Move& m);

    const DiscreteData& data() const noexcept { return data_; }
    const ScoreConfig& config() const noexcept { return cfg_; }

private:
    const DiscreteData& data_;
    ScoreConfig cfg_;
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, double> cache_;
};

/// Legal moves in canonical order: no class arcs, acyclic, max_parents kept.
std::vector<Move> legal_moves(const Dag& dag, std::size_t max_parents);
void apply_move(Dag& dag, const Move& m);

SearchResult search_k2(const DiscreteData& data, const std::vector<std::size_t>& order, const ScoreConfig& cfg);

SearchResult search_hill_climb(const DiscreteData& data, const ScoreConfig& cfg, std::size_t max_steps,
                               std::optional<Dag> start = std::nullopt);

SearchResult search_repeated_hill_climb(const DiscreteData& data, const ScoreConfig& cfg, std::size_t restarts,
                                        std::uint64_t seed, std::size_t max_steps = 1000);

/// Random acyclic structure on top of the naive-Bayes base.
Dag random_structure(std::size_t n_vars, std::size_t max_parents, std::uint64_t seed);

SearchResult search_lagd(const DiscreteData& data, const ScoreConfig& cfg, std::size_t look_ahead = 2,
                         std::size_t good_ops = 5, std::size_t max_steps = 1000);

SearchResult search_tabu(const DiscreteData& data, const ScoreConfig& cfg, std::size_t tabu_length = 5,
                         std::size_t max_steps = 100);

/// I(X_a; X_b | C) in nats from empirical frequencies.
double conditional_mutual_information(const DiscreteData& data, std::size_t a, std::size_t b);

/// Symmetric F x F matrix (feature-indexed, 0-based) of class-conditional
/// mutual information. Binary features use a sparse co-occurrence pass.
std::vector<double> cmi_matrix(const DiscreteData& data);

/// Tree-augmented naive Bayes via a maximum-weight spanning tree rooted at
/// the first feature.
SearchResult learn_tan(const DiscreteData& data, const ScoreConfig& cfg);

enum class SearchAlgorithm { K2, HillClimb, RepeatedHillClimb, Lagd, Tabu, Tan, NaiveBayes };
SearchAlgorithm parse_search(std::string_view name);
const char* to_string(SearchAlgorithm s) noexcept;

}  // namespace sentipgm::bayesnet
