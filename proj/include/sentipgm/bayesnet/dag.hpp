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
#include <string>
#include <vector>

namespace sentipgm::bayesnet {

inline constexpr std::size_t kClassVar = 0;

/// Parent-list DAG over n variables. Parent lists stay sorted.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::size_t n) : parents_(n) {}

    /// Class variable parents every feature; no other edges.
    static Dag naive_bayes(std::size_t n);

    std::size_t size() const noexcept { return parents_.size(); }
    const std::vector<std::size_t>& parents(std::size_t v) const { return parents_.at(v); }
    bool has_edge(std::size_t from, std::size_t to) const;
    /// Parents of v other than the class variable.
    std::size_t feature_parent_count(std::size_t v) const;

    void add_edge(std::size_t from, std::size_t to);
    void remove_edge(std::size_t from, std::size_t to);

    /// Directed path src -> ... -> dst (length >= 1, or src == dst).
    /// Adding from->to closes a cycle iff has_path(to, from).
    bool has_path(std::size_t src, std::size_t dst) const;
    bool is_acyclic() const;
    std::size_t edge_count() const;

    friend bool operator==(const Dag& a, const Dag& b) { return a.parents_ == b.parents_; }

private:
    std::vector<std::vector<std::size_t>> parents_;
};

/// Throws InvalidStructure unless the DAG is acyclic, has no self/duplicate
/// parents, the class is a root parenting every feature, and every feature
/// has at most max_parents non-class parents.
void validate_classifier_dag(const Dag& dag, std::size_t max_parents);

}  // namespace sentipgm::bayesnet
