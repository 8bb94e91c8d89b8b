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

#include "sentipgm/bayesnet/dag.hpp"

#include <algorithm>

#include "sentipgm/error.hpp"

namespace sentipgm::bayesnet {

Dag Dag::naive_bayes(std::size_t n) {
    Dag d(n);
    for (std::size_t v = 1; v < n; ++v) d.parents_[v].push_back(kClassVar);
    return d;
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
    const auto& p = parents_.at(to);
    return std::binary_search(p.begin(), p.end(), from);
}

std::size_t Dag::feature_parent_count(std::size_t v) const {
    const auto& p = parents_.at(v);
    return p.size() - static_cast<std::size_t>(std::count(p.begin(), p.end(), kClassVar));
}

void Dag::add_edge(std::size_t from, std::size_t to) {
    if (from == to || from >= size() || to >= size())
        fail(ErrorCode::InvalidStructure, "bad edge " + std::to_string(from) + "->" + std::to_string(to));
    auto& p = parents_[to];
    auto it = std::lower_bound(p.begin(), p.end(), from);
    if (it != p.end() && *it == from) return;
    p.insert(it, from);
}

void Dag::remove_edge(std::size_t from, std::size_t to) {
    auto& p = parents_.at(to);
    auto it = std::lower_bound(p.begin(), p.end(), from);
    if (it != p.end() && *it == from) p.erase(it);
}

bool Dag::has_path(std::size_t src, std::size_t dst) const {
    if (src == dst) return true;
    // Walk ancestors of dst.
    std::vector<char> seen(size(), 0);
    std::vector<std::size_t> stack{dst};
    seen[dst] = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t p : parents_[v]) {
            if (p == src) return true;
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
        }
    }
    return false;
}

bool Dag::is_acyclic() const {
    // Kahn's algorithm.
    std::vector<std::size_t> indeg(size());
    std::vector<std::vector<std::size_t>> children(size());
    for (std::size_t v = 0; v < size(); ++v) {
        indeg[v] = parents_[v].size();
        for (std::size_t p : parents_[v]) children[p].push_back(v);
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < size(); ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t c : children[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    return visited == size();
}

std::size_t Dag::edge_count() const {
    std::size_t n = 0;
    for (const auto& p : parents_) n += p.size();
    return n;
}

void validate_classifier_dag(const Dag& dag, std::size_t max_parents) {
    if (dag.size() == 0) fail(ErrorCode::InvalidStructure, "empty graph");
    if (!dag.parents(kClassVar).empty()) fail(ErrorCode::InvalidStructure, "class variable must be a root");
    for (std::size_t v = 0; v < dag.size(); ++v) {
        const auto& p = dag.parents(v);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] == v) fail(ErrorCode::InvalidStructure, "self parent at " + std::to_string(v));
            if (p[k] >= dag.size()) fail(ErrorCode::InvalidStructure, "parent index out of range");
            if (k > 0 && p[k] <= p[k - 1]) fail(ErrorCode::InvalidStructure, "unsorted or duplicate parents");
        }
        if (v != kClassVar) {
            if (!dag.has_edge(kClassVar, v))
                fail(ErrorCode::InvalidStructure, "feature " + std::to_string(v) + " lacks the class parent");
            if (dag.feature_parent_count(v) > max_parents)
                fail(ErrorCode::InvalidStructure, "feature " + std::to_string(v) + " exceeds max_parents");
        }
    }
    if (!dag.is_acyclic()) fail(ErrorCode::InvalidStructure, "graph has a cycle");
}

}  // namespace sentipgm::bayesnet
