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

#include "sentipgm/bayesnet/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::bayesnet {

namespace {

// Moves must gain more than this to count as an improvement.
constexpr double kMinGain = 1e-9;

std::vector<std::size_t> with_parent(std::vector<std::size_t> parents, std::size_t p) {
    parents.insert(std::lower_bound(parents.begin(), parents.end(), p), p);
    return parents;
}

std::vector<std::size_t> without_parent(std::vector<std::size_t> parents, std::size_t p) {
    parents.erase(std::remove(parents.begin(), parents.end(), p), parents.end());
    return parents;
}

}  // namespace

Move Move::inverse() const {
    switch (kind) {
    case MoveKind::Add: return {MoveKind::Delete, from, to};
    case MoveKind::Delete: return {MoveKind::Add, from, to};
    case MoveKind::Reverse: return {MoveKind::Reverse, to, from};
    }
    return *this;
}

std::string Move::describe() const {
    static const char* names[] = {"add", "delete", "reverse"};
    return std::string(names[static_cast<int>(kind)]) + " " + std::to_string(from) + "->" + std::to_string(to);
}

double FamilyScorer::score(std::size_t var, const std::vector<std::size_t>& parents) {
    auto key = std::make_pair(var, parents);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double s = family_score(collect_counts(data_, var, parents, cfg_.max_parent_configs), cfg_);
    cache_.emplace(std::move(key), s);
    return s;
}

double FamilyScorer::total(const Dag& dag) {
    double s = cfg_.structure_prior;
    for (std::size_t v = 0; v < dag.size(); ++v) s += score(v, dag.parents(v));
    return s;
}

double FamilyScorer::delta(const Dag& dag, const Move& m) {
    const auto& pt = dag.parents(m.to);
    switch (m.kind) {
    case MoveKind::Add: return score(m.to, with_parent(pt, m.from)) - score(m.to, pt);
    case MoveKind::Delete: return score(m.to, without_parent(pt, m.from)) - score(m.to, pt);
    case MoveKind::Reverse: {
        const auto& pf = dag.parents(m.from);
        return (score(m.to, without_parent(pt, m.from)) - score(m.to, pt)) +
               (score(m.from, with_parent(pf, m.to)) - score(m.from, pf));
    }
    }
    return 0.0;
}

std::vector<Move> legal_moves(const Dag& dag, std::size_t max_parents) {
    std::vector<Move> adds, deletes, reverses;
    const std::size_t n = dag.size();
    for (std::size_t from = 1; from < n; ++from) {
        for (std::size_t to = 1; to < n; ++to) {
            if (from == to) continue;
            if (dag.has_edge(from, to)) {
                deletes.push_back({MoveKind::Delete, from, to});
                if (dag.feature_parent_count(from) < max_parents) {
                    Dag without = dag;
                    without.remove_edge(from, to);
                    if (!without.has_path(from, to)) reverses.push_back({MoveKind::Reverse, from, to});
                }
            } else if (!dag.has_edge(to, from) && dag.feature_parent_count(to) < max_parents &&
                       !dag.has_path(to, from)) {
                adds.push_back({MoveKind::Add, from, to});
            }
        }
    }
    adds.insert(adds.end(), deletes.begin(), deletes.end());
    adds.insert(adds.end(), reverses.begin(), reverses.end());
    return adds;
}

void apply_move(Dag& dag, const Move& m) {
    switch (m.kind) {
    case MoveKind::Add: dag.add_edge(m.from, m.to); break;
    case MoveKind::Delete: dag.remove_edge(m.from, m.to); break;
    case MoveKind::Reverse:
        dag.remove_edge(m.from, m.to);
        dag.add_edge(m.to, m.from);
        break;
    }
}

SearchResult search_k2(const DiscreteData& data, const std::vector<std::size_t>& order, const ScoreConfig& cfg) {
    const std::size_t n = data.n_vars();
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected(n > 0 ? n - 1 : 0);
    std::iota(expected.begin(), expected.end(), 1);
    if (sorted != expected) fail(ErrorCode::InvalidArgument, "K2 order must be a permutation of the feature variables");

    FamilyScorer scorer(data, cfg);
    SearchResult res;
    res.dag = Dag::naive_bayes(n);
    res.trace.push_back(scorer.total(res.dag));
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t var = order[pos];
        std::vector<std::size_t> preds(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pos));
        std::sort(preds.begin(), preds.end());
        double current = scorer.score(var, res.dag.parents(var));
        while (res.dag.feature_parent_count(var) < cfg.max_parents) {
            std::size_t best = 0;
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::size_t cand : preds) {
                if (res.dag.has_edge(cand, var)) continue;
                double s = scorer.score(var, with_parent(res.dag.parents(var), cand));
                if (s > best_score) {
                    best_score = s;
                    best = cand;
                }
            }
            if (!(best_score > current + kMinGain)) break;
            res.dag.add_edge(best, var);
            res.moves.push_back({MoveKind::Add, best, var});
            current = best_score;
            res.trace.push_back(scorer.total(res.dag));
        }
    }
    res.score = res.trace.back();
    return res;
}

SearchResult search_hill_climb(const DiscreteData& data, const ScoreConfig& cfg, std::size_t max_steps,
                               std::optional<Dag> start) {
    FamilyScorer scorer(data, cfg);
    SearchResult res;
    res.dag = start ? std::move(*start) : Dag::naive_bayes(data.n_vars());
    validate_classifier_dag(res.dag, cfg.max_parents);
    res.trace.push_back(scorer.total(res.dag));
    for (std::size_t step = 0; step < max_steps; ++step) {
        std::optional<Move> best;
        double best_delta = kMinGain;
        for (const Move& m : legal_moves(res.dag, cfg.max_parents)) {
            double d = scorer.delta(res.dag, m);
            if (d > best_delta) {
                best_delta = d;
                best = m;
            }
        }
        if (!best) break;
        apply_move(res.dag, *best);
        res.moves.push_back(*best);
        res.trace.push_back(scorer.total(res.dag));
    }
    res.score = res.trace.back();
    return res;
}

Dag random_structure(std::size_t n_vars, std::size_t max_parents, std::uint64_t seed) {
    Dag dag = Dag::naive_bayes(n_vars);
    if (n_vars < 3) return dag;
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(n_vars - 1);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 1; i < perm.size(); ++i) {
        std::vector<std::size_t> preds(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(i));
        std::uniform_int_distribution<std::size_t> count(0, std::min(max_parents, preds.size()));
        std::size_t k = count(rng);
        std::shuffle(preds.begin(), preds.end(), rng);
        for (std::size_t j = 0; j < k; ++j) dag.add_edge(preds[j], perm[i]);
    }
    return dag;
}

SearchResult search_repeated_hill_climb(const DiscreteData& data, const ScoreConfig& cfg, std::size_t restarts,
                                        std::uint64_t seed, std::size_t max_steps) {
    if (restarts < 1) fail(ErrorCode::InvalidArgument, "restarts must be >= 1");
    SearchResult best;
    bool have = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        Dag start = r == 0 ? Dag::naive_bayes(data.n_vars())
                           : random_structure(data.n_vars(), cfg.max_parents, util::derive_seed(seed, r));
        SearchResult run = search_hill_climb(data, cfg, max_steps, std::move(start));
        if (!have || run.score > best.score) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

namespace {

struct ScoredMove {
    Move move;
    double delta;
};

// Top `good_ops` moves by delta; canonical order breaks ties.
std::vector<ScoredMove> best_moves(FamilyScorer& scorer, const Dag& dag, std::size_t good_ops) {
    std::vector<ScoredMove> scored;
    for (const Move& m : legal_moves(dag, scorer.config().max_parents)) scored.push_back({m, scorer.delta(dag, m)});
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.delta > b.delta; });
    if (scored.size() > good_ops) scored.resize(good_ops);
    return scored;
}

// Best total delta over move sequences of length 1..depth; a continuation is
// only taken when it helps.
double look_ahead_value(FamilyScorer& scorer, const Dag& dag, std::size_t depth, std::size_t good_ops) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& sm : best_moves(scorer, dag, good_ops)) {
        double total = sm.delta;
        if (depth > 1) {
            Dag next = dag;
            apply_move(next, sm.move);
            total += std::max(0.0, look_ahead_value(scorer, next, depth - 1, good_ops));
        }
        best = std::max(best, total);
    }
    return best;
}

}  // namespace

SearchResult search_lagd(const DiscreteData& data, const ScoreConfig& cfg, std::size_t look_ahead,
                         std::size_t good_ops, std::size_t max_steps) {
    if (look_ahead < 1 || good_ops < 1) fail(ErrorCode::InvalidArgument, "look_ahead and good_ops must be >= 1");
    FamilyScorer scorer(data, cfg);
    Dag dag = Dag::naive_bayes(data.n_vars());
    SearchResult res;
    res.trace.push_back(scorer.total(dag));
    Dag best_dag = dag;
    double best_score = res.trace.back();
    for (std::size_t step = 0; step < max_steps; ++step) {
        std::optional<Move> first;
        double best_total = kMinGain;
        for (const auto& sm : best_moves(scorer, dag, good_ops)) {
            double total = sm.delta;
            if (look_ahead > 1) {
                Dag next = dag;
                apply_move(next, sm.move);
                total += std::max(0.0, look_ahead_value(scorer, next, look_ahead - 1, good_ops));
            }
            if (total > best_total) {
                best_total = total;
                first = sm.move;
            }
        }
        if (!first) break;
        apply_move(dag, *first);
        res.moves.push_back(*first);
        res.trace.push_back(scorer.total(dag));
        if (res.trace.back() > best_score) {
            best_score = res.trace.back();
            best_dag = dag;
        }
    }
    res.dag = std::move(best_dag);
    res.score = best_score;
    return res;
}

SearchResult search_tabu(const DiscreteData& data, const ScoreConfig& cfg, std::size_t tabu_length,
                         std::size_t max_steps) {
    if (tabu_length < 1) fail(ErrorCode::InvalidArgument, "tabu_length must be >= 1");
    FamilyScorer scorer(data, cfg);
    Dag dag = Dag::naive_bayes(data.n_vars());
    SearchResult res;
    res.trace.push_back(scorer.total(dag));
    Dag best_dag = dag;
    double best_score = res.trace.back();
    // (move, last step at which it is still tabu)
    std::deque<std::pair<Move, std::size_t>> tabu;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        while (!tabu.empty() && tabu.front().second < step) tabu.pop_front();
        std::optional<Move> best;
        double best_delta = -std::numeric_limits<double>::infinity();
        for (const Move& m : legal_moves(dag, cfg.max_parents)) {
            bool is_tabu = std::any_of(tabu.begin(), tabu.end(), [&](const auto& t) { return t.first == m; });
            if (is_tabu) continue;
            double d = scorer.delta(dag, m);
            if (d > best_delta) {
                best_delta = d;
                best = m;
            }
        }
        if (!best) break;
        apply_move(dag, *best);
        tabu.emplace_back(best->inverse(), step + tabu_length);
        res.moves.push_back(*best);
        res.trace.push_back(scorer.total(dag));
        if (res.trace.back() > best_score) {
            best_score = res.trace.back();
            best_dag = dag;
        }
    }
    res.dag = std::move(best_dag);
    res.score = best_score;
    return res;
}

double conditional_mutual_information(const DiscreteData& data, std::size_t a, std::size_t b) {
    const std::size_t rc = data.cardinality(kClassVar), ra = data.cardinality(a), rb = data.cardinality(b);
    std::vector<std::uint64_t> nabc(rc * ra * rb, 0), nac(rc * ra, 0), nbc(rc * rb, 0), nc(rc, 0);
    const auto& cc = data.column(kClassVar);
    const auto& ca = data.column(a);
    const auto& cb = data.column(b);
    for (std::size_t n = 0; n < data.n_rows(); ++n) {
        ++nabc[(cc[n] * ra + ca[n]) * rb + cb[n]];
        ++nac[cc[n] * ra + ca[n]];
        ++nbc[cc[n] * rb + cb[n]];
        ++nc[cc[n]];
    }
    const double total = static_cast<double>(data.n_rows());
    double mi = 0.0;
    for (std::size_t c = 0; c < rc; ++c)
        for (std::size_t x = 0; x < ra; ++x)
            for (std::size_t y = 0; y < rb; ++y) {
                auto n = static_cast<double>(nabc[(c * ra + x) * rb + y]);
                if (n == 0) continue;
                mi += n / total *
                      std::log(n * static_cast<double>(nc[c]) /
                               (static_cast<double>(nac[c * ra + x]) * static_cast<double>(nbc[c * rb + y])));
            }
    return mi;
}

namespace {

double cmi_from_binary_counts(std::size_t classes, const std::vector<std::uint64_t>& nc,
                              const std::uint64_t* n1a, const std::uint64_t* n1b, const std::uint32_t* n11,
                              std::size_t stride_a, std::size_t stride_b, std::size_t stride_11, double total) {
    double mi = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        const double ncc = static_cast<double>(nc[c]);
        if (ncc == 0) continue;
        const double a1 = static_cast<double>(n1a[c * stride_a]);
        const double b1 = static_cast<double>(n1b[c * stride_b]);
        const double ab = static_cast<double>(n11[c * stride_11]);
        const double cells[4] = {ab, a1 - ab, b1 - ab, ncc - a1 - b1 + ab};
        const double ma[4] = {a1, a1, ncc - a1, ncc - a1};
        const double mb[4] = {b1, ncc - b1, b1, ncc - b1};
        for (int k = 0; k < 4; ++k)
            if (cells[k] > 0) mi += cells[k] / total * std::log(cells[k] * ncc / (ma[k] * mb[k]));
    }
    return mi;
}

}  // namespace

std::vector<double> cmi_matrix(const DiscreteData& data) {
    const std::size_t f = data.n_features();
    std::vector<double> w(f * f, 0.0);
    bool binary = true;
    for (std::size_t v = 1; v < data.n_vars(); ++v) binary = binary && data.cardinality(v) == 2;

    if (!binary) {
        for (std::size_t a = 0; a < f; ++a)
            for (std::size_t b = a + 1; b < f; ++b)
                w[a * f + b] = w[b * f + a] = conditional_mutual_information(data, a + 1, b + 1);
        return w;
    }

    // Binary features: only co-occurring "present" pairs need a pass over
    // the data; every other cell follows from the marginals.
    const std::size_t classes = data.cardinality(kClassVar);
    const std::size_t rows = data.n_rows();
    std::vector<std::vector<std::uint32_t>> present(rows);
    std::vector<std::uint64_t> nc(classes, 0), n1(classes * f, 0);
    const auto& cls = data.column(kClassVar);
    for (std::size_t n = 0; n < rows; ++n) ++nc[cls[n]];
    for (std::size_t a = 0; a < f; ++a) {
        const auto& col = data.column(a + 1);
        for (std::size_t n = 0; n < rows; ++n)
            if (col[n]) {
                present[n].push_back(static_cast<std::uint32_t>(a));
                ++n1[cls[n] * f + a];
            }
    }
    const std::size_t pairs = f * (f - 1) / 2;
    auto tri = [f](std::size_t a, std::size_t b) { return a * (2 * f - a - 1) / 2 + (b - a - 1); };
    std::vector<std::uint32_t> n11(classes * pairs, 0);
    for (std::size_t n = 0; n < rows; ++n) {
        const auto& p = present[n];
        std::uint32_t* base = n11.data() + cls[n] * pairs;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j) ++base[tri(p[i], p[j])];
    }
    const double total = static_cast<double>(rows);
    for (std::size_t a = 0; a < f; ++a)
        for (std::size_t b = a + 1; b < f; ++b) {
            double mi = cmi_from_binary_counts(classes, nc, n1.data() + a, n1.data() + b, n11.data() + tri(a, b), f, f,
                                               pairs, total);
            w[a * f + b] = w[b * f + a] = mi;
        }
    return w;
}

SearchResult learn_tan(const DiscreteData& data, const ScoreConfig& cfg) {
    const std::size_t f = data.n_features();
    if (f < 2) fail(ErrorCode::TooFewVariables, "TAN needs at least two feature variables");
    FamilyScorer scorer(data, cfg);
    SearchResult res;
    res.dag = Dag::naive_bayes(data.n_vars());
    if (cfg.max_parents == 0) {
        res.score = scorer.total(res.dag);
        res.trace = {res.score};
        return res;
    }
    const auto w = cmi_matrix(data);

    // Prim's algorithm for the maximum-weight spanning tree, rooted at
    // feature 0; lowest index wins ties.
    std::vector<char> in_tree(f, 0);
    std::vector<double> key(f, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(f, 0);
    in_tree[0] = 1;
    for (std::size_t v = 1; v < f; ++v) key[v] = w[v];
    for (std::size_t added = 1; added < f; ++added) {
        std::size_t pick = f;
        for (std::size_t v = 0; v < f; ++v)
            if (!in_tree[v] && (pick == f || key[v] > key[pick])) pick = v;
        in_tree[pick] = 1;
        res.dag.add_edge(parent[pick] + 1, pick + 1);
        res.moves.push_back({MoveKind::Add, parent[pick] + 1, pick + 1});
        for (std::size_t u = 0; u < f; ++u)
            if (!in_tree[u] && w[pick * f + u] > key[u]) {
                key[u] = w[pick * f + u];
                parent[u] = pick;
            }
    }
    res.score = scorer.total(res.dag);
    res.trace = {res.score};
    return res;
}

SearchAlgorithm parse_search(std::string_view name) {
    if (name == "k2") return SearchAlgorithm::K2;
    if (name == "hill_climb") return SearchAlgorithm::HillClimb;
    if (name == "repeated_hill_climb") return SearchAlgorithm::RepeatedHillClimb;
    if (name == "lagd") return SearchAlgorithm::Lagd;
    if (name == "tabu") return SearchAlgorithm::Tabu;
    if (name == "tan") return SearchAlgorithm::Tan;
    if (name == "naive_bayes") return SearchAlgorithm::NaiveBayes;
    fail(ErrorCode::Config, "unknown search '" + std::string(name) + "'");
}

const char* to_string(SearchAlgorithm s) noexcept {
    switch (s) {
    case SearchAlgorithm::K2: return "k2";
    case SearchAlgorithm::HillClimb: return "hill_climb";
    case SearchAlgorithm::RepeatedHillClimb: return "repeated_hill_climb";
    case SearchAlgorithm::Lagd: return "lagd";
    case SearchAlgorithm::Tabu: return "tabu";
    case SearchAlgorithm::Tan: return "tan";
    case SearchAlgorithm::NaiveBayes: return "naive_bayes";
    }
    return "?";
}

}  // namespace sentipgm::bayesnet
