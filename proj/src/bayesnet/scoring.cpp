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

#include "sentipgm/bayesnet/scoring.hpp"

#include <cmath>
#include <string>

#include "sentipgm/error.hpp"

namespace sentipgm::bayesnet {

Metric parse_metric(std::string_view name) {
    if (name == "bayes") return Metric::Bayes;
    if (name == "bdeu") return Metric::BDeu;
    if (name == "k2") return Metric::K2;
    if (name == "mdl") return Metric::Mdl;
    if (name == "entropy") return Metric::Entropy;
    if (name == "aic") return Metric::Aic;
    fail(ErrorCode::Config, "unknown metric '" + std::string(name) + "'");
}

const char* to_string(Metric m) noexcept {
    switch (m) {
    case Metric::Bayes: return "bayes";
    case Metric::BDeu: return "bdeu";
    case Metric::K2: return "k2";
    case Metric::Mdl: return "mdl";
    case Metric::Entropy: return "entropy";
    case Metric::Aic: return "aic";
    }
    return "?";
}

double log_gamma(double x) {
    // lgamma_r leaves no global sign state behind.
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

CountTable collect_counts(const DiscreteData& data, std::size_t var, const std::vector<std::size_t>& parents,
                          std::size_t max_parent_configs) {
    CountTable t;
    t.var = var;
    t.r = data.cardinality(var);
    t.q = 1;
    for (std::size_t p : parents) {
        if (p == var) fail(ErrorCode::InvalidStructure, "variable listed as its own parent");
        t.q *= data.cardinality(p);
        if (t.q > max_parent_configs)
            fail(ErrorCode::CardinalityOverflow, "variable " + std::to_string(var) + ": parent configurations exceed " +
                                                    std::to_string(max_parent_configs));
    }
    t.counts.assign(t.q * t.r, 0);
    t.marginals.assign(t.q, 0);
    const std::size_t rows = data.n_rows();
    const auto& child = data.column(var);
    if (parents.empty()) {
        for (std::size_t n = 0; n < rows; ++n) ++t.counts[child[n]];
    } else {
        std::vector<std::size_t> config(rows, 0);
        for (std::size_t p : parents) {
            const auto& col = data.column(p);
            const std::size_t radix = data.cardinality(p);
            for (std::size_t n = 0; n < rows; ++n) config[n] = config[n] * radix + col[n];
        }
        for (std::size_t n = 0; n < rows; ++n) ++t.counts[config[n] * t.r + child[n]];
    }
    for (std::size_t j = 0; j < t.q; ++j)
        for (std::size_t k = 0; k < t.r; ++k) t.marginals[j] += t.at(j, k);
    t.total = rows;
    return t;
}

namespace {

// Σ_j [lnΓ(a_j) − lnΓ(a_j + N_ij) + Σ_k (lnΓ(a_jk + N_ijk) − lnΓ(a_jk))]
double dirichlet_score(const CountTable& t, double cell_prior) {
    const double row_prior = cell_prior * static_cast<double>(t.r);
    const double lg_row = log_gamma(row_prior);
    const double lg_cell = log_gamma(cell_prior);
    double s = 0.0;
    for (std::size_t j = 0; j < t.q; ++j) {
        if (t.marginals[j] == 0) continue;  // contributes exactly zero
        s += lg_row - log_gamma(row_prior + static_cast<double>(t.marginals[j]));
        for (std::size_t k = 0; k < t.r; ++k) {
            auto n = t.at(j, k);
            if (n != 0) s += log_gamma(cell_prior + static_cast<double>(n)) - lg_cell;
        }
    }
    return s;
}

// H_i = −Σ N_ijk ln(N_ijk / N_ij)
double entropy_term(const CountTable& t) {
    double h = 0.0;
    for (std::size_t j = 0; j < t.q; ++j) {
        const double nij = static_cast<double>(t.marginals[j]);
        for (std::size_t k = 0; k < t.r; ++k) {
            auto n = t.at(j, k);
            if (n != 0) h -= static_cast<double>(n) * std::log(static_cast<double>(n) / nij);
        }
    }
    return h;
}

}  // namespace

double family_score(const CountTable& t, const ScoreConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha))
        fail(ErrorCode::InvalidAlpha, "alpha must be a positive finite number");
    const double params = static_cast<double>((t.r - 1) * t.q);
    switch (cfg.metric) {
    case Metric::K2: return dirichlet_score(t, 1.0);
    case Metric::Bayes: return dirichlet_score(t, cfg.alpha);
    case Metric::BDeu: return dirichlet_score(t, cfg.alpha / static_cast<double>(t.r * t.q));
    case Metric::Entropy: return -entropy_term(t);
    case Metric::Mdl:
        return -entropy_term(t) - (t.total > 0 ? 0.5 * params * std::log(static_cast<double>(t.total)) : 0.0);
    case Metric::Aic: return -entropy_term(t) - params;
    }
    return 0.0;
}

double network_score(const DiscreteData& data, const Dag& dag, const ScoreConfig& cfg) {
    if (dag.size() != data.n_vars()) fail(ErrorCode::InvalidStructure, "graph and data disagree on variable count");
    double s = cfg.structure_prior;
    for (std::size_t v = 0; v < dag.size(); ++v)
        s += family_score(collect_counts(data, v, dag.parents(v), cfg.max_parent_configs), cfg);
    return s;
}

}  // namespace sentipgm::bayesnet
