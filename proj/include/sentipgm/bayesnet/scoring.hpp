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
#include <string_view>
#include <vector>

#include "sentipgm/bayesnet/dag.hpp"
#include "sentipgm/bayesnet/discrete_data.hpp"

namespace sentipgm::bayesnet {

enum class Metric { Bayes, BDeu, K2, Mdl, Entropy, Aic };

inline constexpr Metric kAllMetrics[] = {Metric::Bayes, Metric::BDeu, Metric::K2,
                                         Metric::Mdl,   Metric::Entropy, Metric::Aic};

Metric parse_metric(std::string_view name);
const char* to_string(Metric m) noexcept;

struct ScoreConfig {
    Metric metric = Metric::K2;
    /// Equivalent sample size for the bayes / bdeu Dirichlet priors.
    double alpha = 0.5;
    /// Limit on non-class parents per feature.
    std::size_t max_parents = 2;
    /// ln P(B_s); uniform structure prior.
    double structure_prior = 0.0;
    /// Upper bound on q_i.
    std::size_t max_parent_configs = 1'000'000;
};

/// Sufficient statistics N_ijk for one family. Row j is the parent
/// configuration in mixed radix with the first (smallest-index) parent as
/// the most significant digit.
struct CountTable {
    std::size_t var = 0;
    std::size_t r = 0;
    std::size_t q = 1;
    std::vector<std::uint64_t> counts;     // q * r, row-major
    std::vector<std::uint64_t> marginals;  // N_ij
    std::uint64_t total = 0;               // N

    std::uint64_t at(std::size_t j, std::size_t k) const { return counts[j * r + k]; }
};

/// lnΓ(x) for x > 0, reentrant.
double log_gamma(double x);

CountTable collect_counts(const DiscreteData& data, std::size_t var, const std::vector<std::size_t>& parents,
                          std::size_t max_parent_configs = 1'000'000);

/// Additive family contribution; every metric is oriented "larger is
/// better" (information-theoretic scores are negated description lengths).
double family_score(const CountTable& counts, const ScoreConfig& cfg);

double network_score(const DiscreteData& data, const Dag& dag, const ScoreConfig& cfg);

}  // namespace sentipgm::bayesnet
