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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sentipgm/textprep.hpp"

namespace sentipgm::hmm {

using ObservationSeq = std::vector<std::size_t>;

/// Discrete HMM λ = (A, B, π) with row-major dense matrices.
struct HmmModel {
    std::size_t n_states = 0;
    std::size_t n_symbols = 0;
    std::vector<double> transition;  // N x N, a_ij = transition[i * N + j]
    std::vector<double> emission;    // N x M, b_j(k) = emission[j * M + k]
    std::vector<double> initial;     // N

    double a(std::size_t i, std::size_t j) const { return transition[i * n_states + j]; }
    double b(std::size_t j, std::size_t k) const { return emission[j * n_symbols + k]; }

    /// Throws InvalidArgument unless every distribution is nonnegative and
    /// sums to 1 within `tol`.
    void validate(double tol = 1e-9) const;

    /// Uniform-random rows with a 1e-3 floor, normalized.
    static HmmModel random(std::size_t n_states, std::size_t n_symbols, std::mt19937_64& rng);
};

struct ForwardResult {
    /// ln P(O | λ); -inf when the sequence is impossible.
    double log_likelihood = 0.0;
    std::vector<double> alpha;  // T x N, each row normalized
    std::vector<double> scale;  // c_t = 1 / Σ_i alpha'_t(i)
};

ForwardResult forward_scaled(const HmmModel& model, const ObservationSeq& obs);

struct ViterbiResult {
    std::vector<std::size_t> path;
    double log_probability = 0.0;
};

ViterbiResult viterbi(const HmmModel& model, const ObservationSeq& obs);

struct BaumWelchOptions {
    std::size_t max_iters = 100;
    double tol = 1e-6;
};

struct BaumWelchResult {
    HmmModel model;
    /// Corpus log-likelihood under the parameters entering each iteration.
    std::vector<double> log_likelihoods;
};

BaumWelchResult baum_welch(const HmmModel& init, const std::vector<ObservationSeq>& corpus,
                           const BaumWelchOptions& options = {});

/// One HMM per class over a shared symbol alphabet whose last symbol is the
/// reserved unknown-word symbol.
struct ClassHmmBank {
    std::vector<HmmModel> models;
    std::vector<double> class_priors;
    std::vector<std::string> class_labels;
    std::vector<std::string> symbols;  // symbol index -> term, unknown excluded

    std::size_t unknown_symbol() const noexcept { return symbols.size(); }
    std::size_t n_symbols() const noexcept { return symbols.size() + 1; }

    /// Out-of-alphabet terms map to the unknown symbol; an empty document
    /// becomes the single-symbol sequence [unknown].
    ObservationSeq encode(const textprep::Tokens& tokens) const;

    std::string serialize() const;
    static ClassHmmBank parse(std::string_view text);
};

struct ClassHmmOptions {
    std::size_t n_states = 3;
    std::size_t vocab_size = 1000;
    std::uint64_t seed = 0;
    BaumWelchOptions bw;
    /// Each trained emission row becomes (1 - e) b + e / M; 0 disables.
    double emission_smoothing = 1e-3;
    std::size_t threads = 1;
};

struct ClassHmmTraining {
    ClassHmmBank bank;
    /// Per-class Baum-Welch log-likelihood traces.
    std::vector<std::vector<double>> traces;
};

ClassHmmTraining train_class_hmms(const std::vector<textprep::Tokens>& docs, const std::vector<std::size_t>& labels,
                                  const std::vector<std::string>& class_labels, const ClassHmmOptions& options);

struct Classification {
    std::size_t label = 0;
    std::vector<double> scores;
};

std::vector<ObservationSeq> encode_corpus(const ClassHmmBank& bank, const std::vector<textprep::Tokens>& docs);

/// score(c) = ln prior(c) + ln P(O | λ_c); ties go to the lowest class.
Classification classify_sequence(const ClassHmmBank& bank, const ObservationSeq& obs);

std::string serialize_model(const HmmModel& model, std::string_view label);
HmmModel parse_model(std::string_view text, std::string* label = nullptr);

}  // namespace sentipgm::hmm
