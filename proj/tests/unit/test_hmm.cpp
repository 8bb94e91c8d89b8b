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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sentipgm/hmm.hpp"
#include "test_support.hpp"

using namespace sentipgm;
using namespace sentipgm::hmm;
using testsupport::rng_for;
using testsupport::thrown_code;

namespace {

HmmModel one_state(std::vector<double> emission) {
    const std::size_t m = emission.size();
    return HmmModel{1, m, {1.0}, std::move(emission), {1.0}};
}

std::vector<ObservationSeq> random_corpus(std::size_t docs, std::size_t m, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, 8), sym(0, m - 1);
    std::vector<ObservationSeq> out(docs);
    for (auto& s : out) {
        s.resize(len(rng));
        for (auto& o : s) o = sym(rng);
    }
    return out;
}

}  // namespace

TEST_SUITE("forward") {
    TEST_CASE("a single state collapses to a product of emissions") {
        HmmModel m = one_state({0.2, 0.5, 0.3});
        ObservationSeq obs{0, 1, 1, 2};
        double expected = std::log(0.2) + 2 * std::log(0.5) + std::log(0.3);
        CHECK(forward_scaled(m, obs).log_likelihood == doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("matches enumeration over all paths") {
        auto rng = rng_for(1);
        for (int trial = 0; trial < 30; ++trial) {
            HmmModel m = oracle::random_hmm(2, 3, rng);
            std::uniform_int_distribution<std::size_t> sym(0, 2);
            ObservationSeq obs(3);
            for (auto& o : obs) o = sym(rng);
            auto brute = oracle::enumerate_paths(m, obs);
            auto f = forward_scaled(m, obs);
            CHECK(std::exp(f.log_likelihood) == doctest::Approx(brute.probability).epsilon(1e-9));
            double from_scales = 0;
            for (double c : f.scale) from_scales -= std::log(c);
            CHECK(from_scales == doctest::Approx(f.log_likelihood).epsilon(1e-12));
        }
    }

    TEST_CASE("an observation no state can emit is impossible") {
        HmmModel m{2, 2, {0.5, 0.5, 0.5, 0.5}, {1.0, 0.0, 1.0, 0.0}, {0.5, 0.5}};
        CHECK(forward_scaled(m, {0, 1}).log_likelihood == -INFINITY);
        CHECK(viterbi(m, {0, 1}).log_probability == -INFINITY);
    }

    TEST_CASE("symbols are range-checked") {
        HmmModel m = one_state({0.5, 0.5});
        CHECK(thrown_code([&] { forward_scaled(m, {0, 2}); }) == ErrorCode::SymbolOutOfRange);
        CHECK(thrown_code([&] { viterbi(m, {3}); }) == ErrorCode::SymbolOutOfRange);
    }
}

TEST_SUITE("viterbi") {
    TEST_CASE("deterministic dynamics force the path") {
        // 0 -> 1 -> 2 -> 2, each state emits every symbol.
        HmmModel m{3, 2, {0, 1, 0, 0, 0, 1, 0, 0, 1}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, {1, 0, 0}};
        auto v = viterbi(m, {0, 1, 0, 1});
        CHECK(v.path == std::vector<std::size_t>{0, 1, 2, 2});
        CHECK(v.log_probability == doctest::Approx(4 * std::log(0.5)));
    }

    TEST_CASE("matches the exhaustive argmax and never exceeds the likelihood") {
        auto rng = rng_for(2);
        for (int trial = 0; trial < 40; ++trial) {
            HmmModel m = oracle::random_hmm(2, 3, rng);
            std::uniform_int_distribution<std::size_t> len(1, 6), sym(0, 2);
            ObservationSeq obs(len(rng));
            for (auto& o : obs) o = sym(rng);
            auto brute = oracle::enumerate_paths(m, obs);
            auto v = viterbi(m, obs);
            // Equal symbols can make distinct paths exactly tie, so compare
            // the returned path's own probability with the maximum.
            CHECK(oracle::path_probability(m, obs, v.path) ==
                  doctest::Approx(brute.best_path_probability).epsilon(1e-9));
            CHECK(std::exp(v.log_probability) == doctest::Approx(brute.best_path_probability).epsilon(1e-9));
            CHECK(v.log_probability <= forward_scaled(m, obs).log_likelihood + 1e-12);
        }
    }
}

TEST_SUITE("baum-welch") {
    TEST_CASE("one state converges to symbol frequencies in one step") {
        HmmModel init = one_state({0.25, 0.25, 0.25, 0.25});
        std::vector<ObservationSeq> corpus{{0, 1, 1}, {2, 1}, {1}};
        auto r = baum_welch(init, corpus, {1, 1e-6});
        // Frequencies 1/6, 4/6, 1/6, 0.
        CHECK(r.model.b(0, 0) == doctest::Approx(1.0 / 6));
        CHECK(r.model.b(0, 1) == doctest::Approx(4.0 / 6));
        CHECK(r.model.b(0, 2) == doctest::Approx(1.0 / 6));
        CHECK(r.model.b(0, 3) == doctest::Approx(0.0));
        CHECK(r.log_likelihoods.size() == 1);
        // A second iteration makes no further progress.
        auto more = baum_welch(init, corpus, {5, 1e-6});
        REQUIRE(more.log_likelihoods.size() == 3);
        CHECK(more.log_likelihoods[2] == doctest::Approx(more.log_likelihoods[1]).epsilon(1e-12));
    }

    TEST_CASE("a fixpoint stays put") {
        HmmModel fixed = one_state({1.0 / 6, 4.0 / 6, 1.0 / 6, 0.0});
        std::vector<ObservationSeq> corpus{{0, 1, 1}, {2, 1}, {1}};
        auto r = baum_welch(fixed, corpus, {3, 1e-6});
        for (std::size_t k = 0; k < 4; ++k) CHECK(r.model.b(0, k) == doctest::Approx(fixed.b(0, k)).epsilon(1e-9));
    }

    TEST_CASE("likelihood never decreases and parameters stay stochastic") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto rng = rng_for(seed);
            auto corpus = random_corpus(12, 4, rng);
            HmmModel init = HmmModel::random(3, 4, rng);
            auto r = baum_welch(init, corpus, {60, 1e-12});
            for (std::size_t i = 1; i < r.log_likelihoods.size(); ++i)
                CHECK(r.log_likelihoods[i] >= r.log_likelihoods[i - 1] - 1e-9);
            CHECK_NOTHROW(r.model.validate());
        }
    }

    TEST_CASE("empty corpus and bad options are rejected") {
        HmmModel m = one_state({0.5, 0.5});
        CHECK(thrown_code([&] { baum_welch(m, {}); }) == ErrorCode::EmptyCorpus);
        CHECK(thrown_code([&] { baum_welch(m, {{0}}, {0, 1e-6}); }) == ErrorCode::InvalidArgument);
    }
}

TEST_SUITE("class bank") {
    const std::vector<textprep::Tokens> docs{{"good", "great"}, {"great", "fun"}, {"bad", "awful"}, {"awful", "dull"}};
    const std::vector<std::size_t> labels{0, 0, 1, 1};

    TEST_CASE("a single class has prior one") {
        ClassHmmOptions opt;
        opt.n_states = 2;
        auto t = train_class_hmms({{"a", "b"}, {"b"}}, {0, 0}, {"only"}, opt);
        CHECK(t.bank.class_priors == std::vector<double>{1.0});
    }

    TEST_CASE("same seed gives an identical bank and the unknown symbol is reserved") {
        ClassHmmOptions opt;
        opt.n_states = 2;
        opt.seed = 9;
        auto a = train_class_hmms(docs, labels, {"pos", "neg"}, opt);
        auto b = train_class_hmms(docs, labels, {"pos", "neg"}, opt);
        CHECK(a.bank.serialize() == b.bank.serialize());
        opt.threads = 2;
        CHECK(train_class_hmms(docs, labels, {"pos", "neg"}, opt).bank.serialize() == a.bank.serialize());
        for (const auto& m : a.bank.models) CHECK(m.n_symbols == a.bank.symbols.size() + 1);
        CHECK(a.bank.encode({"never-seen"}) == ObservationSeq{a.bank.unknown_symbol()});
        CHECK(a.bank.encode({}) == ObservationSeq{a.bank.unknown_symbol()});
    }

    TEST_CASE("classifies training documents of separable classes") {
        ClassHmmOptions opt;
        opt.n_states = 2;
        auto t = train_class_hmms(docs, labels, {"pos", "neg"}, opt);
        auto enc = encode_corpus(t.bank, docs);
        for (std::size_t i = 0; i < docs.size(); ++i) CHECK(classify_sequence(t.bank, enc[i]).label == labels[i]);
    }

    TEST_CASE("empty class is reported") {
        ClassHmmOptions opt;
        CHECK(thrown_code([&] { train_class_hmms(docs, {0, 0, 0, 0}, {"pos", "neg"}, opt); }) == ErrorCode::EmptyClass);
    }

    TEST_CASE("serialization round trip") {
        ClassHmmOptions opt;
        opt.n_states = 2;
        auto t = train_class_hmms(docs, labels, {"pos", "neg"}, opt);
        auto text = t.bank.serialize();
        CHECK(ClassHmmBank::parse(text).serialize() == text);
        CHECK(thrown_code([&] { ClassHmmBank::parse("nonsense"); }) == ErrorCode::ModelFormat);
    }
}

TEST_SUITE("classify") {
    TEST_CASE("identical models defer to the priors") {
        ClassHmmBank bank;
        bank.models = {one_state({0.5, 0.5}), one_state({0.5, 0.5})};
        bank.class_priors = {0.3, 0.7};
        bank.class_labels = {"a", "b"};
        bank.symbols = {"x"};
        CHECK(classify_sequence(bank, {0, 1, 0}).label == 1);
        bank.class_priors = {0.5, 0.5};
        CHECK(classify_sequence(bank, {0, 1, 0}).label == 0);
    }

    TEST_CASE("disjoint high-probability symbols separate the classes") {
        ClassHmmBank bank;
        bank.models = {one_state({0.9, 0.1}), one_state({0.1, 0.9})};
        bank.class_priors = {0.5, 0.5};
        bank.class_labels = {"A", "B"};
        bank.symbols = {"a"};
        auto c = classify_sequence(bank, {0, 0, 1});
        CHECK(c.label == 0);
        // Closed form: 0.9 * 0.9 * 0.1 against 0.1 * 0.1 * 0.9.
        CHECK(c.scores[0] - c.scores[1] == doctest::Approx(std::log(0.081 / 0.009)));
    }
}
