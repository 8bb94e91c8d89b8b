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

#include <sstream>

#include "sentipgm/app/commands.hpp"
#include "sentipgm/app/config.hpp"
#include "sentipgm/util.hpp"
#include "test_support.hpp"

using namespace sentipgm;
using namespace sentipgm::app;
namespace fs = std::filesystem;
using testsupport::slurp;
using testsupport::snapshot;
using testsupport::TempDir;
using testsupport::thrown_code;

namespace {

const fs::path kData = SENTIPGM_TEST_DATA;

const char* kBase =
    "[experiment]\nseed = 3\n"
    "[dataset]\npath = data/reviews.csv\n"
    "[pipeline]\nwords_to_keep = 50\n";

ExperimentConfig toy(const std::string& ini) { return load_config(kData / ini); }

RunOptions quiet(const fs::path& out, std::ostream& sink, std::size_t threads = 1) {
    RunOptions o;
    o.out = out;
    o.threads = threads;
    o.out_stream = &sink;
    o.err_stream = &sink;
    return o;
}

std::vector<std::vector<std::string>> data_lines(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (l.empty() || l[0] == '#') continue;
        std::vector<std::string> f;
        std::istringstream ls(l);
        for (std::string x; std::getline(ls, x, '\t');) f.push_back(x);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("full parse with relative paths") {
        auto cfg = parse_config(std::string(kBase) +
                                    "[split]\ntrain_fraction = 0.75\n"
                                    "[bayesnet]\nsearch = tabu\nmetric = bdeu\nalpha = 2\nmax_parents = 1\n",
                                "/base");
        CHECK(cfg.seed == 3);
        CHECK(cfg.dataset.path == fs::path("/base/data/reviews.csv"));
        CHECK(cfg.dataset.name == "reviews");
        CHECK(cfg.dataset.format == "csv");
        CHECK(cfg.pipeline.words_to_keep == 50);
        CHECK(cfg.split.train_fraction == 0.75);
        CHECK(cfg.model == ModelKind::BayesNet);
        CHECK(cfg.bayesnet.search == bayesnet::SearchAlgorithm::Tabu);
        CHECK(cfg.bayesnet.score.metric == bayesnet::Metric::BDeu);
        CHECK(cfg.bayesnet.score.alpha == 2.0);
        CHECK(cfg.bayesnet.score.max_parents == 1);
        CHECK(cfg.bayesnet.max_steps == 100);
        CHECK(cfg.classifier_label() == "bayesnet-tabu-bdeu");
        CHECK(cfg.name == "bayesnet-tabu-bdeu-reviews");
    }

    TEST_CASE("model sections without keys still count") {
        CHECK(parse_config(std::string(kBase) + "[nb]\n", "/").model == ModelKind::NaiveBayes);
        CHECK(parse_config(std::string(kBase) + "[svm]\n", "/").classifier_label() == "svm");
    }

    TEST_CASE("exactly one model section") {
        CHECK(thrown_code([&] { parse_config(kBase, "/"); }) == ErrorCode::Config);
        CHECK(thrown_code([&] { parse_config(std::string(kBase) + "[nb]\n[svm]\n", "/"); }) == ErrorCode::Config);
    }

    TEST_CASE("unknown sections, keys and values are config errors") {
        CHECK(thrown_code([&] { parse_config(std::string(kBase) + "[nb]\n[extra]\nx = 1\n", "/"); }) ==
              ErrorCode::Config);
        CHECK(thrown_code([&] { parse_config(std::string(kBase) + "[nb]\ncolour = red\n", "/"); }) ==
              ErrorCode::Config);
        CHECK(thrown_code([&] { parse_config(std::string(kBase) + "[hmm]\nn_states = many\n", "/"); }) ==
              ErrorCode::Config);
        CHECK(thrown_code([&] { parse_config(std::string(kBase) + "[bayesnet]\nmetric = bic\n", "/"); }) ==
              ErrorCode::Config);
        CHECK(thrown_code([&] { parse_config("[nb]\n", "/"); }) == ErrorCode::Config);
    }

    TEST_CASE("hash tracks results-relevant settings only") {
        auto a = parse_config(std::string(kBase) + "[nb]\n", "/one");
        auto b = parse_config(std::string(kBase) + "[nb]\n", "/two");
        CHECK(a.hash() == b.hash());
        auto c = parse_config(std::string(kBase) + "[nb]\nsmoothing = 0.5\n", "/one");
        CHECK(a.hash() != c.hash());
        std::string with_output(kBase);
        with_output.insert(with_output.find("seed"), "output = elsewhere\n");
        auto d = parse_config(with_output + "[nb]\n", "/one");
        CHECK(d.output_dir == fs::path("/one/elsewhere"));
        CHECK(d.hash() == a.hash());
    }

    TEST_CASE("missing file is an io error") {
        CHECK(thrown_code([&] { load_config(kData / "no-such.ini"); }) == ErrorCode::Io);
    }

    TEST_CASE("exit codes") {
        CHECK(exit_code_for(ErrorCode::Io) == 2);
        CHECK(exit_code_for(ErrorCode::Config) == 3);
        CHECK(exit_code_for(ErrorCode::VocabHashMismatch) == 4);
        CHECK(exit_code_for(ErrorCode::SingleClass) == 1);
    }
}

TEST_SUITE("prepare") {
    TEST_CASE("reruns give identical artifacts") {
        TempDir a, b;
        std::ostringstream sink;
        auto cfg = toy("toy_nb.ini");
        cmd_prepare(cfg, quiet(a.path(), sink));
        cmd_prepare(cfg, quiet(b.path(), sink, 4));
        auto sa = snapshot(a.path());
        CHECK(sa.size() == 6);
        CHECK(sa == snapshot(b.path()));
        CHECK(sa["manifest.txt"].find("words_to_keep 40\n") != std::string::npos);
    }

    TEST_CASE("manifest records a 5000-word cap") {
        TempDir tmp;
        auto text = util::read_file(kData / "toy_nb.ini");
        text.replace(text.find("words_to_keep = 40"), 18, "words_to_keep = 5000");
        auto cfg = parse_config(text, kData);
        std::ostringstream sink;
        cmd_prepare(cfg, quiet(tmp.path(), sink));
        CHECK(slurp(tmp.path() / "manifest.txt").find("words_to_keep 5000\n") != std::string::npos);
    }

    TEST_CASE("missing dataset names the path") {
        TempDir tmp;
        std::ostringstream sink;
        auto cfg = toy("toy_missing.ini");
        try {
            cmd_prepare(cfg, quiet(tmp.path(), sink));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Io);
            CHECK(exit_code_for(e.code()) == 2);
            CHECK(std::string(e.what()).find("missing.csv") != std::string::npos);
        }
    }
}

TEST_SUITE("train and evaluate") {
    TEST_CASE("every model kind trains, reproduces and scores the toy data") {
        for (const char* ini : {"toy_nb.ini", "toy_logreg.ini", "toy_svm.ini", "toy_hmm.ini", "toy_bayesnet.ini",
                                "toy_bayesnet_hc.ini"}) {
            CAPTURE(ini);
            TempDir a, b;
            std::ostringstream sink;
            auto cfg = toy(ini);
            cmd_train(cfg, quiet(a.path(), sink));
            cmd_train(cfg, quiet(b.path(), sink, 3));
            CHECK(slurp(a.path() / "model.txt") == slurp(b.path() / "model.txt"));
            CHECK(slurp(a.path() / "train_log.txt") == slurp(b.path() / "train_log.txt"));

            auto data = read_artifacts(a.path());
            auto on_train = evaluate_model(slurp(a.path() / "model.txt"), data, EvalSplit::Train);
            CHECK(on_train.result.metrics.accuracy == 1.0);
            auto rep = render_evaluation(evaluate_model(slurp(a.path() / "model.txt"), data));
            for (const char* kind : {",micro,", ",macro,", ",weighted,"}) CHECK(rep.csv.find(kind) != std::string::npos);
        }
    }

    TEST_CASE("hill-climb training log scores strictly increase") {
        TempDir tmp;
        std::ostringstream sink;
        cmd_train(toy("toy_bayesnet_hc.ini"), quiet(tmp.path(), sink));
        auto rows = data_lines(slurp(tmp.path() / "train_log.txt"));
        REQUIRE(rows.size() >= 3);  // header, start, at least one move
        CHECK(rows[0] == std::vector<std::string>{"step", "score", "move"});
        for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) > std::stod(rows[i - 1][1]));
    }

    TEST_CASE("a model from another feature space is refused") {
        TempDir a, b;
        std::ostringstream sink;
        cmd_train(toy("toy_nb.ini"), quiet(a.path(), sink));
        auto text = util::read_file(kData / "toy_nb.ini");
        text.replace(text.find("words_to_keep = 40"), 18, "words_to_keep = 12");
        cmd_prepare(parse_config(text, kData), quiet(b.path(), sink));
        EvaluateArgs args;
        args.model = a.path() / "model.txt";
        args.artifacts = b.path();
        CHECK(thrown_code([&] { cmd_evaluate(args, quiet(b.path(), sink)); }) == ErrorCode::VocabHashMismatch);
    }

    TEST_CASE("evaluate writes reports and prints the requested format") {
        TempDir tmp;
        std::ostringstream sink;
        cmd_train(toy("toy_logreg.ini"), quiet(tmp.path(), sink));
        EvaluateArgs args;
        args.model = tmp.path() / "model.txt";
        args.artifacts = tmp.path();
        std::ostringstream out;
        RunOptions o = quiet(tmp.path(), out);
        o.format = "csv";
        cmd_evaluate(args, o);
        CHECK(out.str() == slurp(tmp.path() / "report.csv"));
        CHECK(fs::exists(tmp.path() / "report.txt"));
        auto m = parse_metrics(slurp(tmp.path() / "metrics.txt"));
        CHECK(serialize_metrics(m) == slurp(tmp.path() / "metrics.txt"));
        args.config = toy("toy_logreg.ini");
        CHECK(thrown_code([&] { cmd_evaluate(args, o); }) == ErrorCode::Config);
    }
}

TEST_SUITE("benchmark") {
    TEST_CASE("grid shape, failures and thread independence") {
        TempDir one, many;
        std::ostringstream sink;
        std::vector<ExperimentConfig> cfgs{toy("toy_nb.ini"), toy("toy_logreg.ini"), toy("toy_missing.ini")};
        CHECK(cmd_benchmark(cfgs, quiet(one.path(), sink, 1)) == 1);
        CHECK(cmd_benchmark(cfgs, quiet(many.path(), sink, 3)) == 1);
        CHECK(snapshot(one.path()) == snapshot(many.path()));

        auto grid = slurp(one.path() / "grid.csv");
        std::istringstream in(grid);
        std::vector<std::string> rows;
        for (std::string l; std::getline(in, l);) rows.push_back(l);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == "classifier,toy");
        CHECK(rows[1].rfind("nb,", 0) == 0);
        CHECK(rows[3] == "nb #2,ERR");
        CHECK(slurp(one.path() / "grid.txt").find("ERR (cells/3-") != std::string::npos);
        CHECK(fs::exists(one.path() / "plots" / "toy.csv"));
        CHECK(fs::exists(one.path() / "plots" / "summary.csv"));
    }

    TEST_CASE("report regeneration is byte-identical") {
        TempDir tmp, regen;
        std::ostringstream sink;
        std::vector<ExperimentConfig> cfgs{toy("toy_nb.ini"), toy("toy_svm.ini")};
        CHECK(cmd_benchmark(cfgs, quiet(tmp.path(), sink)) == 0);
        auto before = snapshot(tmp.path());
        cmd_report(tmp.path(), quiet({}, sink));
        CHECK(snapshot(tmp.path()) == before);
        std::ostringstream out;
        RunOptions o = quiet(regen.path(), out);
        cmd_report(tmp.path(), o);
        for (const char* f : {"grid.txt", "grid.csv", "report.txt", "report.csv", "plots/summary.csv"})
            CHECK(slurp(regen.path() / f) == before[f]);
    }
}
