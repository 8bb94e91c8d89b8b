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

#include <cstdlib>
#include <sys/wait.h>

#include "test_support.hpp"

namespace fs = std::filesystem;
using testsupport::slurp;
using testsupport::snapshot;
using testsupport::TempDir;

namespace {

const fs::path kData = SENTIPGM_TEST_DATA;

struct Run {
    int code;
    std::string out;
    std::string err;
};

// Runs the CLI with `args` (already shell-quoted where needed).
Run cli(const TempDir& tmp, const std::string& args, const std::string& env = "") {
    static int n = 0;
    const auto out = tmp.path() / ("stdout" + std::to_string(n));
    const auto err = tmp.path() / ("stderr" + std::to_string(n++));
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" SENTIPGM_CLI "' " + args + " >'" + out.string() +
                            "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::string cfg(const char* name) { return "'" + (kData / name).string() + "'"; }

std::string dir(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("missing dataset exits 2 and names the path") {
    TempDir tmp;
    auto r = cli(tmp, "--config " + cfg("toy_missing.ini") + " --out " + dir(tmp.path() / "o") + " prepare");
    CHECK(r.code == 2);
    CHECK(r.err.find("missing.csv") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("config errors exit 3") {
    TempDir tmp;
    auto bad = tmp.write("bad.ini", slurp(kData / "toy_nb.ini") + "unknown_key = 1\n");
    auto r = cli(tmp, "--config " + dir(bad) + " prepare");
    CHECK(r.code == 3);
    CHECK(r.err.rfind("sentipgm: ", 0) == 0);
    CHECK(cli(tmp, "--config " + dir(tmp.path() / "absent.ini") + " train").code == 2);
}

TEST_CASE("usage errors are rejected") {
    TempDir tmp;
    CHECK(cli(tmp, "").code != 0);
    CHECK(cli(tmp, "--threads 0 --config " + cfg("toy_nb.ini") + " train").code != 0);
    CHECK(cli(tmp, "--format xml --config " + cfg("toy_nb.ini") + " train").code != 0);
}

TEST_CASE("train is byte-identical across runs and thread counts") {
    TempDir tmp;
    for (const char* c : {"toy_bayesnet_hc.ini", "toy_hmm.ini", "toy_svm.ini"}) {
        CAPTURE(c);
        auto a = tmp.path() / (std::string(c) + "-a"), b = tmp.path() / (std::string(c) + "-b");
        REQUIRE(cli(tmp, "--config " + cfg(c) + " --out " + dir(a) + " train").code == 0);
        REQUIRE(cli(tmp, "--config " + cfg(c) + " --out " + dir(b) + " train", "SENTIPGM_THREADS=4").code == 0);
        CHECK(snapshot(a) == snapshot(b));
    }
}

TEST_CASE("seed override reaches the manifest") {
    TempDir tmp;
    REQUIRE(cli(tmp, "--config " + cfg("toy_nb.ini") + " --seed 99 --out " + dir(tmp.path() / "s") + " prepare").code == 0);
    CHECK(slurp(tmp.path() / "s" / "manifest.txt").find("seed 99\n") != std::string::npos);
}

TEST_CASE("evaluate prints csv and reports on the training split") {
    TempDir tmp;
    const auto m = tmp.path() / "m";
    REQUIRE(cli(tmp, "--config " + cfg("toy_nb.ini") + " --out " + dir(m) + " train").code == 0);
    auto r = cli(tmp, "--format csv evaluate --model " + dir(m / "model.txt") + " --artifacts " + dir(m) +
                          " --split train");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("classifier,dataset,avg_kind,precision,recall,f1,accuracy\n", 0) == 0);
    CHECK(r.out.find("nb,toy,micro,1.0000,1.0000,1.0000,1.0000") != std::string::npos);
}

TEST_CASE("vocabulary mismatch exits 4") {
    TempDir tmp;
    auto other = tmp.write("other.ini", [] {
        auto t = slurp(kData / "toy_nb.ini");
        t.replace(t.find("words_to_keep = 40"), 18, "words_to_keep = 10");
        return t;
    }());
    fs::copy_file(kData / "toy_reviews.csv", tmp.path() / "toy_reviews.csv");
    REQUIRE(cli(tmp, "--config " + cfg("toy_nb.ini") + " --out " + dir(tmp.path() / "a") + " train").code == 0);
    REQUIRE(cli(tmp, "--config " + dir(other) + " --out " + dir(tmp.path() / "b") + " prepare").code == 0);
    auto r = cli(tmp, "evaluate --model " + dir(tmp.path() / "a" / "model.txt") + " --artifacts " +
                          dir(tmp.path() / "b"));
    CHECK(r.code == 4);
    CHECK(r.err.find("vocabulary") != std::string::npos);
}

TEST_CASE("benchmark records failures, exits 1, and report regenerates") {
    TempDir tmp;
    const auto b1 = tmp.path() / "b1", b2 = tmp.path() / "b2";
    const std::string cells = cfg("toy_nb.ini") + " " + cfg("toy_bayesnet.ini") + " " + cfg("toy_missing.ini");
    auto r = cli(tmp, "--out " + dir(b1) + " benchmark " + cells);
    CHECK(r.code == 1);
    CHECK(r.err.find("1 of 3 benchmark cells failed") != std::string::npos);
    CHECK(cli(tmp, "--threads 3 --out " + dir(b2) + " benchmark " + cells).code == 1);
    CHECK(snapshot(b1) == snapshot(b2));
    auto grid = slurp(b1 / "grid.txt");
    CHECK(grid.find("ERR (cells/3-") != std::string::npos);

    const auto before = snapshot(b1);
    auto rep = cli(tmp, "--format csv report --input " + dir(b1));
    CHECK(rep.code == 0);
    CHECK(snapshot(b1) == before);
    CHECK(rep.out == before.at("grid.csv"));
}
