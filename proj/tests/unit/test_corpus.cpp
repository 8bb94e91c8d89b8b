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

#include <algorithm>
#include <map>
#include <set>

#include "sentipgm/corpus.hpp"
#include "test_support.hpp"

using namespace sentipgm;
using corpus::Dataset;
using corpus::Document;
using testsupport::TempDir;
using testsupport::thrown_code;

namespace {

Dataset make_dataset(const std::vector<std::pair<std::string, std::size_t>>& class_sizes) {
    std::vector<Document> docs;
    std::vector<std::string> labels;
    for (const auto& [label, n] : class_sizes) {
        labels.push_back(label);
        for (std::size_t i = 0; i < n; ++i) docs.push_back({label + std::to_string(i), "text " + label, label});
    }
    return Dataset(std::move(docs), labels);
}

std::map<std::string, std::size_t> counts_by_label(const Dataset& d) {
    std::map<std::string, std::size_t> out;
    for (const auto& doc : d.documents()) ++out[doc.label];
    return out;
}

}  // namespace

TEST_SUITE("csv") {
    TEST_CASE("three rows build labels in first-appearance order") {
        TempDir tmp;
        auto p = tmp.write("d.csv", "text,label\ngood film,pos\nbad film,neg\nfine film,pos\n");
        Dataset d = corpus::load_csv(p, "text", "label");
        REQUIRE(d.size() == 3);
        CHECK(d.labels() == std::vector<std::string>{"pos", "neg"});
        CHECK(d.documents()[1].text == "bad film");
        CHECK(d.class_counts() == std::vector<std::size_t>{2, 1});
    }

    TEST_CASE("header only is an empty dataset") {
        TempDir tmp;
        auto p = tmp.write("d.csv", "text,label\n");
        CHECK(thrown_code([&] { corpus::load_csv(p, "text", "label"); }) == ErrorCode::EmptyDataset);
    }

    TEST_CASE("missing label cell is a malformed row") {
        TempDir tmp;
        auto short_row = tmp.write("a.csv", "text,label\nok,pos\njust text\n");
        CHECK(thrown_code([&] { corpus::load_csv(short_row, "text", "label"); }) == ErrorCode::MalformedRow);
        auto empty_cell = tmp.write("b.csv", "text,label\nok,pos\nno label,\n");
        CHECK(thrown_code([&] { corpus::load_csv(empty_cell, "text", "label"); }) == ErrorCode::MalformedRow);
    }

    TEST_CASE("unknown column names are reported") {
        TempDir tmp;
        auto p = tmp.write("d.csv", "review,sentiment\na,pos\n");
        CHECK(thrown_code([&] { corpus::load_csv(p, "text", "sentiment"); }) == ErrorCode::MissingColumn);
    }

    TEST_CASE("quoting follows RFC 4180") {
        TempDir tmp;
        auto p = tmp.write("d.csv",
                           "\xEF\xBB\xBFid,text,label\r\n"
                           "a1,\"hello, world\",pos\r\n"
                           "a2,\"she said \"\"meh\"\"\nthen left\",neg\r\n"
                           "\r\n");
        corpus::CsvOptions opt;
        opt.id_column = "id";
        Dataset d = corpus::load_csv(p, "text", "label", opt);
        REQUIRE(d.size() == 2);
        CHECK(d.documents()[0].id == "a1");
        CHECK(d.documents()[0].text == "hello, world");
        CHECK(d.documents()[1].text == "she said \"meh\"\nthen left");
    }

    TEST_CASE("custom delimiter") {
        TempDir tmp;
        auto p = tmp.write("d.tsv", "text\tlabel\nx, y\tpos\nz\tneg\n");
        corpus::CsvOptions opt;
        opt.delimiter = '\t';
        Dataset d = corpus::load_csv(p, "text", "label", opt);
        CHECK(d.documents()[0].text == "x, y");
    }

    TEST_CASE("duplicate ids are rejected") {
        std::vector<Document> docs{{"x", "a", "p"}, {"x", "b", "p"}};
        CHECK(thrown_code([&] { Dataset(docs, {"p"}); }).has_value());
    }
}

TEST_SUITE("arff") {
    TEST_CASE("labels follow the nominal declaration order") {
        TempDir tmp;
        auto p = tmp.write("d.arff",
                           "% comment\n@relation reviews\n@attribute text string\n"
                           "@attribute class {neg,pos}\n\n@data\n'great, really great',pos\n\"awful\",neg\n");
        Dataset d = corpus::load_arff(p);
        CHECK(d.labels() == std::vector<std::string>{"neg", "pos"});
        REQUIRE(d.size() == 2);
        CHECK(d.documents()[0].text == "great, really great");
        CHECK(d.documents()[0].label == "pos");
    }

    TEST_CASE("a relation without a class attribute is unsupported") {
        TempDir tmp;
        auto p = tmp.write("d.arff", "@relation r\n@attribute text string\n@data\n'x'\n");
        CHECK(thrown_code([&] { corpus::load_arff(p); }) == ErrorCode::UnsupportedArff);
    }

    TEST_CASE("numeric and sparse shapes are unsupported") {
        TempDir tmp;
        auto numeric = tmp.write("n.arff", "@relation r\n@attribute x numeric\n@attribute c {a,b}\n@data\n1,a\n");
        CHECK(thrown_code([&] { corpus::load_arff(numeric); }) == ErrorCode::UnsupportedArff);
        auto sparse = tmp.write("s.arff", "@relation r\n@attribute t string\n@attribute c {a,b}\n@data\n{0 'x',1 a}\n");
        CHECK(thrown_code([&] { corpus::load_arff(sparse); }) == ErrorCode::UnsupportedArff);
    }

    TEST_CASE("undeclared class value is a parse error") {
        TempDir tmp;
        auto p = tmp.write("d.arff", "@relation r\n@attribute t string\n@attribute c {a,b}\n@data\n'x',z\n");
        CHECK(thrown_code([&] { corpus::load_arff(p); }) == ErrorCode::ParseError);
    }
}

TEST_SUITE("split") {
    TEST_CASE("exactly divisible classes") {
        Dataset d = make_dataset({{"neg", 50}, {"pos", 50}});
        for (std::uint64_t seed : {0u, 1u, 99u}) {
            auto [train, test] = corpus::stratified_split(d, {0.8, seed});
            CHECK(train.size() == 80);
            CHECK(counts_by_label(train) == std::map<std::string, std::size_t>{{"neg", 40}, {"pos", 40}});
            CHECK(test.size() == 20);
        }
    }

    TEST_CASE("five documents of one class split four to one") {
        Dataset d = make_dataset({{"only", 5}});
        auto [train, test] = corpus::stratified_split(d, {0.8, 3});
        CHECK(train.size() == 4);
        CHECK(test.size() == 1);
    }

    TEST_CASE("same seed reproduces the split, other seeds vary it") {
        Dataset d = make_dataset({{"a", 30}, {"b", 17}});
        auto s1 = corpus::stratified_split(d, {0.7, 5});
        auto s2 = corpus::stratified_split(d, {0.7, 5});
        std::vector<std::string> ids1, ids2;
        for (const auto& doc : s1.first.documents()) ids1.push_back(doc.id);
        for (const auto& doc : s2.first.documents()) ids2.push_back(doc.id);
        CHECK(ids1 == ids2);
        bool differs = false;
        for (std::uint64_t seed = 6; seed < 12 && !differs; ++seed) {
            auto s3 = corpus::stratified_split(d, {0.7, seed});
            std::vector<std::string> ids3;
            for (const auto& doc : s3.first.documents()) ids3.push_back(doc.id);
            differs = ids3 != ids1;
        }
        CHECK(differs);
    }

    TEST_CASE("partition and per-class deviation below one for many seeds") {
        Dataset d = make_dataset({{"x", 7}, {"y", 11}, {"z", 3}});
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            for (double f : {0.5, 0.66, 0.8, 0.9}) {
                auto [train, test] = corpus::stratified_split(d, {f, seed});
                CHECK(train.labels() == d.labels());
                CHECK(test.labels() == d.labels());
                std::multiset<std::string> all;
                for (const auto& doc : train.documents()) all.insert(doc.id);
                for (const auto& doc : test.documents()) all.insert(doc.id);
                std::multiset<std::string> expected;
                for (const auto& doc : d.documents()) expected.insert(doc.id);
                CHECK(all == expected);
                auto tc = counts_by_label(train);
                auto full = counts_by_label(d);
                for (const auto& [label, n] : full)
                    CHECK(std::abs(static_cast<double>(tc[label]) - f * static_cast<double>(n)) < 1.0);
            }
        }
    }

    TEST_CASE("a singleton class cannot be split") {
        Dataset d = make_dataset({{"a", 4}, {"b", 1}});
        CHECK(thrown_code([&] { corpus::stratified_split(d, {0.8, 0}); }) == ErrorCode::ClassTooSmall);
    }

    TEST_CASE("fraction must be strictly inside the unit interval") {
        Dataset d = make_dataset({{"a", 4}});
        CHECK(thrown_code([&] { corpus::stratified_split(d, {1.0, 0}); }) == ErrorCode::InvalidArgument);
        CHECK(thrown_code([&] { corpus::stratified_split(d, {0.0, 0}); }) == ErrorCode::InvalidArgument);
    }
}

TEST_SUITE("upsample") {
    TEST_CASE("amazon-shaped counts become balanced") {
        Dataset d = make_dataset({{"neg", 8435}, {"pos", 19897}});
        Dataset up = corpus::upsample_minority(d, 11);
        CHECK(counts_by_label(up) == std::map<std::string, std::size_t>{{"neg", 19897}, {"pos", 19897}});
    }

    TEST_CASE("balanced input is a fixpoint") {
        Dataset d = make_dataset({{"a", 4}, {"b", 4}});
        Dataset up = corpus::upsample_minority(d, 2);
        REQUIRE(up.size() == d.size());
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(up.documents()[i].id == d.documents()[i].id);
    }

    TEST_CASE("three classes reach the majority count") {
        Dataset d = make_dataset({{"a", 5}, {"b", 5}, {"c", 10}});
        Dataset up = corpus::upsample_minority(d, 0);
        CHECK(up.class_counts() == std::vector<std::size_t>{10, 10, 10});
        // Originals survive in order and every duplicate copies a same-class document.
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(up.documents()[i].id == d.documents()[i].id);
        for (std::size_t i = d.size(); i < up.size(); ++i) {
            const auto& dup = up.documents()[i];
            auto base = dup.id.substr(0, dup.id.find("#dup"));
            auto it = std::find_if(d.documents().begin(), d.documents().end(), [&](auto& x) { return x.id == base; });
            REQUIRE(it != d.documents().end());
            CHECK(it->label == dup.label);
            CHECK(it->text == dup.text);
        }
    }

    TEST_CASE("deterministic for a fixed seed") {
        Dataset d = make_dataset({{"a", 3}, {"b", 9}});
        auto u1 = corpus::upsample_minority(d, 8), u2 = corpus::upsample_minority(d, 8);
        for (std::size_t i = 0; i < u1.size(); ++i) CHECK(u1.documents()[i].id == u2.documents()[i].id);
    }

    TEST_CASE("one class cannot be upsampled") {
        Dataset d = make_dataset({{"a", 3}});
        CHECK(thrown_code([&] { corpus::upsample_minority(d, 0); }) == ErrorCode::SingleClass);
    }
}
