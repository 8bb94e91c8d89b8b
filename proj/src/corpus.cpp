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

#include "sentipgm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::corpus {

Dataset::Dataset(std::vector<Document> documents, std::vector<std::string> labels)
    : documents_(std::move(documents)), labels_(std::move(labels)) {
    std::unordered_set<std::string> label_set;
    for (const auto& l : labels_) {
        if (!label_set.insert(l).second) fail(ErrorCode::InvalidArgument, "duplicate label '" + l + "'");
    }
    std::unordered_set<std::string> ids;
    for (const auto& d : documents_) {
        if (!ids.insert(d.id).second) fail(ErrorCode::InvalidArgument, "duplicate document id '" + d.id + "'");
        if (!label_set.count(d.label))
            fail(ErrorCode::UnknownLabel, "document '" + d.id + "' has label '" + d.label + "' outside the label set");
    }
}

Dataset Dataset::from_documents(std::vector<Document> documents) {
    std::vector<std::string> labels;
    std::unordered_set<std::string> seen;
    for (const auto& d : documents) {
        if (seen.insert(d.label).second) labels.push_back(d.label);
    }
    return Dataset(std::move(documents), std::move(labels));
}

std::size_t Dataset::label_index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) fail(ErrorCode::UnknownLabel, "label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> Dataset::label_indices() const {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels_.size(); ++i) index.emplace(labels_[i], i);
    std::vector<std::size_t> out;
    out.reserve(documents_.size());
    for (const auto& d : documents_) out.push_back(index.at(d.label));
    return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(labels_.size(), 0);
    for (std::size_t idx : label_indices()) ++counts[idx];
    return counts;
}

namespace {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// RFC-4180: quoted fields may contain delimiters, doubled quotes and newlines.
std::vector<CsvRecord> parse_csv(std::string_view text, char delim) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    current.line = 1;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_content = false;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        if (record_has_content) {
            end_field();
            records.push_back(std::move(current));
        }
        current = CsvRecord{};
        field.clear();
        field_was_quoted = false;
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (!record_has_content && c != '\n' && c != '\r') {
            record_has_content = true;
            current.line = line;
        }
        if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\r') {
            // CRLF; a lone CR is dropped
        } else if (c == '\n') {
            end_record();
            ++line;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) fail(ErrorCode::MalformedRow, "unterminated quoted field starting near line " + std::to_string(current.line));
    end_record();
    return records;
}

std::size_t column_position(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorCode::MissingColumn, "column '" + name + "' not in header");
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& text_column,
                 const std::string& label_column, const CsvOptions& options) {
    auto records = parse_csv(util::read_file(path), options.delimiter);
    if (records.empty()) fail(ErrorCode::MissingColumn, path.string() + " has no header row");
    const auto& header = records.front().fields;
    std::size_t text_pos = column_position(header, text_column);
    std::size_t label_pos = column_position(header, label_column);
    std::size_t id_pos = options.id_column.empty() ? header.size() : column_position(header, options.id_column);

    std::vector<Document> docs;
    docs.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::size_t needed = std::max({text_pos, label_pos, id_pos == header.size() ? 0 : id_pos}) + 1;
        if (rec.fields.size() < needed || rec.fields[label_pos].empty())
            fail(ErrorCode::MalformedRow, path.string() + ":" + std::to_string(rec.line) + ": expected " +
                                              std::to_string(header.size()) + " fields, got " +
                                              std::to_string(rec.fields.size()));
        Document d;
        d.id = id_pos == header.size() ? std::to_string(r) : rec.fields[id_pos];
        d.text = rec.fields[text_pos];
        d.label = rec.fields[label_pos];
        docs.push_back(std::move(d));
    }
    if (docs.empty()) fail(ErrorCode::EmptyDataset, path.string() + " has a header but no data rows");
    return Dataset::from_documents(std::move(docs));
}

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Splits an ARFF value list on commas, honouring '...' / "..." quoting and
// backslash escapes inside quotes.
std::vector<std::string> split_arff_values(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    };
    while (true) {
        skip_ws();
        std::string value;
        if (i < line.size() && (line[i] == '\'' || line[i] == '"')) {
            char quote = line[i++];
            bool closed = false;
            while (i < line.size()) {
                char c = line[i++];
                if (c == '\\' && i < line.size()) {
                    char e = line[i++];
                    switch (e) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case 'r': value.push_back('\r'); break;
                    default: value.push_back(e); break;
                    }
                } else if (c == quote) {
                    closed = true;
                    break;
                } else {
                    value.push_back(c);
                }
            }
            if (!closed) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
            skip_ws();
            if (i < line.size() && line[i] != ',')
                fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": text after closing quote");
        } else {
            std::size_t start = i;
            while (i < line.size() && line[i] != ',') ++i;
            value = std::string(util::trim(line.substr(start, i - start)));
        }
        out.push_back(std::move(value));
        if (i >= line.size()) break;
        ++i;  // comma
    }
    return out;
}

// "@attribute <name> <type>" -> (name, type-text); name may be quoted.
std::pair<std::string, std::string> split_attribute_decl(std::string_view rest, std::size_t line_no) {
    rest = util::trim(rest);
    std::string name;
    std::size_t i = 0;
    if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
        char q = rest[0];
        std::size_t close = rest.find(q, 1);
        if (close == std::string_view::npos)
            fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated attribute name");
        name = std::string(rest.substr(1, close - 1));
        i = close + 1;
    } else {
        while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        name = std::string(rest.substr(0, i));
    }
    return {name, std::string(util::trim(rest.substr(i)))};
}

}  // namespace

Dataset load_arff(const std::filesystem::path& path) {
    std::string text = util::read_file(path);
    enum class Kind { String, Nominal };
    struct Attribute {
        std::string name;
        Kind kind;
        std::vector<std::string> values;
    };
    std::vector<Attribute> attributes;
    bool saw_relation = false;
    bool in_data = false;
    std::vector<Document> docs;
    std::size_t text_attr = 0, class_attr = 0;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view raw(text.data() + pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        std::string_view line = util::trim(raw);
        if (line.empty() || line.front() == '%') continue;

        if (!in_data) {
            if (line.front() != '@') fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected a header declaration");
            std::size_t ws = 0;
            while (ws < line.size() && !std::isspace(static_cast<unsigned char>(line[ws]))) ++ws;
            std::string keyword = lower_ascii(line.substr(0, ws));
            std::string_view rest = line.substr(ws);
            if (keyword == "@relation") {
                saw_relation = true;
            } else if (keyword == "@attribute") {
                auto [name, type] = split_attribute_decl(rest, line_no);
                if (type.empty()) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": attribute without type");
                if (type.front() == '{') {
                    if (type.back() != '}') fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated nominal list");
                    auto values = split_arff_values(std::string_view(type).substr(1, type.size() - 2), line_no);
                    attributes.push_back({name, Kind::Nominal, std::move(values)});
                } else if (lower_ascii(type) == "string") {
                    attributes.push_back({name, Kind::String, {}});
                } else {
                    fail(ErrorCode::UnsupportedArff, "attribute '" + name + "' has unsupported type '" + type + "'");
                }
            } else if (keyword == "@data") {
                if (!saw_relation) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": @data before @relation");
                std::size_t n_string = 0, n_nominal = 0;
                for (std::size_t a = 0; a < attributes.size(); ++a) {
                    if (attributes[a].kind == Kind::String) {
                        ++n_string;
                        text_attr = a;
                    } else {
                        ++n_nominal;
                        class_attr = a;
                    }
                }
                if (n_nominal == 0) fail(ErrorCode::UnsupportedArff, "no nominal class attribute");
                if (n_string != 1 || n_nominal != 1)
                    fail(ErrorCode::UnsupportedArff, "expected exactly one string and one nominal attribute");
                in_data = true;
            } else {
                fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown declaration " + keyword);
            }
            continue;
        }

        if (line.front() == '{') fail(ErrorCode::UnsupportedArff, "sparse data rows are not supported");
        auto values = split_arff_values(line, line_no);
        if (values.size() != attributes.size())
            fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                            std::to_string(attributes.size()) + " values, got " +
                                            std::to_string(values.size()));
        const auto& cls = attributes[class_attr].values;
        if (std::find(cls.begin(), cls.end(), values[class_attr]) == cls.end())
            fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": class value '" + values[class_attr] +
                                            "' not declared");
        docs.push_back({std::to_string(docs.size() + 1), values[text_attr], values[class_attr]});
    }
    if (!in_data) {
        for (const auto& a : attributes)
            if (a.kind == Kind::Nominal) fail(ErrorCode::ParseError, "missing @data section");
        fail(ErrorCode::UnsupportedArff, "no nominal class attribute");
    }
    if (docs.empty()) fail(ErrorCode::EmptyDataset, path.string() + " has no data rows");
    return Dataset(std::move(docs), attributes[class_attr].values);
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        fail(ErrorCode::InvalidArgument, "train_fraction must lie in (0,1)");
    const auto& labels = data.labels();
    auto label_idx = data.label_indices();
    std::vector<std::vector<std::size_t>> members(labels.size());
    for (std::size_t i = 0; i < label_idx.size(); ++i) members[label_idx[i]].push_back(i);
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (!members[c].empty() && members[c].size() < 2)
            fail(ErrorCode::ClassTooSmall, "class '" + labels[c] + "' has fewer than 2 documents");
    }

    std::vector<std::size_t> quota(labels.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        quota[c] = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(members[c].size())));
        assigned += quota[c];
    }
    auto target = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(data.size())));

    // Remainder documents go to classes in name order; only classes with a
    // fractional share are eligible so per-class deviation stays below one.
    std::vector<std::size_t> by_name(labels.size());
    std::iota(by_name.begin(), by_name.end(), 0);
    std::sort(by_name.begin(), by_name.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
    for (std::size_t c : by_name) {
        if (assigned >= target) break;
        double exact = spec.train_fraction * static_cast<double>(members[c].size());
        if (exact > static_cast<double>(quota[c])) {
            ++quota[c];
            ++assigned;
        }
    }

    std::vector<char> in_train(data.size(), 0);
    for (std::size_t c = 0; c < labels.size(); ++c) {
        std::mt19937_64 rng(util::derive_seed(spec.seed, c));
        auto shuffled = members[c];
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (std::size_t k = 0; k < quota[c]; ++k) in_train[shuffled[k]] = 1;
    }
    std::vector<Document> train, held;
    for (std::size_t i = 0; i < data.size(); ++i) {
        (in_train[i] ? train : held).push_back(data.documents()[i]);
    }
    return {Dataset(std::move(train), labels), Dataset(std::move(held), labels)};
}

Dataset upsample_minority(const Dataset& data, std::uint64_t seed) {
    auto counts = data.class_counts();
    std::size_t present = 0;
    for (auto c : counts) present += c > 0 ? 1 : 0;
    if (present < 2) fail(ErrorCode::SingleClass, "upsampling needs at least two populated classes");
    std::size_t majority = *std::max_element(counts.begin(), counts.end());

    auto label_idx = data.label_indices();
    std::vector<std::vector<std::size_t>> members(counts.size());
    for (std::size_t i = 0; i < label_idx.size(); ++i) members[label_idx[i]].push_back(i);

    std::vector<Document> out = data.documents();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0 || counts[c] == majority) continue;
        std::mt19937_64 rng(util::derive_seed(seed, c));
        std::uniform_int_distribution<std::size_t> pick(0, members[c].size() - 1);
        for (std::size_t k = 0; k < majority - counts[c]; ++k) {
            Document d = data.documents()[members[c][pick(rng)]];
            d.id += "#dup" + std::to_string(k + 1);
            out.push_back(std::move(d));
        }
    }
    return Dataset(std::move(out), data.labels());
}

}  // namespace sentipgm::corpus
