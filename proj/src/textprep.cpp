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

#include "sentipgm/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <thread>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::textprep {

Weighting parse_weighting(std::string_view name) {
    if (name == "tfidf_weka") return Weighting::TfidfWeka;
    if (name == "tfidf_smooth_l2") return Weighting::TfidfSmoothL2;
    if (name == "binary_presence") return Weighting::BinaryPresence;
    fail(ErrorCode::Config, "unknown weighting '" + std::string(name) + "'");
}

const char* to_string(Weighting w) noexcept {
    switch (w) {
    case Weighting::TfidfWeka: return "tfidf_weka";
    case Weighting::TfidfSmoothL2: return "tfidf_smooth_l2";
    case Weighting::BinaryPresence: return "binary_presence";
    }
    return "?";
}

namespace {

// Decodes one UTF-8 code point at s[i]; returns -1 for an invalid sequence
// and always advances i by at least one byte.
long decode_utf8(std::string_view s, std::size_t& i) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
        ++i;
        return -1;
    }
    long cp = b0 & (0x7F >> len);
    for (int k = 1; k < len; ++k) {
        auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return -1;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr long min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return -1;
    }
    i += len;
    return cp;
}

void encode_utf8(long cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_unicode_space(long cp) {
    return cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
           cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

// Non-ASCII code points outside the punctuation, symbol, digit and emoji
// blocks are treated as letters.
bool is_unicode_letter(long cp) {
    struct Range {
        long lo, hi;
    };
    static constexpr Range excluded[] = {
        {0x80, 0xBF},     {0xD7, 0xD7},     {0xF7, 0xF7},     {0x2B9, 0x2FF},   {0x660, 0x669},
        {0x6F0, 0x6F9},   {0x966, 0x96F},   {0x2000, 0x2BFF}, {0x2E00, 0x2E7F}, {0x3000, 0x303F},
        {0xE000, 0xF8FF}, {0xFE00, 0xFE0F}, {0xFE30, 0xFE6F}, {0xFF00, 0xFF20}, {0xFF3B, 0xFF40},
        {0xFF5B, 0xFF65}, {0xFFF0, 0xFFFF}, {0x1F000, 0x1FAFF},
    };
    for (auto r : excluded)
        if (cp >= r.lo && cp <= r.hi) return false;
    return true;
}

long to_lower(long cp) {
    if (cp < 0x80) return std::tolower(static_cast<int>(cp));
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return (cp % 2 == 0) ? cp + 1 : cp;
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

bool is_url_token(std::string_view token) {
    if (token.find("://") != std::string_view::npos) return true;
    if (token.size() < 4) return false;
    std::string head(token.substr(0, 4));
    for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return head == "www.";
}

std::size_t codepoint_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
}

}  // namespace

std::string normalize_text(std::string_view raw, bool lowercase) {
    // URL replacement works on whitespace-delimited tokens.
    std::string with_urls;
    with_urls.reserve(raw.size());
    for (const auto& token : util::split_whitespace(raw)) {
        if (!with_urls.empty()) with_urls.push_back(' ');
        with_urls += is_url_token(token) ? std::string("URL") : token;
    }

    std::string out;
    out.reserve(with_urls.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < with_urls.size()) {
        long cp = decode_utf8(with_urls, i);
        if (cp < 0) continue;
        bool space = cp < 0x80 ? std::isspace(static_cast<int>(cp)) != 0 : is_unicode_space(cp);
        if (space) {
            pending_space = true;
            continue;
        }
        bool keep = cp < 0x80 ? std::isalpha(static_cast<int>(cp)) != 0 : is_unicode_letter(cp);
        if (!keep) continue;
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        encode_utf8(lowercase ? to_lower(cp) : cp, out);
    }
    return out;
}

Tokens tokenize(std::string_view normalized, const PipelineConfig& cfg) {
    Tokens out;
    for (auto& tok : util::split_whitespace(normalized)) {
        if (codepoint_length(tok) < cfg.min_token_length) continue;
        if (cfg.stopwords && cfg.stopwords->count(tok)) continue;
        out.push_back(std::move(tok));
    }
    return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t corpus_size)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), corpus_size_(corpus_size) {
    if (terms_.size() != doc_freq_.size()) fail(ErrorCode::VocabMismatch, "terms / doc_freq length mismatch");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (doc_freq_[i] < 1 || doc_freq_[i] > corpus_size_)
            fail(ErrorCode::VocabMismatch, "doc_freq of '" + terms_[i] + "' outside [1, N]");
        if (!index_.emplace(terms_[i], i).second) fail(ErrorCode::VocabMismatch, "duplicate term '" + terms_[i] + "'");
    }
}

std::optional<std::size_t> Vocabulary::column(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string Vocabulary::serialize() const {
    std::string out = "# corpus_size\t" + std::to_string(corpus_size_) + "\n";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        out += terms_[i];
        out += '\t';
        out += std::to_string(doc_freq_[i]);
        out += '\n';
    }
    return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("# corpus_size\t", 0) != 0)
        fail(ErrorCode::ModelFormat, "vocabulary header missing");
    std::size_t n = util::parse_uint(std::string_view(line).substr(14));
    std::vector<std::string> terms;
    std::vector<std::size_t> df;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.rfind('\t');
        if (tab == std::string::npos) fail(ErrorCode::ModelFormat, "vocabulary line without tab");
        terms.push_back(line.substr(0, tab));
        df.push_back(util::parse_uint(std::string_view(line).substr(tab + 1)));
    }
    return Vocabulary(std::move(terms), std::move(df), n);
}

std::uint64_t Vocabulary::hash() const { return util::fnv1a64(serialize()); }

Vocabulary build_vocabulary(const std::vector<Tokens>& docs, const PipelineConfig& cfg) {
    if (docs.empty()) fail(ErrorCode::EmptyCorpus, "cannot fit a vocabulary on zero documents");
    if (cfg.words_to_keep < 1) fail(ErrorCode::InvalidArgument, "words_to_keep must be >= 1");
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        Tokens unique = doc;
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (auto& t : unique) ++df[t];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > cfg.words_to_keep) ranked.resize(cfg.words_to_keep);
    std::vector<std::string> terms;
    std::vector<std::size_t> freqs;
    for (auto& [t, f] : ranked) {
        terms.push_back(t);
        freqs.push_back(f);
    }
    return Vocabulary(std::move(terms), std::move(freqs), docs.size());
}

namespace {

SparseVector weigh_row(const Tokens& doc, const Vocabulary& vocab, Weighting weighting) {
    std::vector<std::size_t> cols;
    cols.reserve(doc.size());
    for (const auto& t : doc) {
        if (auto c = vocab.column(t)) cols.push_back(*c);
    }
    std::sort(cols.begin(), cols.end());
    SparseVector row;
    const auto n = static_cast<double>(vocab.corpus_size());
    for (std::size_t i = 0; i < cols.size();) {
        std::size_t j = i;
        while (j < cols.size() && cols[j] == cols[i]) ++j;
        const auto tf = static_cast<double>(j - i);
        const auto df = static_cast<double>(vocab.doc_freq(cols[i]));
        double w = 0.0;
        switch (weighting) {
        case Weighting::TfidfWeka: w = tf * std::log(n / df); break;
        case Weighting::TfidfSmoothL2: w = tf * (std::log((1.0 + n) / (1.0 + df)) + 1.0); break;
        case Weighting::BinaryPresence: w = 1.0; break;
        }
        if (w != 0.0) row.push_back({cols[i], w});
        i = j;
    }
    if (weighting == Weighting::TfidfSmoothL2 && !row.empty()) {
        double norm = 0.0;
        for (const auto& e : row) norm += e.weight * e.weight;
        norm = std::sqrt(norm);
        for (auto& e : row) e.weight /= norm;
    }
    return row;
}

}  // namespace

FeatureMatrix tfidf_transform(const std::vector<Tokens>& docs, const Vocabulary& vocab, Weighting weighting,
                              std::size_t threads) {
    if (vocab.corpus_size() < 1) fail(ErrorCode::VocabMismatch, "vocabulary was fitted on no documents");
    FeatureMatrix m;
    m.n_columns = vocab.size();
    m.rows.resize(docs.size());
    threads = std::max<std::size_t>(1, std::min(threads, docs.size()));
    if (threads == 1) {
        for (std::size_t i = 0; i < docs.size(); ++i) m.rows[i] = weigh_row(docs[i], vocab, weighting);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (docs.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                std::size_t lo = t * chunk, hi = std::min(docs.size(), lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) m.rows[i] = weigh_row(docs[i], vocab, weighting);
            });
        }
        for (auto& th : pool) th.join();
    }
    return m;
}

std::vector<Tokens> tokenize_dataset(const corpus::Dataset& data, const PipelineConfig& cfg) {
    std::vector<Tokens> out;
    out.reserve(data.size());
    for (const auto& d : data.documents()) out.push_back(tokenize(normalize_text(d.text, cfg.lowercase), cfg));
    return out;
}

std::pair<FeatureMatrix, Vocabulary> vectorize_dataset(const corpus::Dataset& data, const PipelineConfig& cfg,
                                                       std::size_t threads) {
    if (data.empty()) fail(ErrorCode::EmptyCorpus, "dataset has no documents");
    auto tokens = tokenize_dataset(data, cfg);
    Vocabulary vocab = build_vocabulary(tokens, cfg);
    FeatureMatrix m = tfidf_transform(tokens, vocab, cfg.weighting, threads);
    m.labels = data.label_indices();
    m.class_labels = data.labels();
    return {std::move(m), std::move(vocab)};
}

FeatureMatrix vectorize_with(const corpus::Dataset& data, const Vocabulary& vocab, const PipelineConfig& cfg,
                             std::size_t threads) {
    FeatureMatrix m = tfidf_transform(tokenize_dataset(data, cfg), vocab, cfg.weighting, threads);
    m.labels = data.label_indices();
    m.class_labels = data.labels();
    return m;
}

std::string FeatureMatrix::serialize() const {
    std::string out = "# columns " + std::to_string(n_columns) + "\n";
    for (const auto& l : class_labels) out += "# class " + l + "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += std::to_string(labels.at(r));
        for (const auto& e : rows[r]) {
            out += ' ';
            out += std::to_string(e.column);
            out += ':';
            out += util::format_real(e.weight, 17);
        }
        out += '\n';
    }
    return out;
}

FeatureMatrix FeatureMatrix::parse(std::string_view text) {
    FeatureMatrix m;
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# columns ", 0) == 0) {
            m.n_columns = util::parse_uint(std::string_view(line).substr(10));
            saw_columns = true;
            continue;
        }
        if (line.rfind("# class ", 0) == 0) {
            m.class_labels.push_back(line.substr(8));
            continue;
        }
        if (!saw_columns) fail(ErrorCode::ModelFormat, "feature matrix header missing");
        auto fields = util::split_whitespace(line);
        std::size_t label = util::parse_uint(fields.at(0));
        if (label >= m.class_labels.size()) fail(ErrorCode::ModelFormat, "row label index out of range");
        SparseVector row;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            auto colon = fields[k].find(':');
            if (colon == std::string::npos) fail(ErrorCode::ModelFormat, "entry without ':'");
            std::size_t col = util::parse_uint(std::string_view(fields[k]).substr(0, colon));
            double w = util::parse_real(std::string_view(fields[k]).substr(colon + 1));
            if (col >= m.n_columns || (!row.empty() && col <= row.back().column))
                fail(ErrorCode::ModelFormat, "column ids must be increasing and in range");
            row.push_back({col, w});
        }
        m.rows.push_back(std::move(row));
        m.labels.push_back(label);
    }
    return m;
}

}  // namespace sentipgm::textprep
