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

#include "sentipgm/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>
#include <sstream>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::app {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

const char* to_string(ModelKind k) noexcept {
    switch (k) {
    case ModelKind::BayesNet: return "bayesnet";
    case ModelKind::Hmm: return "hmm";
    case ModelKind::NaiveBayes: return "nb";
    case ModelKind::LogReg: return "logreg";
    case ModelKind::Svm: return "svm";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    for (ModelKind k : {ModelKind::BayesNet, ModelKind::Hmm, ModelKind::NaiveBayes, ModelKind::LogReg, ModelKind::Svm})
        if (name == to_string(k)) return k;
    fail(ErrorCode::ModelFormat, "unknown model kind '" + std::string(name) + "'");
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"name", "seed", "upsample", "output"}},
        {"dataset", {"name", "path", "format", "text_column", "label_column", "delimiter", "id_column"}},
        {"pipeline", {"words_to_keep", "weighting", "lowercase", "min_token_length", "stopwords"}},
        {"split", {"train_fraction"}},
        {"bayesnet",
         {"search", "metric", "alpha", "max_parents", "structure_prior", "max_parent_configs", "smoothing",
          "max_steps", "restarts", "look_ahead", "good_ops", "tabu_length"}},
        {"hmm", {"n_states", "vocab_size", "iterations", "tolerance", "emission_smoothing"}},
        {"nb", {"smoothing"}},
        {"logreg", {"learning_rate", "decay", "l2_lambda", "epochs"}},
        {"svm", {"learning_rate", "decay", "l2_lambda", "epochs"}},
    };
    return keys;
}

class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) const {
        if (!tree_) return std::nullopt;
        auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return std::string(util::trim(*v));
    }
    std::string str(const std::string& key, std::string fallback) const { return raw(key).value_or(std::move(fallback)); }

    template <class T>
    T number(const std::string& key, T fallback) const {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            if constexpr (std::is_floating_point_v<T>) return static_cast<T>(util::parse_real(*v));
            else return static_cast<T>(util::parse_uint(*v));
        } catch (const Error&) {
            fail(ErrorCode::Config, "[" + name_ + "] " + key + ": '" + *v + "' is not a valid number");
        }
    }

    bool boolean(const std::string& key, bool fallback) const {
        auto v = raw(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "1") return true;
        if (*v == "false" || *v == "no" || *v == "0") return false;
        fail(ErrorCode::Config, "[" + name_ + "] " + key + ": expected true or false");
    }

private:
    std::string name_;
    const pt::ptree* tree_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

template <class F>
decltype(auto) as_config_error(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        fail(ErrorCode::Config, where + ": " + e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorCode::Config, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    const auto& keys = allowed_keys();
    for (const auto& [section, body] : tree) {
        auto it = keys.find(section);
        if (it == keys.end()) fail(ErrorCode::Config, "unknown section [" + section + "]");
        if (body.empty() && !body.data().empty()) fail(ErrorCode::Config, "key '" + section + "' outside a section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) fail(ErrorCode::Config, "unknown key '" + key + "' in [" + section + "]");
    }
    auto section = [&](const std::string& name) {
        auto child = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
        return Section(name, child ? &*child : nullptr);
    };

    ExperimentConfig cfg;
    const Section exp = section("experiment");
    cfg.seed = exp.number<std::uint64_t>("seed", 0);
    cfg.upsample = exp.boolean("upsample", false);
    if (auto out = exp.raw("output")) cfg.output_dir = resolve(base_dir, *out);

    const Section ds = section("dataset");
    auto path = ds.raw("path");
    if (!path || path->empty()) fail(ErrorCode::Config, "[dataset] path is required");
    cfg.dataset.path = resolve(base_dir, *path);
    cfg.dataset.name = ds.str("name", cfg.dataset.path.stem().string());
    cfg.dataset.format = ds.str("format", cfg.dataset.path.extension() == ".arff" ? "arff" : "csv");
    if (cfg.dataset.format != "csv" && cfg.dataset.format != "arff")
        fail(ErrorCode::Config, "[dataset] format must be csv or arff");
    cfg.dataset.text_column = ds.str("text_column", "text");
    cfg.dataset.label_column = ds.str("label_column", "label");
    const std::string delim = ds.str("delimiter", ",");
    if (delim == "tab" || delim == "\\t") cfg.dataset.delimiter = '\t';
    else if (delim.size() == 1) cfg.dataset.delimiter = delim[0];
    else fail(ErrorCode::Config, "[dataset] delimiter must be one character or 'tab'");
    cfg.dataset.id_column = ds.str("id_column", "");

    const Section pl = section("pipeline");
    cfg.pipeline.words_to_keep = pl.number<std::size_t>("words_to_keep", 1000);
    cfg.pipeline.weighting =
        as_config_error("[pipeline] weighting", [&] { return textprep::parse_weighting(pl.str("weighting", "tfidf_smooth_l2")); });
    cfg.pipeline.lowercase = pl.boolean("lowercase", true);
    cfg.pipeline.min_token_length = pl.number<std::size_t>("min_token_length", 1);
    if (auto sw = pl.raw("stopwords")) {
        cfg.stopwords_path = resolve(base_dir, *sw);
        std::set<std::string> words;
        for (auto& w : util::split_whitespace(util::read_file(cfg.stopwords_path))) words.insert(w);
        cfg.pipeline.stopwords = std::move(words);
    }
    if (cfg.pipeline.words_to_keep == 0) fail(ErrorCode::Config, "[pipeline] words_to_keep must be positive");

    cfg.split.train_fraction = section("split").number<double>("train_fraction", 0.8);
    if (!(cfg.split.train_fraction > 0.0 && cfg.split.train_fraction < 1.0))
        fail(ErrorCode::Config, "[split] train_fraction must lie strictly between 0 and 1");
    cfg.split.seed = cfg.seed;

    // The INI reader drops sections without keys, so presence comes from the
    // header lines themselves.
    std::set<std::string> headers;
    for (const auto& line : split_lines(text)) {
        const auto t = util::trim(line);
        if (t.size() > 2 && t.front() == '[' && t.back() == ']') headers.emplace(util::trim(t.substr(1, t.size() - 2)));
    }
    for (const auto& h : headers)
        if (!keys.count(h)) fail(ErrorCode::Config, "unknown section [" + h + "]");
    std::vector<std::string> models;
    for (const char* m : {"bayesnet", "hmm", "nb", "logreg", "svm"})
        if (headers.count(m)) models.push_back(m);
    if (models.size() != 1) fail(ErrorCode::Config, "exactly one model section is required, found " + std::to_string(models.size()));
    cfg.model = parse_model_kind(models[0]);
    const Section m = section(models[0]);
    switch (cfg.model) {
    case ModelKind::BayesNet: {
        auto& b = cfg.bayesnet;
        b.search = as_config_error("[bayesnet] search", [&] { return bayesnet::parse_search(m.str("search", "tan")); });
        b.score.metric = as_config_error("[bayesnet] metric", [&] { return bayesnet::parse_metric(m.str("metric", "k2")); });
        b.score.alpha = m.number<double>("alpha", b.score.alpha);
        b.score.max_parents = m.number<std::size_t>("max_parents", b.score.max_parents);
        b.score.structure_prior = m.number<double>("structure_prior", b.score.structure_prior);
        b.score.max_parent_configs = m.number<std::size_t>("max_parent_configs", b.score.max_parent_configs);
        b.smoothing = m.number<double>("smoothing", b.smoothing);
        b.max_steps = m.number<std::size_t>("max_steps", b.max_steps);
        b.restarts = m.number<std::size_t>("restarts", b.restarts);
        b.look_ahead = m.number<std::size_t>("look_ahead", b.look_ahead);
        b.good_ops = m.number<std::size_t>("good_ops", b.good_ops);
        b.tabu_length = m.number<std::size_t>("tabu_length", b.tabu_length);
        if (b.search == bayesnet::SearchAlgorithm::Tabu && !m.raw("max_steps")) b.max_steps = 100;
        break;
    }
    case ModelKind::Hmm:
        cfg.hmm.n_states = m.number<std::size_t>("n_states", cfg.hmm.n_states);
        cfg.hmm.vocab_size = m.number<std::size_t>("vocab_size", cfg.hmm.vocab_size);
        cfg.hmm.max_iters = m.number<std::size_t>("iterations", cfg.hmm.max_iters);
        cfg.hmm.tol = m.number<double>("tolerance", cfg.hmm.tol);
        cfg.hmm.emission_smoothing = m.number<double>("emission_smoothing", cfg.hmm.emission_smoothing);
        if (cfg.hmm.n_states == 0) fail(ErrorCode::Config, "[hmm] n_states must be positive");
        break;
    case ModelKind::NaiveBayes: cfg.train.smoothing = m.number<double>("smoothing", cfg.train.smoothing); break;
    case ModelKind::LogReg:
    case ModelKind::Svm:
        cfg.train.learning_rate = m.number<double>("learning_rate", cfg.train.learning_rate);
        cfg.train.decay = m.number<double>("decay", cfg.train.decay);
        cfg.train.l2_lambda = m.number<double>("l2_lambda", cfg.train.l2_lambda);
        cfg.train.epochs = m.number<std::size_t>("epochs", cfg.train.epochs);
        break;
    }
    as_config_error("[" + models[0] + "]", [&] { cfg.train.validate(); });
    cfg.name = exp.str("name", cfg.classifier_label() + "-" + cfg.dataset.name);
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    const std::string text = util::read_file(path);
    return parse_config(text, path.parent_path());
}

std::string ExperimentConfig::classifier_label() const {
    switch (model) {
    case ModelKind::BayesNet: {
        std::string s = std::string("bayesnet-") + bayesnet::to_string(bayesnet.search);
        if (bayesnet.search != bayesnet::SearchAlgorithm::NaiveBayes && bayesnet.search != bayesnet::SearchAlgorithm::Tan)
            s += std::string("-") + bayesnet::to_string(bayesnet.score.metric);
        return s;
    }
    case ModelKind::Hmm: return "hmm-" + std::to_string(hmm.n_states);
    default: return to_string(model);
    }
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream o;
    auto real = [](double v) { return util::format_real(v, 17); };
    o << "seed=" << seed << "\nupsample=" << upsample << "\n";
    o << "dataset.name=" << dataset.name << "\ndataset.file=" << dataset.path.filename().string()
      << "\ndataset.format=" << dataset.format << "\ndataset.text_column=" << dataset.text_column
      << "\ndataset.label_column=" << dataset.label_column << "\ndataset.delimiter=" << int(dataset.delimiter)
      << "\ndataset.id_column=" << dataset.id_column << "\n";
    o << "pipeline.words_to_keep=" << pipeline.words_to_keep << "\npipeline.weighting=" << textprep::to_string(pipeline.weighting)
      << "\npipeline.lowercase=" << pipeline.lowercase << "\npipeline.min_token_length=" << pipeline.min_token_length << "\n";
    if (pipeline.stopwords) {
        o << "pipeline.stopwords=";
        for (const auto& w : *pipeline.stopwords) o << w << ' ';
        o << "\n";
    }
    o << "split.train_fraction=" << real(split.train_fraction) << "\nmodel=" << to_string(model) << "\n";
    switch (model) {
    case ModelKind::BayesNet:
        o << "search=" << bayesnet::to_string(bayesnet.search) << "\nmetric=" << bayesnet::to_string(bayesnet.score.metric)
          << "\nalpha=" << real(bayesnet.score.alpha) << "\nmax_parents=" << bayesnet.score.max_parents
          << "\nstructure_prior=" << real(bayesnet.score.structure_prior)
          << "\nmax_parent_configs=" << bayesnet.score.max_parent_configs << "\nsmoothing=" << real(bayesnet.smoothing)
          << "\nmax_steps=" << bayesnet.max_steps << "\nrestarts=" << bayesnet.restarts
          << "\nlook_ahead=" << bayesnet.look_ahead << "\ngood_ops=" << bayesnet.good_ops
          << "\ntabu_length=" << bayesnet.tabu_length << "\n";
        break;
    case ModelKind::Hmm:
        o << "n_states=" << hmm.n_states << "\nvocab_size=" << hmm.vocab_size << "\niterations=" << hmm.max_iters
          << "\ntolerance=" << real(hmm.tol) << "\nemission_smoothing=" << real(hmm.emission_smoothing) << "\n";
        break;
    case ModelKind::NaiveBayes: o << "smoothing=" << real(train.smoothing) << "\n"; break;
    case ModelKind::LogReg:
    case ModelKind::Svm:
        o << "learning_rate=" << real(train.learning_rate) << "\ndecay=" << real(train.decay)
          << "\nl2_lambda=" << real(train.l2_lambda) << "\nepochs=" << train.epochs << "\n";
        break;
    }
    return o.str();
}

std::uint64_t ExperimentConfig::hash() const { return util::fnv1a64(canonical()); }

}  // namespace sentipgm::app
