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

#include "sentipgm/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "sentipgm/baselines.hpp"
#include "sentipgm/bayesnet/classifier.hpp"
#include "sentipgm/bayesnet/discrete_data.hpp"
#include "sentipgm/bayesnet/search.hpp"
#include "sentipgm/corpus.hpp"
#include "sentipgm/hmm.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::app {

namespace fs = std::filesystem;
using textprep::FeatureMatrix;
using textprep::Tokens;

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Io: return 2;
    case ErrorCode::Config: return 3;
    case ErrorCode::VocabHashMismatch: return 4;
    default: return 1;
    }
}

namespace {

// Independent random streams derived from the experiment seed.
enum SeedStream : std::uint64_t { kSplitStream = 1, kUpsampleStream = 2, kModelStream = 3 };

std::ostream& out_of(const RunOptions& o) { return o.out_stream ? *o.out_stream : std::cout; }
std::ostream& err_of(const RunOptions& o) { return o.err_stream ? *o.err_stream : std::cerr; }

fs::path output_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (!opts.out.empty()) return opts.out;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    fail(ErrorCode::Config, "no output directory: pass --out or set [experiment] output");
}

corpus::Dataset load_dataset(const DatasetConfig& ds) {
    if (!fs::exists(ds.path)) fail(ErrorCode::Io, "dataset file not found: " + ds.path.string());
    if (ds.format == "arff") return corpus::load_arff(ds.path);
    corpus::CsvOptions o;
    o.delimiter = ds.delimiter;
    o.id_column = ds.id_column;
    return corpus::load_csv(ds.path, ds.text_column, ds.label_column, o);
}

std::string serialize_tokens(const std::vector<Tokens>& docs, const std::vector<std::size_t>& labels) {
    std::string out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        out += std::to_string(labels[i]) + "\t";
        for (std::size_t t = 0; t < docs[i].size(); ++t) out += (t ? " " : "") + docs[i][t];
        out += "\n";
    }
    return out;
}

std::vector<Tokens> parse_tokens(std::string_view text, const std::vector<std::size_t>& labels) {
    std::vector<Tokens> docs;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) fail(ErrorCode::ParseError, "token line without a label");
        if (docs.size() >= labels.size() || util::parse_uint(std::string_view(line).substr(0, tab)) != labels[docs.size()])
            fail(ErrorCode::ParseError, "token file disagrees with the feature matrix");
        docs.push_back(util::split_whitespace(std::string_view(line).substr(tab + 1)));
    }
    if (docs.size() != labels.size()) fail(ErrorCode::ParseError, "token file disagrees with the feature matrix");
    return docs;
}

std::string manifest_value(std::string_view manifest, std::string_view key) {
    std::istringstream in{std::string(manifest)};
    std::string line;
    while (std::getline(in, line))
        if (line.size() > key.size() && line.compare(0, key.size(), key) == 0 && line[key.size()] == ' ')
            return line.substr(key.size() + 1);
    return {};
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& cfg, std::size_t threads) {
    const corpus::Dataset all = load_dataset(cfg.dataset);
    const std::string dataset_bytes = util::read_file(cfg.dataset.path);
    auto [train, test] = corpus::stratified_split(all, {cfg.split.train_fraction, util::derive_seed(cfg.seed, kSplitStream)});
    if (cfg.upsample) train = corpus::upsample_minority(train, util::derive_seed(cfg.seed, kUpsampleStream));

    PreparedData p;
    p.train_tokens = textprep::tokenize_dataset(train, cfg.pipeline);
    p.test_tokens = textprep::tokenize_dataset(test, cfg.pipeline);
    p.vocab = textprep::build_vocabulary(p.train_tokens, cfg.pipeline);
    p.train = textprep::tfidf_transform(p.train_tokens, p.vocab, cfg.pipeline.weighting, threads);
    p.train.labels = train.label_indices();
    p.train.class_labels = all.labels();
    p.test = textprep::tfidf_transform(p.test_tokens, p.vocab, cfg.pipeline.weighting, threads);
    p.test.labels = test.label_indices();
    p.test.class_labels = all.labels();

    std::ostringstream m;
    m << "sentipgm-manifest 1\n"
      << "name " << cfg.name << "\n"
      << "seed " << cfg.seed << "\n"
      << "config_hash " << util::hex64(cfg.hash()) << "\n"
      << "dataset_hash " << util::hex64(util::fnv1a64(dataset_bytes)) << "\n"
      << "vocab_hash " << util::hex64(p.vocab.hash()) << "\n"
      << "words_to_keep " << cfg.pipeline.words_to_keep << "\n"
      << "weighting " << textprep::to_string(cfg.pipeline.weighting) << "\n"
      << "train_fraction " << util::format_real(cfg.split.train_fraction) << "\n"
      << "upsample " << (cfg.upsample ? "true" : "false") << "\n"
      << "train_rows " << p.train.n_rows() << "\n"
      << "test_rows " << p.test.n_rows() << "\n";
    for (const auto& l : all.labels()) m << "class " << l << "\n";
    p.manifest = m.str();
    return p;
}

void write_artifacts(const PreparedData& data, const fs::path& dir) {
    util::write_file(dir / "vocab.txt", data.vocab.serialize());
    util::write_file(dir / "train.svm", data.train.serialize());
    util::write_file(dir / "test.svm", data.test.serialize());
    util::write_file(dir / "train.tokens", serialize_tokens(data.train_tokens, data.train.labels));
    util::write_file(dir / "test.tokens", serialize_tokens(data.test_tokens, data.test.labels));
    util::write_file(dir / "manifest.txt", data.manifest);
}

PreparedData read_artifacts(const fs::path& dir) {
    PreparedData p;
    p.manifest = util::read_file(dir / "manifest.txt");
    p.vocab = textprep::Vocabulary::parse(util::read_file(dir / "vocab.txt"));
    if (manifest_value(p.manifest, "vocab_hash") != util::hex64(p.vocab.hash()))
        fail(ErrorCode::VocabHashMismatch, "vocab.txt does not match the manifest in " + dir.string());
    p.train = FeatureMatrix::parse(util::read_file(dir / "train.svm"));
    p.test = FeatureMatrix::parse(util::read_file(dir / "test.svm"));
    p.train_tokens = parse_tokens(util::read_file(dir / "train.tokens"), p.train.labels);
    p.test_tokens = parse_tokens(util::read_file(dir / "test.tokens"), p.test.labels);
    return p;
}

namespace {

struct Envelope {
    ModelKind kind;
    std::string classifier;
    std::string dataset;
    std::string vocab_hash;
    std::string body;
};

std::string make_envelope(const ExperimentConfig& cfg, const PreparedData& data, const std::string& body) {
    std::ostringstream o;
    o << "sentipgm-model 1\n"
      << "kind " << to_string(cfg.model) << "\n"
      << "classifier " << cfg.classifier_label() << "\n"
      << "dataset " << cfg.dataset.name << "\n"
      << "config_hash " << util::hex64(cfg.hash()) << "\n"
      << "vocab_hash " << util::hex64(data.vocab.hash()) << "\n"
      << "body\n"
      << body;
    return o.str();
}

Envelope parse_envelope(const std::string& text) {
    const auto body = text.find("\nbody\n");
    if (text.rfind("sentipgm-model 1\n", 0) != 0 || body == std::string::npos)
        fail(ErrorCode::ModelFormat, "not a sentipgm model file");
    const std::string_view head(text.data(), body + 1);
    Envelope e;
    e.kind = parse_model_kind(manifest_value(head, "kind"));
    e.classifier = manifest_value(head, "classifier");
    e.dataset = manifest_value(head, "dataset");
    e.vocab_hash = manifest_value(head, "vocab_hash");
    e.body = text.substr(body + 6);
    return e;
}

std::string trace_log(const bayesnet::SearchResult& r, const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "# search " << bayesnet::to_string(cfg.bayesnet.search) << " metric "
      << bayesnet::to_string(cfg.bayesnet.score.metric) << "\nstep\tscore\tmove\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i)
        o << i << "\t" << util::format_real(r.trace[i]) << "\t"
          << (i == 0 ? std::string("start") : i - 1 < r.moves.size() ? r.moves[i - 1].describe() : std::string("-"))
          << "\n";
    o << "# final " << util::format_real(r.score) << " arcs " << r.dag.edge_count() << "\n";
    return o.str();
}

bayesnet::SearchResult run_search(const bayesnet::DiscreteData& d, const ExperimentConfig& cfg) {
    using bayesnet::SearchAlgorithm;
    const auto& b = cfg.bayesnet;
    switch (b.search) {
    case SearchAlgorithm::K2: {
        std::vector<std::size_t> order(d.n_vars());
        std::iota(order.begin(), order.end(), 0);
        return bayesnet::search_k2(d, order, b.score);
    }
    case SearchAlgorithm::HillClimb: return bayesnet::search_hill_climb(d, b.score, b.max_steps);
    case SearchAlgorithm::RepeatedHillClimb:
        return bayesnet::search_repeated_hill_climb(d, b.score, b.restarts, util::derive_seed(cfg.seed, kModelStream),
                                                    b.max_steps);
    case SearchAlgorithm::Lagd: return bayesnet::search_lagd(d, b.score, b.look_ahead, b.good_ops, b.max_steps);
    case SearchAlgorithm::Tabu: return bayesnet::search_tabu(d, b.score, b.tabu_length, b.max_steps);
    case SearchAlgorithm::Tan: return bayesnet::learn_tan(d, b.score);
    case SearchAlgorithm::NaiveBayes: {
        bayesnet::SearchResult r{bayesnet::Dag::naive_bayes(d.n_vars()), 0.0, {}, {}};
        r.score = bayesnet::network_score(d, r.dag, b.score);
        r.trace = {r.score};
        return r;
    }
    }
    fail(ErrorCode::Config, "unhandled search algorithm");
}

std::string epoch_log(const std::vector<double>& objective) {
    std::string out = "epoch\tobjective\n";
    for (std::size_t i = 0; i < objective.size(); ++i)
        out += std::to_string(i + 1) + "\t" + util::format_real(objective[i]) + "\n";
    return out;
}

}  // namespace

TrainedModel train_model(const ExperimentConfig& cfg, const PreparedData& data, std::size_t threads) {
    TrainedModel out;
    std::string body;
    baselines::TrainConfig tc = cfg.train;
    tc.seed = util::derive_seed(cfg.seed, kModelStream);
    switch (cfg.model) {
    case ModelKind::BayesNet: {
        const auto d = bayesnet::discretize_presence(data.train);
        const auto result = run_search(d, cfg);
        body = bayesnet::estimate_cpts(d, result.dag, cfg.bayesnet.smoothing).serialize();
        out.log = trace_log(result, cfg);
        break;
    }
    case ModelKind::Hmm: {
        hmm::ClassHmmOptions o;
        o.n_states = cfg.hmm.n_states;
        o.vocab_size = cfg.hmm.vocab_size ? cfg.hmm.vocab_size : cfg.pipeline.words_to_keep;
        o.seed = util::derive_seed(cfg.seed, kModelStream);
        o.bw = {cfg.hmm.max_iters, cfg.hmm.tol};
        o.emission_smoothing = cfg.hmm.emission_smoothing;
        o.threads = threads;
        auto trained = hmm::train_class_hmms(data.train_tokens, data.train.labels, data.train.class_labels, o);
        body = trained.bank.serialize();
        out.log = "class\titeration\tlog_likelihood\n";
        for (std::size_t c = 0; c < trained.traces.size(); ++c)
            for (std::size_t i = 0; i < trained.traces[c].size(); ++i)
                out.log += data.train.class_labels[c] + "\t" + std::to_string(i + 1) + "\t" +
                           util::format_real(trained.traces[c][i]) + "\n";
        break;
    }
    case ModelKind::NaiveBayes:
        body = baselines::train_multinomial_nb(data.train, tc).serialize();
        out.log = "# multinomial naive Bayes has no iterative training\n";
        break;
    case ModelKind::LogReg: {
        auto t = baselines::train_logreg(data.train, tc);
        body = t.model.serialize();
        out.log = epoch_log(t.epoch_objective);
        break;
    }
    case ModelKind::Svm: {
        auto t = baselines::train_linear_svm(data.train, tc);
        body = t.model.serialize();
        out.log = epoch_log(t.epoch_objective);
        break;
    }
    }
    out.file = make_envelope(cfg, data, body);
    return out;
}

Evaluation evaluate_model(const std::string& model_file, const PreparedData& data, EvalSplit split) {
    const Envelope env = parse_envelope(model_file);
    if (env.vocab_hash != util::hex64(data.vocab.hash()))
        fail(ErrorCode::VocabHashMismatch, "model vocabulary " + env.vocab_hash + " does not match data vocabulary " +
                                               util::hex64(data.vocab.hash()));
    const FeatureMatrix& m = split == EvalSplit::Train ? data.train : data.test;
    const auto& tokens = split == EvalSplit::Train ? data.train_tokens : data.test_tokens;
    std::vector<std::size_t> preds;
    preds.reserve(m.n_rows());
    std::vector<std::string> labels;
    switch (env.kind) {
    case ModelKind::BayesNet: {
        const auto model = bayesnet::BayesNetClassifier::parse(env.body);
        const auto d = bayesnet::discretize_presence(m);
        labels = model.class_labels();
        for (std::size_t r = 0; r < m.n_rows(); ++r) preds.push_back(model.predict(d, r).label);
        break;
    }
    case ModelKind::Hmm: {
        const auto bank = hmm::ClassHmmBank::parse(env.body);
        labels = bank.class_labels;
        for (const auto& obs : hmm::encode_corpus(bank, tokens)) preds.push_back(hmm::classify_sequence(bank, obs).label);
        break;
    }
    case ModelKind::NaiveBayes: {
        const auto model = baselines::NaiveBayesModel::parse(env.body);
        labels = model.class_labels;
        for (const auto& row : m.rows) preds.push_back(baselines::predict_nb(model, row).label);
        break;
    }
    case ModelKind::LogReg:
    case ModelKind::Svm: {
        const auto model = baselines::LinearModel::parse(env.body);
        labels = model.class_labels;
        for (const auto& row : m.rows) preds.push_back(baselines::predict_linear(model, row).label);
        break;
    }
    }
    if (labels != m.class_labels) fail(ErrorCode::UnknownLabel, "model and data disagree on the class labels");
    Evaluation ev;
    ev.confusion = eval::confusion_matrix(m.labels, preds, labels);
    ev.result = {env.classifier, env.dataset, eval::average_metrics(ev.confusion)};
    return ev;
}

eval::Report render_evaluation(const Evaluation& ev) {
    eval::Report rep = eval::format_report({ev.result});
    const auto& cm = ev.confusion;
    const auto pc = eval::per_class_prf(cm);
    std::ostringstream o;
    o << ev.result.classifier << " on " << ev.result.dataset << " (" << cm.total() << " instances)\n\n" << rep.text;
    o << "\nper class:\n";
    std::size_t width = 5;
    for (const auto& l : cm.class_labels()) width = std::max(width, l.size());
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        const auto& l = cm.class_labels()[c];
        o << "  " << l << std::string(width - l.size(), ' ') << "  precision " << eval::format_fixed(pc.per_class[c].precision, 4)
          << "  recall " << eval::format_fixed(pc.per_class[c].recall, 4) << "  f1 "
          << eval::format_fixed(pc.per_class[c].f1, 4) << "  support " << pc.support[c] << "\n";
    }
    o << "\nconfusion (rows true, columns predicted):\n";
    for (std::size_t i = 0; i < cm.n_classes(); ++i) {
        const auto& l = cm.class_labels()[i];
        o << "  " << l << std::string(width - l.size(), ' ');
        for (std::size_t j = 0; j < cm.n_classes(); ++j) o << ' ' << cm.at(i, j);
        o << "\n";
    }
    rep.text = o.str();
    return rep;
}

std::string serialize_metrics(const eval::NamedResult& r) {
    auto prf = [](const eval::Prf& p) {
        return util::format_real(p.precision, 17) + " " + util::format_real(p.recall, 17) + " " + util::format_real(p.f1, 17);
    };
    return "classifier " + r.classifier + "\ndataset " + r.dataset + "\naccuracy " +
           util::format_real(r.metrics.accuracy, 17) + "\nmicro " + prf(r.metrics.micro) + "\nmacro " +
           prf(r.metrics.macro) + "\nweighted " + prf(r.metrics.weighted) + "\nzero_division " +
           (r.metrics.zero_division ? "1" : "0") + "\n";
}

eval::NamedResult parse_metrics(std::string_view text) {
    eval::NamedResult r;
    r.classifier = manifest_value(text, "classifier");
    r.dataset = manifest_value(text, "dataset");
    auto prf = [&](std::string_view key) {
        const auto f = util::split_whitespace(manifest_value(text, key));
        if (f.size() != 3) fail(ErrorCode::ParseError, "metrics file: bad '" + std::string(key) + "' line");
        return eval::Prf{util::parse_real(f[0]), util::parse_real(f[1]), util::parse_real(f[2])};
    };
    r.metrics.accuracy = util::parse_real(manifest_value(text, "accuracy"));
    r.metrics.micro = prf("micro");
    r.metrics.macro = prf("macro");
    r.metrics.weighted = prf("weighted");
    r.metrics.zero_division = manifest_value(text, "zero_division") == "1";
    return r;
}

void cmd_prepare(const ExperimentConfig& cfg, const RunOptions& opts) {
    const fs::path dir = output_dir(cfg, opts);
    write_artifacts(prepare_data(cfg, opts.threads), dir);
    err_of(opts) << "prepared " << cfg.name << " in " << dir.string() << "\n";
}

namespace {

// Reuses artifacts already prepared for this exact configuration.
PreparedData prepared_for(const ExperimentConfig& cfg, const fs::path& dir, std::size_t threads) {
    const fs::path manifest = dir / "manifest.txt";
    if (fs::exists(manifest) && manifest_value(util::read_file(manifest), "config_hash") == util::hex64(cfg.hash()))
        return read_artifacts(dir);
    PreparedData p = prepare_data(cfg, threads);
    write_artifacts(p, dir);
    return p;
}

void train_into(const ExperimentConfig& cfg, const fs::path& dir, std::size_t threads) {
    const PreparedData data = prepared_for(cfg, dir, threads);
    const TrainedModel m = train_model(cfg, data, threads);
    util::write_file(dir / "model.txt", m.file);
    util::write_file(dir / "train_log.txt", m.log);
}

Evaluation evaluate_into(const std::string& model_file, const PreparedData& data, EvalSplit split, const fs::path& dir) {
    Evaluation ev = evaluate_model(model_file, data, split);
    const eval::Report rep = render_evaluation(ev);
    util::write_file(dir / "report.txt", rep.text);
    util::write_file(dir / "report.csv", rep.csv);
    util::write_file(dir / "metrics.txt", serialize_metrics(ev.result));
    return ev;
}

}  // namespace

void cmd_train(const ExperimentConfig& cfg, const RunOptions& opts) {
    const fs::path dir = output_dir(cfg, opts);
    train_into(cfg, dir, opts.threads);
    err_of(opts) << "trained " << cfg.name << ": " << (dir / "model.txt").string() << "\n";
}

void cmd_evaluate(const EvaluateArgs& args, const RunOptions& opts) {
    if (args.config.has_value() == !args.artifacts.empty())
        fail(ErrorCode::Config, "evaluate needs exactly one of --config or --artifacts");
    const std::string model_file = util::read_file(args.model);
    const PreparedData data = args.config ? prepare_data(*args.config, opts.threads) : read_artifacts(args.artifacts);
    fs::path dir = opts.out;
    if (dir.empty() && args.config) dir = args.config->output_dir;
    if (dir.empty()) dir = args.model.parent_path();
    const Evaluation ev = evaluate_into(model_file, data, args.split, dir);
    const eval::Report rep = render_evaluation(ev);
    out_of(opts) << (opts.format == "csv" ? rep.csv : rep.text);
}

namespace {

std::string sanitize(std::string_view s) {
    std::string out;
    for (char ch : s)
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
    return out.empty() ? "_" : out;
}

struct CellOutcome {
    std::string dir;  // relative to the benchmark directory
    std::string classifier;
    std::string dataset;
    std::optional<eval::NamedResult> result;
};

std::string serialize_cells(const std::vector<CellOutcome>& cells) {
    std::string out;
    for (const auto& c : cells)
        out += c.dir + "\t" + c.classifier + "\t" + c.dataset + "\t" + (c.result ? "ok" : "failed") + "\n";
    return out;
}

// Writes every combined report from the cell outcomes; benchmark and report
// share this so regenerated files are byte-identical.
eval::Report write_combined(const std::vector<CellOutcome>& cells, const fs::path& dir) {
    std::vector<eval::NamedResult> results;
    std::vector<eval::GridCell> grid;
    std::vector<std::string> datasets;
    for (const auto& c : cells) {
        grid.push_back({c.classifier, c.dataset,
                        c.result ? std::optional<double>(c.result->metrics.weighted.f1) : std::nullopt,
                        c.result ? "" : c.dir + "/error.log"});
        if (c.result) results.push_back(*c.result);
        if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end()) datasets.push_back(c.dataset);
    }
    const eval::Report g = eval::format_grid(grid);
    util::write_file(dir / "grid.txt", g.text);
    util::write_file(dir / "grid.csv", g.csv);
    const eval::Report r = eval::format_report(results);
    util::write_file(dir / "report.txt", r.text);
    util::write_file(dir / "report.csv", r.csv);
    for (const auto& d : datasets) util::write_file(dir / "plots" / (sanitize(d) + ".csv"), eval::plot_data_for_dataset(results, d));
    util::write_file(dir / "plots" / "summary.csv", eval::plot_data_summary(results));
    return {g.text + "\n" + r.text, g.csv};
}

}  // namespace

std::size_t cmd_benchmark(const std::vector<ExperimentConfig>& configs, const RunOptions& opts) {
    if (configs.empty()) fail(ErrorCode::Config, "benchmark needs at least one config");
    if (opts.out.empty()) fail(ErrorCode::Config, "benchmark needs --out");
    const fs::path root = opts.out;
    std::vector<CellOutcome> cells(configs.size());
    std::vector<std::string> errors(configs.size());
    const std::size_t width = std::to_string(configs.size()).size();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::string idx = std::to_string(i + 1);
        idx.insert(0, width - idx.size(), '0');
        cells[i].dir = "cells/" + idx + "-" + sanitize(configs[i].name);
        cells[i].classifier = configs[i].classifier_label();
        cells[i].dataset = configs[i].dataset.name;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
            const fs::path dir = root / cells[i].dir;
            try {
                fs::remove_all(dir);
                train_into(configs[i], dir, 1);
                const PreparedData data = read_artifacts(dir);
                cells[i].result = evaluate_into(util::read_file(dir / "model.txt"), data, EvalSplit::Test, dir).result;
            } catch (const std::exception& e) {
                errors[i] = e.what();
                try {
                    util::write_file(dir / "error.log", errors[i] + "\n");
                } catch (const std::exception&) {
                }
            }
        }
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(opts.threads, configs.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::size_t failed = 0;
    for (std::size_t i = 0; i < configs.size(); ++i)
        if (!cells[i].result) {
            ++failed;
            err_of(opts) << "cell " << cells[i].dir << " failed: " << errors[i] << "\n";
        }
    util::write_file(root / "cells.txt", serialize_cells(cells));
    const eval::Report combined = write_combined(cells, root);
    out_of(opts) << (opts.format == "csv" ? combined.csv : combined.text);
    return failed;
}

void cmd_report(const fs::path& benchmark_dir, const RunOptions& opts) {
    std::vector<CellOutcome> cells;
    std::istringstream in(util::read_file(benchmark_dir / "cells.txt"));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
            f.push_back(line.substr(start, tab - start));
        f.push_back(line.substr(start));
        if (f.size() != 4) fail(ErrorCode::ParseError, "cells.txt: malformed line");
        CellOutcome c{f[0], f[1], f[2], std::nullopt};
        if (f[3] == "ok") c.result = parse_metrics(util::read_file(benchmark_dir / c.dir / "metrics.txt"));
        cells.push_back(std::move(c));
    }
    const fs::path dir = opts.out.empty() ? benchmark_dir : opts.out;
    const eval::Report combined = write_combined(cells, dir);
    out_of(opts) << (opts.format == "csv" ? combined.csv : combined.text);
}

}  // namespace sentipgm::app
