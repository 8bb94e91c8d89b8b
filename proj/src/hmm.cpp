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

#include "sentipgm/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "sentipgm/error.hpp"
#include "sentipgm/util.hpp"

namespace sentipgm::hmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_distribution(const double* row, std::size_t n, double tol, const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(row[i] >= 0.0)) fail(ErrorCode::InvalidArgument, std::string(what) + " has a negative entry");
        sum += row[i];
    }
    if (std::abs(sum - 1.0) > tol) fail(ErrorCode::InvalidArgument, std::string(what) + " row does not sum to 1");
}

void normalize_or_uniform(double* row, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += row[i];
    for (std::size_t i = 0; i < n; ++i) row[i] = sum > 0.0 ? row[i] / sum : 1.0 / static_cast<double>(n);
}

void check_symbols(const HmmModel& model, const ObservationSeq& obs) {
    if (obs.empty()) fail(ErrorCode::InvalidArgument, "observation sequence must be nonempty");
    for (std::size_t o : obs)
        if (o >= model.n_symbols) fail(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(o));
}

}  // namespace

void HmmModel::validate(double tol) const {
    if (n_states == 0 || n_symbols == 0) fail(ErrorCode::InvalidArgument, "HMM needs states and symbols");
    if (transition.size() != n_states * n_states || emission.size() != n_states * n_symbols ||
        initial.size() != n_states)
        fail(ErrorCode::InvalidArgument, "HMM matrix shapes disagree with N, M");
    check_distribution(initial.data(), n_states, tol, "pi");
    for (std::size_t i = 0; i < n_states; ++i) {
        check_distribution(transition.data() + i * n_states, n_states, tol, "A");
        check_distribution(emission.data() + i * n_symbols, n_symbols, tol, "B");
    }
}

HmmModel HmmModel::random(std::size_t n_states, std::size_t n_symbols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HmmModel m{n_states, n_symbols, std::vector<double>(n_states * n_states), std::vector<double>(n_states * n_symbols),
               std::vector<double>(n_states)};
    auto fill = [&](double* row, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) row[i] = u(rng) + 1e-3;
        normalize_or_uniform(row, n);
    };
    fill(m.initial.data(), n_states);
    for (std::size_t i = 0; i < n_states; ++i) {
        fill(m.transition.data() + i * n_states, n_states);
        fill(m.emission.data() + i * n_symbols, n_symbols);
    }
    return m;
}

ForwardResult forward_scaled(const HmmModel& model, const ObservationSeq& obs) {
    check_symbols(model, obs);
    const std::size_t n = model.n_states, t_len = obs.size();
    ForwardResult r;
    r.alpha.assign(t_len * n, 0.0);
    r.scale.assign(t_len, 0.0);
    double log_lik = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        double* cur = r.alpha.data() + t * n;
        if (t == 0) {
            for (std::size_t i = 0; i < n; ++i) cur[i] = model.initial[i] * model.b(i, obs[0]);
        } else {
            const double* prev = r.alpha.data() + (t - 1) * n;
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += prev[i] * model.a(i, j);
                cur[j] = s * model.b(j, obs[t]);
            }
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += cur[i];
        if (!(sum > 0.0)) {
            r.log_likelihood = kNegInf;
            return r;
        }
        r.scale[t] = 1.0 / sum;
        for (std::size_t i = 0; i < n; ++i) cur[i] *= r.scale[t];
        log_lik += std::log(sum);
    }
    r.log_likelihood = log_lik;
    return r;
}

ViterbiResult viterbi(const HmmModel& model, const ObservationSeq& obs) {
    check_symbols(model, obs);
    const std::size_t n = model.n_states, t_len = obs.size();
    auto ln = [](double p) { return p > 0.0 ? std::log(p) : kNegInf; };
    std::vector<double> delta(n), next(n);
    std::vector<std::size_t> back(t_len * n, 0);
    for (std::size_t i = 0; i < n; ++i) delta[i] = ln(model.initial[i]) + ln(model.b(i, obs[0]));
    for (std::size_t t = 1; t < t_len; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t arg = 0;
            double best = delta[0] + ln(model.a(0, j));
            for (std::size_t i = 1; i < n; ++i) {
                double v = delta[i] + ln(model.a(i, j));
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            back[t * n + j] = arg;
            next[j] = best + ln(model.b(j, obs[t]));
        }
        std::swap(delta, next);
    }
    ViterbiResult r;
    std::size_t last = static_cast<std::size_t>(std::max_element(delta.begin(), delta.end()) - delta.begin());
    r.log_probability = delta[last];
    r.path.assign(t_len, 0);
    r.path[t_len - 1] = last;
    for (std::size_t t = t_len - 1; t > 0; --t) r.path[t - 1] = back[t * n + r.path[t]];
    return r;
}

BaumWelchResult baum_welch(const HmmModel& init, const std::vector<ObservationSeq>& corpus,
                           const BaumWelchOptions& options) {
    if (corpus.empty()) fail(ErrorCode::EmptyCorpus, "Baum-Welch needs at least one sequence");
    if (options.max_iters < 1 || !(options.tol > 0.0))
        fail(ErrorCode::InvalidArgument, "max_iters must be >= 1 and tol > 0");
    init.validate();
    for (const auto& seq : corpus) check_symbols(init, seq);

    const std::size_t n = init.n_states, m = init.n_symbols;
    BaumWelchResult res{init, {}};
    std::vector<double> beta, next_beta;
    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        const HmmModel& cur = res.model;
        std::vector<double> pi_acc(n, 0.0), trans_acc(n * n, 0.0), emit_acc(n * m, 0.0);
        double total = 0.0;
        for (const auto& seq : corpus) {
            ForwardResult f = forward_scaled(cur, seq);
            if (f.log_likelihood == kNegInf) continue;  // contributes no expected counts
            total += f.log_likelihood;
            const std::size_t t_len = seq.size();
            // Scaled backward pass sharing the forward scale factors.
            beta.assign(n, f.scale[t_len - 1]);
            for (std::size_t t = t_len; t-- > 0;) {
                const double* alpha = f.alpha.data() + t * n;
                for (std::size_t i = 0; i < n; ++i) {
                    double gamma = alpha[i] * beta[i] / f.scale[t];
                    emit_acc[i * m + seq[t]] += gamma;
                    if (t == 0) pi_acc[i] += gamma;
                }
                if (t == 0) break;
                const double* prev_alpha = f.alpha.data() + (t - 1) * n;
                next_beta.assign(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        double w = cur.a(i, j) * cur.b(j, seq[t]) * beta[j];
                        trans_acc[i * n + j] += prev_alpha[i] * w;
                        s += w;
                    }
                    next_beta[i] = s * f.scale[t - 1];
                }
                std::swap(beta, next_beta);
            }
        }
        res.log_likelihoods.push_back(total);

        HmmModel updated{n, m, std::move(trans_acc), std::move(emit_acc), std::move(pi_acc)};
        normalize_or_uniform(updated.initial.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            normalize_or_uniform(updated.transition.data() + i * n, n);
            normalize_or_uniform(updated.emission.data() + i * m, m);
        }
        res.model = std::move(updated);

        const auto& ll = res.log_likelihoods;
        if (ll.size() >= 2) {
            double prev = ll[ll.size() - 2], now = ll.back();
            if (now - prev < options.tol * std::abs(prev)) break;
        }
    }
    return res;
}

ObservationSeq ClassHmmBank::encode(const textprep::Tokens& tokens) const {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < symbols.size(); ++i) index.emplace(symbols[i], i);
    ObservationSeq out;
    out.reserve(std::max<std::size_t>(1, tokens.size()));
    for (const auto& t : tokens) {
        auto it = index.find(t);
        out.push_back(it == index.end() ? unknown_symbol() : it->second);
    }
    if (out.empty()) out.push_back(unknown_symbol());
    return out;
}

std::vector<ObservationSeq> encode_corpus(const ClassHmmBank& bank, const std::vector<textprep::Tokens>& docs) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < bank.symbols.size(); ++i) index.emplace(bank.symbols[i], i);
    std::vector<ObservationSeq> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) {
        ObservationSeq seq;
        for (const auto& t : doc) {
            auto it = index.find(t);
            seq.push_back(it == index.end() ? bank.unknown_symbol() : it->second);
        }
        if (seq.empty()) seq.push_back(bank.unknown_symbol());
        out.push_back(std::move(seq));
    }
    return out;
}

ClassHmmTraining train_class_hmms(const std::vector<textprep::Tokens>& docs, const std::vector<std::size_t>& labels,
                                  const std::vector<std::string>& class_labels, const ClassHmmOptions& options) {
    if (docs.size() != labels.size()) fail(ErrorCode::LengthMismatch, "one label per document required");
    if (options.n_states < 1) fail(ErrorCode::InvalidArgument, "n_states must be >= 1");
    if (!(options.emission_smoothing >= 0.0 && options.emission_smoothing < 1.0))
        fail(ErrorCode::InvalidArgument, "emission_smoothing must lie in [0, 1)");
    const std::size_t classes = class_labels.size();
    std::vector<std::size_t> counts(classes, 0);
    for (std::size_t l : labels) {
        if (l >= classes) fail(ErrorCode::UnknownLabel, "label index " + std::to_string(l));
        ++counts[l];
    }
    for (std::size_t c = 0; c < classes; ++c)
        if (counts[c] == 0) fail(ErrorCode::EmptyClass, "class '" + class_labels[c] + "' has no documents");

    ClassHmmTraining out;
    ClassHmmBank& bank = out.bank;
    bank.class_labels = class_labels;
    textprep::PipelineConfig vcfg;
    vcfg.words_to_keep = std::max<std::size_t>(1, options.vocab_size);
    bank.symbols = textprep::build_vocabulary(docs, vcfg).terms();

    auto encoded = encode_corpus(bank, docs);
    std::vector<std::vector<ObservationSeq>> per_class(classes);
    for (std::size_t i = 0; i < encoded.size(); ++i) per_class[labels[i]].push_back(std::move(encoded[i]));

    bank.models.resize(classes);
    out.traces.resize(classes);
    auto train_one = [&](std::size_t c) {
        std::mt19937_64 rng(util::derive_seed(options.seed, c));
        HmmModel init = HmmModel::random(options.n_states, bank.n_symbols(), rng);
        auto bw = baum_welch(init, per_class[c], options.bw);
        // Symbols a class never emitted in training would otherwise veto that
        // class outright at prediction time.
        const double eps = options.emission_smoothing, uniform = 1.0 / static_cast<double>(bw.model.n_symbols);
        for (double& b : bw.model.emission) b = (1.0 - eps) * b + eps * uniform;
        bank.models[c] = std::move(bw.model);
        out.traces[c] = std::move(bw.log_likelihoods);
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, classes));
    if (workers == 1) {
        for (std::size_t c = 0; c < classes; ++c) train_one(c);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < classes; c += workers) train_one(c);
            });
        for (auto& t : pool) t.join();
    }

    const double total = static_cast<double>(docs.size());
    for (std::size_t c = 0; c < classes; ++c) bank.class_priors.push_back(static_cast<double>(counts[c]) / total);
    return out;
}

Classification classify_sequence(const ClassHmmBank& bank, const ObservationSeq& obs) {
    Classification out;
    out.scores.resize(bank.models.size());
    for (std::size_t c = 0; c < bank.models.size(); ++c) {
        double prior = bank.class_priors[c];
        out.scores[c] = (prior > 0.0 ? std::log(prior) : kNegInf) + forward_scaled(bank.models[c], obs).log_likelihood;
    }
    out.label = static_cast<std::size_t>(std::max_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
    return out;
}

std::string serialize_model(const HmmModel& model, std::string_view label) {
    std::ostringstream out;
    auto row = [&](const double* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << util::format_real(p[i]);
        out << "\n";
    };
    out << "hmm " << model.n_states << ' ' << model.n_symbols << ' ' << label << "\n";
    out << "pi\n";
    row(model.initial.data(), model.n_states);
    out << "A\n";
    for (std::size_t i = 0; i < model.n_states; ++i) row(model.transition.data() + i * model.n_states, model.n_states);
    out << "B\n";
    for (std::size_t i = 0; i < model.n_states; ++i) row(model.emission.data() + i * model.n_symbols, model.n_symbols);
    return out.str();
}

namespace {

std::string read_line(std::istringstream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::ModelFormat, "unexpected end of HMM data");
    return line;
}

void read_row(std::istringstream& in, double* dst, std::size_t n) {
    auto fields = util::split_whitespace(read_line(in));
    if (fields.size() != n) fail(ErrorCode::ModelFormat, "HMM row width mismatch");
    for (std::size_t i = 0; i < n; ++i) dst[i] = util::parse_real(fields[i]);
}

void expect(std::istringstream& in, std::string_view tag) {
    if (util::trim(read_line(in)) != tag) fail(ErrorCode::ModelFormat, "expected '" + std::string(tag) + "'");
}

HmmModel parse_model_stream(std::istringstream& in, std::string* label) {
    std::string header = read_line(in);
    auto fields = util::split_whitespace(header);
    if (fields.size() < 3 || fields[0] != "hmm") fail(ErrorCode::ModelFormat, "expected 'hmm' header");
    HmmModel m;
    m.n_states = util::parse_uint(fields[1]);
    m.n_symbols = util::parse_uint(fields[2]);
    if (label) {
        // label: the rest of the line after "hmm N M "
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            while (pos < header.size() && header[pos] == ' ') ++pos;
            while (pos < header.size() && header[pos] != ' ') ++pos;
        }
        *label = pos + 1 < header.size() ? header.substr(pos + 1) : std::string();
    }
    m.initial.resize(m.n_states);
    m.transition.resize(m.n_states * m.n_states);
    m.emission.resize(m.n_states * m.n_symbols);
    expect(in, "pi");
    read_row(in, m.initial.data(), m.n_states);
    expect(in, "A");
    for (std::size_t i = 0; i < m.n_states; ++i) read_row(in, m.transition.data() + i * m.n_states, m.n_states);
    expect(in, "B");
    for (std::size_t i = 0; i < m.n_states; ++i) read_row(in, m.emission.data() + i * m.n_symbols, m.n_symbols);
    return m;
}

}  // namespace

HmmModel parse_model(std::string_view text, std::string* label) {
    std::istringstream in{std::string(text)};
    return parse_model_stream(in, label);
}

std::string ClassHmmBank::serialize() const {
    std::ostringstream out;
    out << "hmmbank\n";
    out << "classes " << models.size() << "\n";
    out << "priors";
    for (double p : class_priors) out << ' ' << util::format_real(p);
    out << "\n";
    out << "symbols " << symbols.size() << "\n";
    for (const auto& s : symbols) out << s << "\n";
    for (std::size_t c = 0; c < models.size(); ++c) out << serialize_model(models[c], class_labels[c]);
    return out.str();
}

ClassHmmBank ClassHmmBank::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    expect(in, "hmmbank");
    ClassHmmBank bank;
    auto f = util::split_whitespace(read_line(in));
    if (f.size() != 2 || f[0] != "classes") fail(ErrorCode::ModelFormat, "expected 'classes'");
    const std::size_t k = util::parse_uint(f[1]);
    f = util::split_whitespace(read_line(in));
    if (f.size() != k + 1 || f[0] != "priors") fail(ErrorCode::ModelFormat, "expected 'priors'");
    for (std::size_t i = 1; i < f.size(); ++i) bank.class_priors.push_back(util::parse_real(f[i]));
    f = util::split_whitespace(read_line(in));
    if (f.size() != 2 || f[0] != "symbols") fail(ErrorCode::ModelFormat, "expected 'symbols'");
    const std::size_t v = util::parse_uint(f[1]);
    for (std::size_t i = 0; i < v; ++i) bank.symbols.push_back(read_line(in));
    for (std::size_t c = 0; c < k; ++c) {
        std::string label;
        bank.models.push_back(parse_model_stream(in, &label));
        bank.class_labels.push_back(label);
        if (bank.models.back().n_symbols != bank.n_symbols())
            fail(ErrorCode::ModelFormat, "class models must share the symbol alphabet");
    }
    return bank;
}

}  // namespace sentipgm::hmm
