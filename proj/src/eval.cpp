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

#include "sentipgm/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "sentipgm/error.hpp"

namespace sentipgm::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_labels)
    : labels_(std::move(class_labels)), counts_(labels_.size() * labels_.size(), 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t pred, std::size_t count) {
    const std::size_t c = labels_.size();
    if (truth >= c || pred >= c) fail(ErrorCode::UnknownLabel, "class index out of range");
    counts_[truth * c + pred] += count;
    total_ += count;
}

std::size_t ConfusionMatrix::trace() const noexcept {
    std::size_t t = 0;
    for (std::size_t c = 0; c < labels_.size(); ++c) t += at(c, c);
    return t;
}

std::size_t ConfusionMatrix::support(std::size_t c) const {
    std::size_t s = 0;
    for (std::size_t j = 0; j < labels_.size(); ++j) s += at(c, j);
    return s;
}

std::size_t ConfusionMatrix::predicted(std::size_t c) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) s += at(i, c);
    return s;
}

ConfusionMatrix confusion_matrix(const std::vector<std::string>& truths, const std::vector<std::string>& preds,
                                 const std::vector<std::string>& labels) {
    if (truths.size() != preds.size()) fail(ErrorCode::LengthMismatch, "truths and predictions differ in length");
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
    auto lookup = [&](const std::string& l) {
        auto it = index.find(l);
        if (it == index.end()) fail(ErrorCode::UnknownLabel, "label '" + l + "'");
        return it->second;
    };
    ConfusionMatrix cm(labels);
    for (std::size_t k = 0; k < truths.size(); ++k) cm.add(lookup(truths[k]), lookup(preds[k]));
    return cm;
}

ConfusionMatrix confusion_matrix(const std::vector<std::size_t>& truths, const std::vector<std::size_t>& preds,
                                 const std::vector<std::string>& labels) {
    if (truths.size() != preds.size()) fail(ErrorCode::LengthMismatch, "truths and predictions differ in length");
    ConfusionMatrix cm(labels);
    for (std::size_t k = 0; k < truths.size(); ++k) cm.add(truths[k], preds[k]);
    return cm;
}

namespace {

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

ClassMetrics per_class_prf(const ConfusionMatrix& cm) {
    if (cm.total() == 0) fail(ErrorCode::EmptyMatrix, "no evaluated instances");
    ClassMetrics m;
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        const std::size_t predicted = cm.predicted(c), support = cm.support(c);
        Prf p;
        p.precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
        p.recall = support ? tp / static_cast<double>(support) : 0.0;
        p.f1 = harmonic(p.precision, p.recall);
        if (!predicted || !support) m.zero_division.push_back(c);
        m.per_class.push_back(p);
        m.support.push_back(support);
    }
    return m;
}

AveragedMetrics average_metrics(const ConfusionMatrix& cm) {
    const ClassMetrics pc = per_class_prf(cm);
    AveragedMetrics a;
    const double total = static_cast<double>(cm.total());
    // Pooled over classes, TP = trace and both FP and FN sum to total - trace.
    a.accuracy = static_cast<double>(cm.trace()) / total;
    a.micro = {a.accuracy, a.accuracy, a.accuracy};
    const double k = static_cast<double>(cm.n_classes());
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        const Prf& p = pc.per_class[c];
        const double w = static_cast<double>(pc.support[c]) / total;
        a.macro.precision += p.precision / k;
        a.macro.recall += p.recall / k;
        a.macro.f1 += p.f1 / k;
        a.weighted.precision += w * p.precision;
        a.weighted.recall += w * p.recall;
        a.weighted.f1 += w * p.f1;
    }
    a.zero_division = !pc.zero_division.empty();
    return a;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], r[i].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) line += "  ";
            line += r[i];
            if (i + 1 < r.size()) line.append(width[i] - r[i].size(), ' ');
        }
        out += line + "\n";
    }
    return out;
}

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

Report format_report(const std::vector<NamedResult>& results) {
    Report rep;
    rep.csv = "classifier,dataset,avg_kind,precision,recall,f1,accuracy\n";
    std::vector<std::vector<std::string>> rows{{"classifier", "dataset", "average", "precision", "recall", "f1", "accuracy"}};
    std::vector<std::string> notes;
    for (const auto& r : results) {
        const std::pair<const char*, const Prf*> kinds[] = {
            {"micro", &r.metrics.micro}, {"macro", &r.metrics.macro}, {"weighted", &r.metrics.weighted}};
        const std::string acc = format_fixed(r.metrics.accuracy, 4);
        for (const auto& [name, p] : kinds) {
            std::vector<std::string> cells{r.classifier, r.dataset, name, format_fixed(p->precision, 4),
                                           format_fixed(p->recall, 4), format_fixed(p->f1, 4), acc};
            for (std::size_t i = 0; i < cells.size(); ++i) rep.csv += (i ? "," : "") + csv_field(cells[i]);
            rep.csv += "\n";
            rows.push_back(std::move(cells));
        }
        if (r.metrics.zero_division)
            notes.push_back("note: " + r.classifier + " on " + r.dataset +
                            ": a zero precision/recall denominator was scored as 0");
    }
    rep.text = render_table(rows);
    for (const auto& n : notes) rep.text += n + "\n";
    return rep;
}

Report format_grid(const std::vector<GridCell>& cells) {
    // A repeated (classifier, dataset) pair opens a new row instead of
    // overwriting, so every cell stays visible.
    struct Row {
        std::string label;
        std::map<std::string, const GridCell*> by_dataset;
    };
    std::vector<Row> rows_by_order;
    std::vector<std::string> datasets;
    for (const auto& c : cells) {
        push_unique(datasets, c.dataset);
        Row* target = nullptr;
        std::size_t same_name = 0;
        for (auto& r : rows_by_order) {
            if (r.by_dataset.begin()->second->classifier != c.classifier) continue;
            ++same_name;
            if (!target && !r.by_dataset.count(c.dataset)) target = &r;
        }
        if (!target) {
            rows_by_order.push_back({same_name ? c.classifier + " #" + std::to_string(same_name + 1) : c.classifier, {}});
            target = &rows_by_order.back();
        }
        target->by_dataset[c.dataset] = &c;
    }
    auto value = [](const GridCell* c) -> std::string {
        if (!c) return "-";
        return c->weighted_f1 ? format_fixed(*c->weighted_f1 * 100.0, 2) : "ERR";
    };
    Report rep;
    std::vector<std::vector<std::string>> rows{{"classifier"}};
    rep.csv = "classifier";
    for (const auto& d : datasets) {
        rows[0].push_back(d);
        rep.csv += "," + csv_field(d);
    }
    rep.csv += "\n";
    for (const auto& r : rows_by_order) {
        std::vector<std::string> row{r.label};
        rep.csv += csv_field(r.label);
        for (const auto& d : datasets) {
            auto it = r.by_dataset.find(d);
            const GridCell* c = it == r.by_dataset.end() ? nullptr : it->second;
            std::string text = value(c);
            if (c && !c->weighted_f1 && !c->log_pointer.empty()) text += " (" + c->log_pointer + ")";
            row.push_back(text);
            rep.csv += "," + csv_field(value(c));
        }
        rep.csv += "\n";
        rows.push_back(std::move(row));
    }
    rep.text = render_table(rows);
    return rep;
}

std::string plot_data_for_dataset(const std::vector<NamedResult>& results, std::string_view dataset) {
    std::string out = "classifier,precision,recall,f1\n";
    for (const auto& r : results) {
        if (r.dataset != dataset) continue;
        const Prf& w = r.metrics.weighted;
        out += csv_field(r.classifier) + "," + format_fixed(w.precision, 4) + "," + format_fixed(w.recall, 4) + "," +
               format_fixed(w.f1, 4) + "\n";
    }
    return out;
}

std::string plot_data_summary(const std::vector<NamedResult>& results) {
    std::string out = "classifier,dataset,f1\n";
    for (const auto& r : results)
        out += csv_field(r.classifier) + "," + csv_field(r.dataset) + "," + format_fixed(r.metrics.weighted.f1, 4) + "\n";
    return out;
}

}  // namespace sentipgm::eval
