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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentipgm::eval {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> class_labels);

    std::size_t n_classes() const noexcept { return labels_.size(); }
    const std::vector<std::string>& class_labels() const noexcept { return labels_; }
    std::size_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * labels_.size() + pred]; }
    void add(std::size_t truth, std::size_t pred, std::size_t count = 1);
    std::size_t total() const noexcept { return total_; }
    std::size_t trace() const noexcept;
    std::size_t support(std::size_t c) const;    // row sum
    std::size_t predicted(std::size_t c) const;  // column sum

private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> counts_;
    std::size_t total_ = 0;
};

ConfusionMatrix confusion_matrix(const std::vector<std::string>& truths, const std::vector<std::string>& preds,
                                 const std::vector<std::string>& labels);
ConfusionMatrix confusion_matrix(const std::vector<std::size_t>& truths, const std::vector<std::size_t>& preds,
                                 const std::vector<std::string>& labels);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassMetrics {
    std::vector<Prf> per_class;
    std::vector<std::size_t> support;
    /// Classes whose precision or recall hit a zero denominator and were set to 0.
    std::vector<std::size_t> zero_division;
};

ClassMetrics per_class_prf(const ConfusionMatrix& cm);

struct AveragedMetrics {
    Prf micro;
    Prf macro;
    Prf weighted;
    double accuracy = 0.0;
    bool zero_division = false;
};

AveragedMetrics average_metrics(const ConfusionMatrix& cm);

struct NamedResult {
    std::string classifier;
    std::string dataset;
    AveragedMetrics metrics;
};

struct Report {
    std::string text;
    std::string csv;
};

/// One CSV line per (result, averaging kind); values at four decimals.
Report format_report(const std::vector<NamedResult>& results);

/// Benchmark grid: classifiers as rows, datasets as columns, weighted F1 in
/// percent. A missing value renders as "ERR" followed by the log pointer.
struct GridCell {
    std::string classifier;
    std::string dataset;
    std::optional<double> weighted_f1;
    std::string log_pointer;
};

Report format_grid(const std::vector<GridCell>& cells);

/// Bar-chart data: one row per classifier with weighted precision/recall/F1.
std::string plot_data_for_dataset(const std::vector<NamedResult>& results, std::string_view dataset);
/// Weighted F1 of every (classifier, dataset) pair.
std::string plot_data_summary(const std::vector<NamedResult>& results);

std::string format_fixed(double value, int decimals);

}  // namespace sentipgm::eval
