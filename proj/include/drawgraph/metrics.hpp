#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace drawgraph {

// C x C counts; rows are ground truth, columns are predictions.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<long> counts;

    explicit ConfusionMatrix(int c = 0)
        : num_classes(c), counts(std::size_t(c) * std::size_t(c), 0) {}

    long at(int gt, int pred) const { return counts[std::size_t(gt) * num_classes + pred]; }
    void add(int gt, int pred, long k = 1) {
        counts[std::size_t(gt) * num_classes + pred] += k;
    }
    long total() const;
};

struct ClassMetric {
    std::optional<double> precision; // absent when the column sum is zero
    std::optional<double> recall;    // absent when the row sum is zero
};

struct MetricsReport {
    ConfusionMatrix confusion;
    std::vector<ClassMetric> per_class;
    double accuracy = 0.0;
};

MetricsReport compute_metrics(const ConfusionMatrix& confusion);

// Plain-text table, rows = ground truth, plus the derived figures.
std::string metrics_to_text(const MetricsReport& report,
                            const std::vector<std::string>& class_names);
nlohmann::json metrics_to_json(const MetricsReport& report,
                               const std::vector<std::string>& class_names);

} // namespace drawgraph
