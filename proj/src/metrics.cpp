#include "drawgraph/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "drawgraph/errors.hpp"

namespace drawgraph {

long ConfusionMatrix::total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
}

MetricsReport compute_metrics(const ConfusionMatrix& confusion) {
    const int c = confusion.num_classes;
    if (c <= 0) throw DataError("empty confusion matrix");
    for (long v : confusion.counts)
        if (v < 0) throw DataError("negative confusion count");
    long total = confusion.total();
    if (total == 0) throw DataError("all-zero confusion matrix");

    MetricsReport r{confusion, {}, 0.0};
    long diag = 0;
    for (int k = 0; k < c; ++k) {
        long row = 0, col = 0;
        for (int j = 0; j < c; ++j) {
            row += confusion.at(k, j);
            col += confusion.at(j, k);
        }
        ClassMetric m;
        if (col > 0) m.precision = double(confusion.at(k, k)) / double(col);
        if (row > 0) m.recall = double(confusion.at(k, k)) / double(row);
        r.per_class.push_back(m);
        diag += confusion.at(k, k);
    }
    r.accuracy = double(diag) / double(total);
    return r;
}

std::string metrics_to_text(const MetricsReport& report,
                            const std::vector<std::string>& class_names) {
    const int c = report.confusion.num_classes;
    std::ostringstream out;
    char buf[128];

    out << "confusion matrix (rows = ground truth, columns = prediction)\n";
    out << "                ";
    for (int j = 0; j < c; ++j) {
        std::snprintf(buf, sizeof buf, " %12s", class_names[std::size_t(j)].c_str());
        out << buf;
    }
    out << "\n";
    for (int i = 0; i < c; ++i) {
        std::snprintf(buf, sizeof buf, "%16s", class_names[std::size_t(i)].c_str());
        out << buf;
        for (int j = 0; j < c; ++j) {
            std::snprintf(buf, sizeof buf, " %12ld", report.confusion.at(i, j));
            out << buf;
        }
        out << "\n";
    }
    out << "\n";
    auto pct = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "n/a";
        char p[32];
        std::snprintf(p, sizeof p, "%.2f%%", *v * 100.0);
        return p;
    };
    for (int k = 0; k < c; ++k) {
        const ClassMetric& m = report.per_class[std::size_t(k)];
        std::snprintf(buf, sizeof buf, "%16s  precision %-8s recall %-8s\n",
                      class_names[std::size_t(k)].c_str(), pct(m.precision).c_str(),
                      pct(m.recall).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "accuracy %.2f%%\n", report.accuracy * 100.0);
    out << buf;
    return out.str();
}

nlohmann::json metrics_to_json(const MetricsReport& report,
                               const std::vector<std::string>& class_names) {
    nlohmann::json j;
    const int c = report.confusion.num_classes;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < c; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < c; ++k) row.push_back(report.confusion.at(i, k));
        rows.push_back(std::move(row));
    }
    j["confusion"] = std::move(rows);
    nlohmann::json per_class = nlohmann::json::array();
    for (int k = 0; k < c; ++k) {
        const ClassMetric& m = report.per_class[std::size_t(k)];
        nlohmann::json e;
        e["class"] = class_names[std::size_t(k)];
        if (m.precision) e["precision"] = *m.precision;
        if (m.recall) e["recall"] = *m.recall;
        per_class.push_back(std::move(e));
    }
    j["per_class"] = std::move(per_class);
    j["accuracy"] = report.accuracy;
    return j;
}

} // namespace drawgraph
