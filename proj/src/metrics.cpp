#include "seal/metrics.hpp"

#include <cmath>

#include "seal/error.hpp"

namespace seal {

void ConfusionTable::add(int true_class, int predicted_class) {
    if (true_class < 0 || true_class >= num_classes || predicted_class < 0 ||
        predicted_class >= num_classes)
        throw Error("confusion table: class out of range");
    counts[static_cast<size_t>(true_class) * num_classes + predicted_class]++;
}

int64_t ConfusionTable::total() const {
    int64_t t = 0;
    for (int64_t c : counts) t += c;
    return t;
}

double micro_f1(const ConfusionTable& table) {
    const int64_t total = table.total();
    if (total == 0) throw Error("micro_f1: empty table");
    int64_t trace = 0;
    for (int k = 0; k < table.num_classes; ++k) trace += table.at(k, k);
    return static_cast<double>(trace) / static_cast<double>(total);
}

double macro_f1(const ConfusionTable& table) {
    if (table.total() == 0) throw Error("macro_f1: empty table");
    double sum = 0.0;
    for (int k = 0; k < table.num_classes; ++k) {
        int64_t row = 0, col = 0;
        for (int j = 0; j < table.num_classes; ++j) {
            row += table.at(k, j);
            col += table.at(j, k);
        }
        const int64_t tp = table.at(k, k);
        const double precision = col > 0 ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
        const double recall = row > 0 ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
        const double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall)
                                                     : 0.0;
        sum += f1;
    }
    return sum / table.num_classes;
}

Aggregate aggregate_values(std::span<const double> values) {
    if (values.empty()) throw Error("aggregate: empty input");
    Aggregate a;
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

}  // namespace seal
