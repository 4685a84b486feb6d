#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seal {

/// K x K count matrix; rows = true class, columns = predicted class.
struct ConfusionTable {
    int num_classes = 0;
    std::vector<int64_t> counts;  // row-major

    explicit ConfusionTable(int k)
        : num_classes(k), counts(static_cast<size_t>(k) * static_cast<size_t>(k), 0) {}

    void add(int true_class, int predicted_class);
    int64_t at(int true_class, int predicted_class) const {
        return counts[static_cast<size_t>(true_class) * num_classes + predicted_class];
    }
    int64_t total() const;
};

/// Micro-averaged F1; equals trace/total (accuracy) for single-label
/// multiclass tables.
double micro_f1(const ConfusionTable& table);

/// Unweighted mean of per-class F1 = 2PR/(P+R), with F1 defined as 0 for a
/// class whose precision and recall are both zero.
double macro_f1(const ConfusionTable& table);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1); 0 for a single value
};
Aggregate aggregate_values(std::span<const double> values);

}  // namespace seal
