#pragma once

#include <string>
#include <vector>

namespace seal {

/// Central-difference verification of every hand-derived gradient on a small
/// synthetic instance (12 nodes, 5 features, 3 classes), dropout disabled.
struct GradientGateReport {
    struct Entry {
        std::string name;
        double max_rel_error = 0.0;
    };
    std::vector<Entry> entries;
    double threshold = 1e-4;
    double seconds = 0.0;
    bool pass = false;
};

GradientGateReport run_gradient_gate();

}  // namespace seal
