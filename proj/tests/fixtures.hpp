#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "seal/engine.hpp"
#include "seal/graph.hpp"

namespace fixtures {

/// The canonical small block-model bundle used across the test suite:
/// strong communities, class-correlated features, three balanced classes.
inline seal::GraphBundle bundle400() {
    return seal::generate_synthetic(400, 3, 60, 0.05, 0.005, 0.3, 1);
}

/// Splits sized for the 400-node bundle (120 test, 80 validation, 4 per class).
inline seal::SplitSpec splits400(const seal::GraphBundle& b, int64_t seed_val = 11,
                                 int64_t seed_init = 22) {
    return seal::make_splits(b, 5, seed_val, seed_init, 120, 80, 4);
}

/// A configuration scaled down for fast loop tests.
inline seal::TrainingConfig quick_config(seal::Strategy s = seal::Strategy::seal) {
    seal::TrainingConfig c;
    c.strategy = s;
    c.pretrain_epochs = 8;
    c.n_g = 2;
    c.n_d = 2;
    c.patience = 3;
    c.final_train_epochs = 40;
    return c;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("seal-test-" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fixtures
