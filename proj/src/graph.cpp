#include "seal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seal/error.hpp"
#include "seal/rng.hpp"

namespace seal {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

std::string loc(const std::filesystem::path& file, int line) {
    return file.filename().string() + ":" + std::to_string(line);
}

// Split on single tabs; no empty-field collapsing.
std::vector<std::string> split_tabs(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_int(const std::string& tok, const std::string& where) {
    try {
        size_t used = 0;
        const int v = std::stoi(tok, &used);
        require(used == tok.size(), where + ": trailing characters in integer '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        throw Error(where + ": malformed integer '" + tok + "'");
    }
}

double parse_real(const std::string& tok, const std::string& where) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        require(used == tok.size(), where + ": trailing characters in number '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        throw Error(where + ": malformed number '" + tok + "'");
    }
}

std::ifstream open_text(const std::filesystem::path& file) {
    std::ifstream in(file);
    require(in.good(), "missing file: " + file.string());
    return in;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Draw k distinct elements from pool (partial Fisher-Yates), sorted.
std::vector<int> sample_sorted(std::vector<int> pool, size_t k, RngStream& rng) {
    require(k <= pool.size(), "sample: not enough elements");
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

void validate_bundle(const GraphBundle& b, std::vector<std::string>* warnings) {
    require(b.num_nodes > 0 && b.num_features > 0 && b.num_classes > 0,
            "bundle: counts must be positive");
    require(static_cast<int>(b.labels.size()) == b.num_nodes, "bundle: labels size != num_nodes");
    require(b.features.rows == b.num_nodes && b.features.cols == b.num_features,
            "bundle: feature matrix shape mismatch");

    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : b.edges) {
        require(u >= 0 && u < b.num_nodes && v >= 0 && v < b.num_nodes,
                "bundle: edge endpoint out of range");
        require(u != v, "bundle: self-loop edge stored");
        require(u < v, "bundle: edge not stored as u < v");
        require(seen.insert({u, v}).second, "bundle: duplicate undirected edge (" +
                                                std::to_string(u) + "," + std::to_string(v) + ")");
    }

    std::vector<int> class_counts(static_cast<size_t>(b.num_classes), 0);
    for (int i = 0; i < b.num_nodes; ++i) {
        const int y = b.labels[static_cast<size_t>(i)];
        require(y >= 0 && y < b.num_classes,
                "bundle: label out of range at node " + std::to_string(i));
        class_counts[static_cast<size_t>(y)]++;
    }
    for (int k = 0; k < b.num_classes; ++k)
        require(class_counts[static_cast<size_t>(k)] > 0,
                "bundle: class " + std::to_string(k) + " has no nodes");

    for (size_t i = 0; i < b.features.nnz(); ++i)
        require(b.features.vals[i] >= 0.0, "bundle: negative feature value");
    for (int i = 0; i < b.num_nodes; ++i) {
        double row_sum = 0.0;
        for (int p = b.features.row_ptr[i]; p < b.features.row_ptr[i + 1]; ++p)
            row_sum += b.features.vals[p];
        if (row_sum == 0.0 && warnings)
            warnings->push_back("node " + std::to_string(i) + " has an all-zero feature row");
    }
}

GraphBundle load_bundle(const std::filesystem::path& dir, std::vector<std::string>* warnings) {
    GraphBundle b;

    {
        const auto meta_path = dir / "meta.json";
        std::ifstream in = open_text(meta_path);
        nlohmann::json meta;
        try {
            in >> meta;
        } catch (const std::exception& e) {
            throw Error("meta.json: parse error: " + std::string(e.what()));
        }
        require(meta.contains("name") && meta.contains("num_nodes") &&
                    meta.contains("num_features") && meta.contains("num_classes"),
                "meta.json: missing required key");
        b.name = meta["name"].get<std::string>();
        b.num_nodes = meta["num_nodes"].get<int>();
        b.num_features = meta["num_features"].get<int>();
        b.num_classes = meta["num_classes"].get<int>();
    }

    {
        const auto path = dir / "edges.tsv";
        std::ifstream in = open_text(path);
        std::string line;
        int lineno = 0;
        std::set<std::pair<int, int>> seen;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto toks = split_tabs(line);
            require(toks.size() == 2, loc(path, lineno) + ": expected 'u<TAB>v'");
            int u = parse_int(toks[0], loc(path, lineno));
            int v = parse_int(toks[1], loc(path, lineno));
            require(u != v, loc(path, lineno) + ": self-loop edge");
            if (u > v) {
                if (warnings)
                    warnings->push_back(loc(path, lineno) + ": directed edge " + std::to_string(u) +
                                        "->" + std::to_string(v) + " symmetrized");
                std::swap(u, v);
            }
            require(seen.insert({u, v}).second, loc(path, lineno) + ": duplicate undirected edge (" +
                                                    std::to_string(u) + "," + std::to_string(v) + ")");
            b.edges.emplace_back(u, v);
        }
        std::sort(b.edges.begin(), b.edges.end());
    }

    {
        const auto path = dir / "features.srm";
        std::ifstream in = open_text(path);
        std::string line;
        int lineno = 0;
        std::vector<std::tuple<int, int, double>> triplets;
        int expected_node = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto toks = split_tabs(line);
            const int node = parse_int(toks[0], loc(path, lineno));
            require(node == expected_node,
                    loc(path, lineno) + ": node ids must be 0.." + std::to_string(b.num_nodes - 1) +
                        " in order; got " + std::to_string(node));
            require(toks.size() >= 2, loc(path, lineno) + ": node with no feature pairs");
            int prev_col = -1;
            for (size_t t = 1; t < toks.size(); ++t) {
                const size_t colon = toks[t].find(':');
                require(colon != std::string::npos, loc(path, lineno) + ": expected 'col:val'");
                const int col = parse_int(toks[t].substr(0, colon), loc(path, lineno));
                const double val = parse_real(toks[t].substr(colon + 1), loc(path, lineno));
                require(col > prev_col, loc(path, lineno) + ": columns must be strictly increasing");
                require(col >= 0 && col < b.num_features,
                        loc(path, lineno) + ": column out of range");
                prev_col = col;
                triplets.emplace_back(node, col, val);
            }
            ++expected_node;
        }
        require(expected_node == b.num_nodes,
                path.filename().string() + ": expected " + std::to_string(b.num_nodes) +
                    " rows, got " + std::to_string(expected_node));
        b.features = CsrMatrix::from_triplets(b.num_nodes, b.num_features, std::move(triplets));
    }

    {
        const auto path = dir / "labels.tsv";
        std::ifstream in = open_text(path);
        std::string line;
        int lineno = 0;
        int expected_node = 0;
        b.labels.reserve(static_cast<size_t>(b.num_nodes));
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto toks = split_tabs(line);
            require(toks.size() == 2, loc(path, lineno) + ": expected 'node_id<TAB>class_id'");
            const int node = parse_int(toks[0], loc(path, lineno));
            const int cls = parse_int(toks[1], loc(path, lineno));
            require(node == expected_node, loc(path, lineno) + ": node ids must ascend from 0");
            require(cls >= 0 && cls < b.num_classes,
                    loc(path, lineno) + ": class id " + std::to_string(cls) + " out of range [0," +
                        std::to_string(b.num_classes) + ")");
            b.labels.push_back(cls);
            ++expected_node;
        }
        require(expected_node == b.num_nodes,
                path.filename().string() + ": expected " + std::to_string(b.num_nodes) +
                    " rows, got " + std::to_string(expected_node));
    }

    validate_bundle(b, warnings);
    return b;
}

void save_bundle(const GraphBundle& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        nlohmann::json meta;
        meta["name"] = b.name;
        meta["num_nodes"] = b.num_nodes;
        meta["num_features"] = b.num_features;
        meta["num_classes"] = b.num_classes;
        std::ofstream out(dir / "meta.json");
        require(out.good(), "cannot write " + (dir / "meta.json").string());
        out << meta.dump(2) << "\n";
    }
    {
        std::ofstream out(dir / "edges.tsv");
        require(out.good(), "cannot write " + (dir / "edges.tsv").string());
        for (const auto& [u, v] : b.edges) out << u << '\t' << v << '\n';
    }
    {
        std::ofstream out(dir / "features.srm");
        require(out.good(), "cannot write " + (dir / "features.srm").string());
        for (int i = 0; i < b.num_nodes; ++i) {
            out << i;
            for (int p = b.features.row_ptr[i]; p < b.features.row_ptr[i + 1]; ++p)
                out << '\t' << b.features.col_idx[p] << ':' << format_real(b.features.vals[p]);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "labels.tsv");
        require(out.good(), "cannot write " + (dir / "labels.tsv").string());
        for (int i = 0; i < b.num_nodes; ++i) out << i << '\t' << b.labels[static_cast<size_t>(i)] << '\n';
    }
}

NormalizedAdjacency normalize_adjacency(const GraphBundle& b) {
    std::vector<int> degree(static_cast<size_t>(b.num_nodes), 0);
    for (const auto& [u, v] : b.edges) {
        degree[static_cast<size_t>(u)]++;
        degree[static_cast<size_t>(v)]++;
    }
    std::vector<std::tuple<int, int, double>> triplets;
    triplets.reserve(b.edges.size() * 2 + static_cast<size_t>(b.num_nodes));
    auto weight = [&](int i, int j) {
        const double di = static_cast<double>(degree[static_cast<size_t>(i)] + 1);
        const double dj = static_cast<double>(degree[static_cast<size_t>(j)] + 1);
        return 1.0 / std::sqrt(di * dj);
    };
    for (int i = 0; i < b.num_nodes; ++i) triplets.emplace_back(i, i, weight(i, i));
    for (const auto& [u, v] : b.edges) {
        triplets.emplace_back(u, v, weight(u, v));
        triplets.emplace_back(v, u, weight(v, u));
    }
    NormalizedAdjacency adj;
    adj.matrix = CsrMatrix::from_triplets(b.num_nodes, b.num_nodes, std::move(triplets));
    return adj;
}

GraphBundle generate_synthetic(int num_nodes, int num_classes, int num_features,
                               double edge_prob_in, double edge_prob_out, double feature_signal,
                               uint64_t seed) {
    require(num_nodes >= num_classes && num_classes >= 1, "synthetic: need num_nodes >= num_classes");
    require(num_features >= num_classes, "synthetic: need num_features >= num_classes");
    require(edge_prob_out >= 0.0 && edge_prob_in > edge_prob_out && edge_prob_in <= 1.0,
            "synthetic: need edge_prob_in > edge_prob_out >= 0");
    require(feature_signal > 0.0 && feature_signal <= 1.0, "synthetic: feature_signal in (0,1]");

    GraphBundle b;
    b.num_nodes = num_nodes;
    b.num_classes = num_classes;
    b.num_features = num_features;
    b.name = "synthetic-n" + std::to_string(num_nodes) + "-k" + std::to_string(num_classes) +
             "-s" + std::to_string(seed);

    b.labels.resize(static_cast<size_t>(num_nodes));
    for (int i = 0; i < num_nodes; ++i) b.labels[static_cast<size_t>(i)] = i % num_classes;

    const RngStream root(seed);
    {
        RngStream rng = root.substream("edges");
        for (int u = 0; u < num_nodes; ++u)
            for (int v = u + 1; v < num_nodes; ++v) {
                const double p = b.labels[static_cast<size_t>(u)] == b.labels[static_cast<size_t>(v)]
                                     ? edge_prob_in
                                     : edge_prob_out;
                if (rng.uniform() < p) b.edges.emplace_back(u, v);
            }
    }
    {
        RngStream rng = root.substream("features");
        const int block = num_features / num_classes;
        std::vector<std::tuple<int, int, double>> triplets;
        for (int i = 0; i < num_nodes; ++i) {
            const int start = b.labels[static_cast<size_t>(i)] * block;
            int count = 0;
            for (int c = 0; c < block; ++c)
                if (rng.uniform() < feature_signal) {
                    triplets.emplace_back(i, start + c, 1.0);
                    ++count;
                }
            if (count == 0)  // guarantee at least one nonzero feature
                triplets.emplace_back(i, start + static_cast<int>(rng.uniform_index(
                                             static_cast<size_t>(block))),
                                      1.0);
        }
        b.features = CsrMatrix::from_triplets(num_nodes, num_features, std::move(triplets));
    }

    validate_bundle(b);
    return b;
}

SplitSpec make_splits(const GraphBundle& b, uint64_t test_seed, int64_t seed_val,
                      int64_t seed_init, int test_size, int val_size, int per_class_init) {
    require(test_size >= 0 && val_size >= 0 && per_class_init >= 1, "make_splits: bad sizes");
    const int64_t need = static_cast<int64_t>(test_size) + val_size +
                         static_cast<int64_t>(per_class_init) * b.num_classes;
    require(need <= b.num_nodes, "make_splits: infeasible sizes (test + val + init > num_nodes)");

    SplitSpec s;
    s.seed_val = seed_val;
    s.seed_init = seed_init;

    std::vector<int> all(static_cast<size_t>(b.num_nodes));
    for (int i = 0; i < b.num_nodes; ++i) all[static_cast<size_t>(i)] = i;

    {
        RngStream rng = RngStream(test_seed).substream("split-test");
        s.test_ids = sample_sorted(all, static_cast<size_t>(test_size), rng);
    }
    std::vector<int> non_test;
    std::set_difference(all.begin(), all.end(), s.test_ids.begin(), s.test_ids.end(),
                        std::back_inserter(non_test));
    {
        RngStream rng = RngStream(static_cast<uint64_t>(seed_val)).substream("split-val");
        s.val_ids = sample_sorted(non_test, static_cast<size_t>(val_size), rng);
    }
    std::vector<int> remaining;
    std::set_difference(non_test.begin(), non_test.end(), s.val_ids.begin(), s.val_ids.end(),
                        std::back_inserter(remaining));

    std::vector<std::vector<int>> by_class(static_cast<size_t>(b.num_classes));
    for (int node : remaining) by_class[static_cast<size_t>(b.labels[static_cast<size_t>(node)])].push_back(node);
    RngStream init_rng = RngStream(static_cast<uint64_t>(seed_init)).substream("split-init");
    for (int k = 0; k < b.num_classes; ++k) {
        auto& pool = by_class[static_cast<size_t>(k)];
        require(static_cast<int>(pool.size()) >= per_class_init,
                "make_splits: class " + std::to_string(k) + " has only " +
                    std::to_string(pool.size()) + " nodes outside test/val; need " +
                    std::to_string(per_class_init));
        const auto chosen = sample_sorted(pool, static_cast<size_t>(per_class_init), init_rng);
        s.init_labeled_ids.insert(s.init_labeled_ids.end(), chosen.begin(), chosen.end());
    }
    std::sort(s.init_labeled_ids.begin(), s.init_labeled_ids.end());
    return s;
}

}  // namespace seal
