#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seal/error.hpp"
#include "seal/metrics.hpp"
#include "seal/rng.hpp"

using namespace seal;

namespace {

ConfusionTable random_table(int k, RngStream& rng) {
    ConfusionTable t(k);
    const int n = 20 + static_cast<int>(rng.uniform_index(200));
    for (int i = 0; i < n; ++i)
        t.add(static_cast<int>(rng.uniform_index(static_cast<size_t>(k))),
              static_cast<int>(rng.uniform_index(static_cast<size_t>(k))));
    return t;
}

ConfusionTable permuted(const ConfusionTable& t, const std::vector<int>& perm) {
    ConfusionTable out(t.num_classes);
    for (int i = 0; i < t.num_classes; ++i)
        for (int j = 0; j < t.num_classes; ++j)
            for (int64_t c = 0; c < t.at(i, j); ++c) out.add(perm[i], perm[j]);
    return out;
}

}  // namespace

TEST_CASE("micro_f1: diagonal, mixed, and zero-diagonal tables") {
    ConfusionTable diag(3);
    diag.add(0, 0);
    diag.add(1, 1);
    diag.add(2, 2);
    CHECK(micro_f1(diag) == 1.0);
    CHECK(macro_f1(diag) == 1.0);

    ConfusionTable t(2);
    // [[3,1],[1,3]]
    for (int i = 0; i < 3; ++i) t.add(0, 0);
    t.add(0, 1);
    t.add(1, 0);
    for (int i = 0; i < 3; ++i) t.add(1, 1);
    CHECK(micro_f1(t) == doctest::Approx(0.75));

    ConfusionTable zero(2);
    zero.add(0, 1);
    zero.add(1, 0);
    CHECK(micro_f1(zero) == 0.0);

    ConfusionTable empty(2);
    CHECK_THROWS_AS(micro_f1(empty), Error);
    CHECK_THROWS_AS(macro_f1(empty), Error);
}

TEST_CASE("macro_f1 hand-computed cases including zero-support classes") {
    ConfusionTable t(2);
    // [[2,0],[2,0]]: class0 P=0.5 R=1 F1=2/3; class1 P+R=0 so F1=0.
    t.add(0, 0);
    t.add(0, 0);
    t.add(1, 0);
    t.add(1, 0);
    CHECK(macro_f1(t) == doctest::Approx(1.0 / 3.0));

    ConfusionTable balanced(2);
    // [[1,1],[1,1]]: both classes P=R=0.5 -> F1=0.5.
    balanced.add(0, 0);
    balanced.add(0, 1);
    balanced.add(1, 0);
    balanced.add(1, 1);
    CHECK(macro_f1(balanced) == doctest::Approx(0.5));
}

TEST_CASE("micro_f1 equals accuracy for every single-label table") {
    RngStream rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(6));
        const ConfusionTable t = random_table(k, rng);
        int64_t trace = 0;
        for (int i = 0; i < k; ++i) trace += t.at(i, i);
        const double accuracy = static_cast<double>(trace) / static_cast<double>(t.total());
        CHECK(micro_f1(t) == doctest::Approx(accuracy).epsilon(1e-15));
    }
}

TEST_CASE("both metrics are invariant under simultaneous row/column permutation") {
    RngStream rng(405);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(5));
        const ConfusionTable t = random_table(k, rng);
        std::vector<int> perm(static_cast<size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        for (size_t i = 0; i + 1 < perm.size(); ++i)
            std::swap(perm[i], perm[i + rng.uniform_index(perm.size() - i)]);
        const ConfusionTable p = permuted(t, perm);
        CHECK(micro_f1(p) == doctest::Approx(micro_f1(t)).epsilon(1e-12));
        CHECK(macro_f1(p) == doctest::Approx(macro_f1(t)).epsilon(1e-12));
        CHECK(micro_f1(t) >= 0.0);
        CHECK(micro_f1(t) <= 1.0);
        CHECK(macro_f1(t) >= 0.0);
        CHECK(macro_f1(t) <= 1.0);
    }
}

TEST_CASE("aggregate_values: mean and sample standard deviation") {
    const double two[] = {0.7, 0.9};
    const Aggregate a = aggregate_values(two);
    CHECK(a.mean == doctest::Approx(0.8));
    CHECK(a.stddev == doctest::Approx(std::sqrt(0.02)));  // ~0.1414

    const double same[] = {0.5, 0.5, 0.5};
    CHECK(aggregate_values(same).stddev == 0.0);

    const double one[] = {0.42};
    const Aggregate single = aggregate_values(one);
    CHECK(single.mean == 0.42);
    CHECK(single.stddev == 0.0);

    CHECK_THROWS_AS(aggregate_values({}), Error);
}
