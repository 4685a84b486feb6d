#include <doctest.h>

#include <cmath>

#include "seal/discriminator.hpp"
#include "seal/error.hpp"
#include "seal/gradcheck.hpp"
#include "seal/ops.hpp"

using namespace seal;

namespace {

/// Discriminator whose logits equal the bias row bc for any input.
DiscParams constant_logit_disc(int d_in, const std::vector<double>& logits) {
    DiscParams p = DiscParams::init(d_in, 4, 4, static_cast<int>(logits.size()), 0.01, 0.5, 0.2,
                                    RngStream(1));
    scale_inplace(p.wc, 0.0);
    for (size_t k = 0; k < logits.size(); ++k) p.bc.values[k] = logits[k];
    return p;
}

DenseMatrix random_reps(int rows, int cols, uint64_t seed, double lo = -1.0, double hi = 1.0) {
    DenseMatrix m(rows, cols);
    RngStream rng(seed);
    for (double& v : m.values) v = rng.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("labeled probability follows the zero-logit recast") {
    const DenseMatrix reps = random_reps(3, 2, 5);

    // All-zero logits with K=3: S = 3, D = 3/4.
    const DiscParams zero3 = constant_logit_disc(2, {0.0, 0.0, 0.0});
    const DiscActivations a3 = disc_forward(reps, zero3, false, nullptr);
    for (double p : a3.labeled_prob) CHECK(p == doctest::Approx(0.75));

    // K=1 with logit ln 3: D = 3/4.
    const DiscParams log3 = constant_logit_disc(2, {std::log(3.0)});
    const DiscActivations a1 = disc_forward(reps, log3, false, nullptr);
    for (double p : a1.labeled_prob) CHECK(p == doctest::Approx(0.75));

    // Huge logit: no overflow, probability saturates inside (0, 1).
    const DiscParams huge = constant_logit_disc(2, {700.0, 0.0, 0.0});
    const DiscActivations ah = disc_forward(reps, huge, false, nullptr);
    for (double p : ah.labeled_prob) {
        CHECK(p == doctest::Approx(1.0));
        CHECK(p < 1.0);
        CHECK(p > 0.0);
    }
}

TEST_CASE("fixing the implicit last logit to zero matches the (K+1)-softmax") {
    RngStream rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(7));  // K in {2..8}
        DenseMatrix full(1, k + 1);
        for (double& v : full.values) v = rng.uniform(-8.0, 8.0);
        const DenseMatrix soft = softmax_rows(full);
        const double via_softmax = 1.0 - soft.at(0, k);

        DenseMatrix shifted(1, k);
        for (int j = 0; j < k; ++j) shifted.at(0, j) = full.at(0, j) - full.at(0, k);
        const double d = sigmoid(logsumexp_rows(shifted)[0]);
        CHECK(std::abs(via_softmax - d) <= 1e-12);
    }
}

TEST_CASE("supervised loss: uniform, confident, and hand-computed logits") {
    const DenseMatrix reps = random_reps(2, 2, 6);
    const std::vector<int> rows = {0, 1};
    const std::vector<int> labels = {0, 1};

    const DiscParams uniform = constant_logit_disc(2, {0.0, 0.0, 0.0});
    const DiscActivations au = disc_forward(reps, uniform, false, nullptr);
    CHECK(disc_sup_loss(au, rows, labels) == doctest::Approx(std::log(3.0)));

    DiscActivations hand;
    hand.logits = DenseMatrix(1, 2);
    hand.logits.at(0, 0) = 1.0;
    hand.logits.at(0, 1) = 0.0;
    hand.row_logsumexp = logsumexp_rows(hand.logits);
    const std::vector<int> one_row = {0};
    const std::vector<int> class0 = {0};
    // -ln(e / (e + 1)) = ln(1 + 1/e)
    CHECK(disc_sup_loss(hand, one_row, class0) == doctest::Approx(0.31326168751822286));

    hand.logits.at(0, 0) = 1000.0;
    hand.row_logsumexp = logsumexp_rows(hand.logits);
    CHECK(disc_sup_loss(hand, one_row, class0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(disc_sup_loss(au, {}, {}), Error);
}

TEST_CASE("unsupervised loss: equilibrium, perfect separation, hand case") {
    auto acts_with_probs = [](const std::vector<double>& ps) {
        DiscActivations a;
        a.logits = DenseMatrix(static_cast<int>(ps.size()), 1);
        a.row_logsumexp.resize(ps.size());
        a.labeled_prob = ps;
        for (size_t i = 0; i < ps.size(); ++i)
            a.row_logsumexp[i] = std::log(ps[i] / (1.0 - ps[i]));
        return a;
    };

    // D = 0.5 everywhere: the GAN equilibrium value 2 ln 2.
    const DiscActivations eq = acts_with_probs({0.5, 0.5});
    CHECK(disc_unsup_loss(eq, std::vector<int>{0}, std::vector<int>{1}) ==
          doctest::Approx(2.0 * std::log(2.0)));

    const DiscActivations sep = acts_with_probs({1.0 - 1e-12, 1e-12});
    CHECK(disc_unsup_loss(sep, std::vector<int>{0}, std::vector<int>{1}) ==
          doctest::Approx(0.0).epsilon(1e-9));

    // L+ probs {0.9, 0.8}, U- probs {0.3}.
    const DiscActivations hand = acts_with_probs({0.9, 0.8, 0.3});
    const double expect = -((std::log(0.9) + std::log(0.8)) / 2.0 + std::log(0.7));
    CHECK(disc_unsup_loss(hand, std::vector<int>{0, 1}, std::vector<int>{2}) ==
          doctest::Approx(expect));
    CHECK(expect == doctest::Approx(0.5209).epsilon(1e-3));

    CHECK_THROWS_AS(disc_unsup_loss(hand, std::vector<int>{}, std::vector<int>{2}),
                    PoolExhaustedError);
}

TEST_CASE("total loss balances the two terms with alpha") {
    CHECK(disc_total_loss(1.0, 0.5, 0.6) == doctest::Approx(1.1));
    CHECK(disc_total_loss(7.0, 0.5, 0.0) == 0.5);  // the alpha = 0 ablation form
    CHECK(disc_total_loss(0.0, 0.9, 2.0) == doctest::Approx(0.9));
    CHECK_THROWS_AS(disc_total_loss(1.0, 1.0, -0.1), Error);
}

TEST_CASE("labeled probability is strictly inside (0,1) for finite logits") {
    RngStream rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const DenseMatrix reps = random_reps(4, 3, 1000 + trial, -3.0, 3.0);
        const DiscParams p = DiscParams::init(3, 8, 8, 4, 0.01, 0.5, 0.2, RngStream(trial));
        const DiscActivations a = disc_forward(reps, p, false, nullptr);
        for (double d : a.labeled_prob) {
            CHECK(d > 0.0);
            CHECK(d < 1.0);
        }
    }
}

TEST_CASE("feature matching: identical pools give zero term and zero gradient") {
    const DiscParams p = DiscParams::init(3, 8, 8, 2, 0.01, 0.5, 0.2, RngStream(3));
    DenseMatrix reps(4, 3);
    // Rows 0,1 identical to rows 2,3: pool means coincide.
    RngStream rng(8);
    for (int j = 0; j < 3; ++j) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        reps.at(0, j) = a;
        reps.at(1, j) = b;
        reps.at(2, j) = a;
        reps.at(3, j) = b;
    }
    const auto fm = feature_matching_term(reps, p, std::vector<int>{0, 1}, std::vector<int>{2, 3});
    CHECK(fm.term == doctest::Approx(0.0));
    for (double g : fm.rep_grad.values) CHECK(g == doctest::Approx(0.0));

    CHECK_THROWS_AS(feature_matching_term(reps, p, std::vector<int>{}, std::vector<int>{2}),
                    PoolExhaustedError);
}

TEST_CASE("feature matching term is the squared distance of pool means") {
    // Identity-like discriminator: hidden2 = reps for positive inputs.
    DiscParams p = DiscParams::init(2, 2, 2, 2, 0.01, 0.5, 0.2, RngStream(4));
    scale_inplace(p.wa, 0.0);
    scale_inplace(p.wb, 0.0);
    p.wa.at(0, 0) = 1.0;
    p.wa.at(1, 1) = 1.0;
    p.wb.at(0, 0) = 1.0;
    p.wb.at(1, 1) = 1.0;
    DenseMatrix reps(2, 2);
    reps.at(0, 0) = 2.0;  // pool means differ by e1
    reps.at(0, 1) = 1.0;
    reps.at(1, 0) = 1.0;
    reps.at(1, 1) = 1.0;
    const auto fm = feature_matching_term(reps, p, std::vector<int>{0}, std::vector<int>{1});
    CHECK(fm.term == doctest::Approx(1.0));
}

TEST_CASE("feature matching gradient matches finite differences on a small instance") {
    const DiscParams p = DiscParams::init(3, 8, 8, 2, 0.01, 0.5, 0.2, RngStream(5));
    DenseMatrix reps = random_reps(6, 3, 77, 0.5, 2.0);  // positive, away from kinks
    const std::vector<int> lp = {0, 1, 2}, um = {3, 4, 5};
    const auto loss = [&] { return feature_matching_term(reps, p, lp, um).term; };
    const auto fm = feature_matching_term(reps, p, lp, um);
    DenseMatrix* params[] = {&reps};
    const DenseMatrix* analytic[] = {&fm.rep_grad};
    CHECK(finite_difference_check(loss, params, analytic) < 1e-6);
}

TEST_CASE("log-likelihood term gradient matches finite differences") {
    DiscParams p = DiscParams::init(3, 8, 8, 2, 0.01, 0.5, 0.2, RngStream(6));
    for (double& v : p.ba.values) v += 2.0;  // keep pre-activations off the kinks
    for (double& v : p.bb.values) v += 2.0;
    DenseMatrix reps = random_reps(5, 3, 78, 0.5, 1.5);
    const std::vector<int> rows = {0, 1, 2, 3, 4};
    const auto loss = [&] { return log_likelihood_term(reps, p, rows).term; };
    const auto ll = log_likelihood_term(reps, p, rows);
    DenseMatrix* params[] = {&reps};
    const DenseMatrix* analytic[] = {&ll.rep_grad};
    CHECK(finite_difference_check(loss, params, analytic) < 1e-6);
}

TEST_CASE("train_d_epoch: zero learning rate keeps parameters, same seed repeats exactly") {
    const DenseMatrix reps = random_reps(8, 3, 79);
    const std::vector<int> l_rows = {0, 1}, l_labels = {0, 1}, lp = {0, 1, 2, 3}, um = {4, 5, 6, 7};

    DiscParams frozen = DiscParams::init(3, 8, 8, 2, 0.0, 0.5, 0.2, RngStream(7));
    const std::vector<double> before_wa = frozen.wa.values;
    RngStream drop(1);
    train_d_epoch(reps, l_rows, l_labels, lp, um, 0.6, frozen, drop);
    CHECK(frozen.wa.values == before_wa);

    auto run = [&] {
        DiscParams p = DiscParams::init(3, 8, 8, 2, 0.01, 0.5, 0.2, RngStream(7));
        RngStream d(42);
        for (int i = 0; i < 3; ++i) train_d_epoch(reps, l_rows, l_labels, lp, um, 0.6, p, d);
        return p.wa.values;
    };
    CHECK(run() == run());
}
