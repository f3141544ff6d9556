#include "clucert/certainty.hpp"
#include "clucert/dissimilarity.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace clucert;

namespace {

DissimilarityMatrix random_matrix(std::mt19937_64& rng, Index n) {
    return DissimilarityMatrix(oracle::random_dissimilarity(rng, n));
}

}  // namespace

TEST_CASE("silhouette vector: original component equals the classic silhouette") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 6 + trial % 4;
        const int c = 2 + trial % 2;
        const auto m = random_matrix(rng, n);
        const auto z = Partition::from_labels(oracle::random_partition_labels(rng, n, c), c);
        for (Index i = 0; i < n; ++i) {
            const Vector sil = silhouette_vector(m, z, i);
            CHECK(sil(z.label(i) - 1) ==
                  doctest::Approx(silhouette_width(m, z, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("silhouette vector: mirror-symmetric point sees equal components") {
    // two mirror-image clusters; individual 0 sits exactly between them
    Matrix d(5, 5);
    d << 0.0, 1.0, 1.0, 1.0, 1.0,
         1.0, 0.0, 0.3, 2.0, 2.0,
         1.0, 0.3, 0.0, 2.0, 2.0,
         1.0, 2.0, 2.0, 0.0, 0.3,
         1.0, 2.0, 2.0, 0.3, 0.0;
    const auto z = Partition::from_labels({1, 1, 1, 2, 2}, 2);
    const Vector sil = silhouette_vector(DissimilarityMatrix(d), z, 0);
    CHECK(sil(0) == doctest::Approx(sil(1)).epsilon(1e-12));
}

TEST_CASE("silhouette vector matches the physical re-assignment oracle") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 6;
        const int c = 2 + trial % 2;
        const auto m = random_matrix(rng, n);
        const auto labels = oracle::random_partition_labels(rng, n, c);
        const auto z = Partition::from_labels(labels, c);
        for (Index i = 0; i < n; ++i) {
            const Vector sil = silhouette_vector(m, z, i);
            const auto ref = oracle::reassignment_silhouettes(m.values(), labels, c, i);
            for (int k = 0; k < c; ++k)
                CHECK(sil(k) == doctest::Approx(ref[static_cast<std::size_t>(k)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("silhouette-based certainty: fixed-point arithmetic cases") {
    // rows of the shifted matrix are sil + 1
    Matrix shifted(3, 2);
    shifted << 1.5, 1.5,    // sil (0.5, 0.5): symmetric
               2.0, 0.0,    // sil (1, -1): all mass left
               1.2, 0.6;    // sil (0.2, -0.4)
    const auto p2 = certainty_from_shifted(shifted, 2.0);
    CHECK(p2.p(0, 0) == doctest::Approx(0.5));
    CHECK(p2.p(1, 0) == doctest::Approx(1.0));
    CHECK(p2.p(1, 1) == doctest::Approx(0.0));
    CHECK(p2.p(2, 0) == doctest::Approx(0.8));   // 1.44 / 1.80
    CHECK(p2.p(2, 1) == doctest::Approx(0.2));
    const auto p1 = certainty_from_shifted(shifted, 1.0);
    CHECK(p1.p(0, 0) == doctest::Approx(0.5));
    CHECK(p1.p(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("silhouette-based certainty: all-zero row falls back to uniform") {
    Matrix shifted(1, 3);
    shifted << 0.0, 0.0, 0.0;
    const auto p = certainty_from_shifted(shifted, 2.5);
    for (int k = 0; k < 3; ++k) CHECK(p.p(0, k) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exponent must be positive") {
    Matrix shifted(1, 2);
    shifted << 1.0, 0.5;
    CHECK_THROWS_AS(certainty_from_shifted(shifted, 0.0), Error);
    CHECK_THROWS_AS(certainty_from_shifted(shifted, -1.0), Error);
    Matrix h(1, 2);
    h << 1.0, 2.0;
    CHECK_THROWS_AS(certainty_from_avg_dissim(h, 0.0), Error);
}

TEST_CASE("avg_dissim: trivial value, degenerate cluster, loop oracle") {
    Matrix d(5, 5);
    d << 0, 1, 1, 2, 3,
         1, 0, 4, 5, 6,
         1, 4, 0, 7, 8,
         2, 5, 7, 0, 9,
         3, 6, 8, 9, 0;
    const DissimilarityMatrix m(d);
    const auto z = Partition::from_labels({1, 2, 2, 1, 2}, 2);
    CHECK(avg_dissim(m, z, 0, 2) == doctest::Approx((1.0 + 1.0 + 3.0) / 3.0));
    CHECK(avg_dissim(m, z, 0, 1) == doctest::Approx(2.0));  // only individual 3
    // i at distance 1 from both members of the queried cluster
    const auto pair = Partition::from_labels({1, 2, 2, 1, 1}, 2);
    CHECK(avg_dissim(m, pair, 0, 2) == doctest::Approx(1.0));
    const auto singleton = Partition::from_labels({1, 2, 2, 2, 2}, 2);
    CHECK_THROWS_AS(avg_dissim(m, singleton, 0, 1), Error);  // cluster 1 is {0} only
    // loop oracle over every (i, k)
    for (Index i = 0; i < 5; ++i)
        for (int k = 1; k <= 2; ++k) {
            Scalar sum = 0;
            Index count = 0;
            for (Index j = 0; j < 5; ++j)
                if (j != i && z.label(j) == k) {
                    sum += d(i, j);
                    ++count;
                }
            CHECK(avg_dissim(m, z, i, k) == doctest::Approx(sum / count).epsilon(1e-12));
        }
}

TEST_CASE("dissimilarity-based certainty: arithmetic cases") {
    Matrix h(3, 2);
    h << 2.0, 2.0,   // symmetric
         1.0, 3.0,   // s = (1, 1/3)
         0.0, 5.0;   // zero-dissimilarity limit
    const auto p = certainty_from_avg_dissim(h, 1.0);
    CHECK(p.p(0, 0) == doctest::Approx(0.5));
    CHECK(p.p(1, 0) == doctest::Approx(0.75));
    CHECK(p.p(1, 1) == doctest::Approx(0.25));
    CHECK(p.p(2, 0) == doctest::Approx(1.0));
    CHECK(p.p(2, 1) == doctest::Approx(0.0));
}

TEST_CASE("both measures agree with the straight-formula evaluator") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<Scalar> exponent(0.5, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 8;
        const int c = 3;
        const auto m = random_matrix(rng, n);
        const auto labels = oracle::random_partition_min2(rng, n, c);
        const auto z = Partition::from_labels(labels, c);
        const Scalar l = exponent(rng);
        const Scalar v = exponent(rng);
        const auto p1 = certainty_silhouette(m, z, l);
        const auto p2 = certainty_dissimilarity(m, z, v);
        for (Index i = 0; i < n; ++i) {
            const auto ref1 = oracle::certainty_row_silhouette(m.values(), labels, c, i, l);
            const auto ref2 = oracle::certainty_row_dissimilarity(m.values(), labels, c, i, v);
            for (int k = 0; k < c; ++k) {
                CHECK(std::abs(p1.p(i, k) - ref1[static_cast<std::size_t>(k)]) < 1e-12);
                CHECK(std::abs(p2.p(i, k) - ref2[static_cast<std::size_t>(k)]) < 1e-12);
            }
        }
    }
}

TEST_CASE("rows are stochastic and scale invariant; argmax independent of exponent") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<Scalar> exponent(0.25, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 7 + trial % 4;
        const int c = 2 + trial % 2;
        const auto m = random_matrix(rng, n);
        const auto z = Partition::from_labels(oracle::random_partition_min2(rng, n, c), c);
        const Scalar e = exponent(rng);
        for (MeasureKind kind :
             {MeasureKind::silhouette_based, MeasureKind::dissimilarity_based}) {
            const auto raw = kind == MeasureKind::silhouette_based
                                 ? shifted_silhouette_matrix(m, z)
                                 : average_dissimilarity_matrix(m, z);
            const auto p = certainty_at(raw, kind, e);
            const auto scaled_raw = kind == MeasureKind::silhouette_based
                                        ? shifted_silhouette_matrix(m.scaled(1000.0), z)
                                        : average_dissimilarity_matrix(m.scaled(1000.0), z);
            const auto scaled = certainty_at(scaled_raw, kind, e);
            for (Index i = 0; i < n; ++i) {
                Scalar row_sum = 0;
                for (int k = 0; k < c; ++k) {
                    CHECK(p.p(i, k) >= 0.0);
                    CHECK(p.p(i, k) <= 1.0);
                    row_sum += p.p(i, k);
                    CHECK(std::abs(p.p(i, k) - scaled.p(i, k)) < 1e-12);
                }
                CHECK(std::abs(row_sum - 1.0) < 1e-9);
            }
            // argmax invariance and sharpening between exponents 1 and 2
            const auto p1 = certainty_at(raw, kind, 1.0);
            const auto p2 = certainty_at(raw, kind, 2.0);
            for (Index i = 0; i < n; ++i) {
                Index arg1 = 0, arg2 = 0;
                for (int k = 1; k < c; ++k) {
                    if (p1.p(i, k) > p1.p(i, arg1)) arg1 = k;
                    if (p2.p(i, k) > p2.p(i, arg2)) arg2 = k;
                }
                CHECK(arg1 == arg2);
                // strict sharpening whenever the row maximum is unique
                bool unique = true;
                for (int k = 0; k < c; ++k)
                    if (k != arg1 && p1.p(i, k) == p1.p(i, arg1)) unique = false;
                if (unique && p1.p(i, arg1) < 1.0)
                    CHECK(p2.p(i, arg2) > p1.p(i, arg1) - 1e-15);
            }
        }
    }
}

TEST_CASE("two-cluster mirror symmetry: swapping labels permutes columns") {
    std::mt19937_64 rng(107);
    const auto m = random_matrix(rng, 8);
    auto labels = oracle::random_partition_min2(rng, 8, 2);
    std::vector<int> swapped(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) swapped[i] = 3 - labels[i];
    const auto p = certainty_silhouette(m, Partition::from_labels(labels, 2), 1.7);
    const auto q = certainty_silhouette(m, Partition::from_labels(swapped, 2), 1.7);
    for (Index i = 0; i < 8; ++i) {
        CHECK(p.p(i, 0) == doctest::Approx(q.p(i, 1)).epsilon(1e-12));
        CHECK(p.p(i, 1) == doctest::Approx(q.p(i, 0)).epsilon(1e-12));
    }
}
