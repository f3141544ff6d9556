#include "clucert/dissimilarity.hpp"
#include "clucert/partition.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace clucert;

namespace {

DissimilarityMatrix random_matrix(std::mt19937_64& rng, Index n) {
    return DissimilarityMatrix(oracle::random_dissimilarity(rng, n));
}

Dataset continuous_dataset(Matrix x) {
    Dataset data;
    data.features = std::move(x);
    data.kind = DataKind::continuous;
    return data;
}

}  // namespace

TEST_CASE("pam: c = N gives singleton medoids at cost zero") {
    std::mt19937_64 rng(3);
    const auto m = random_matrix(rng, 6);
    const auto result = pam_full(m, 6);
    CHECK(result.cost == 0.0);
    for (Index i = 0; i < 6; ++i) CHECK(result.partition.label(i) == i + 1);
}

TEST_CASE("pam: c = 1 picks the row-sum minimizer") {
    Matrix d(4, 4);
    d << 0, 1, 9, 9,
         1, 0, 1, 9,
         9, 1, 0, 1,
         9, 9, 1, 0;
    const auto result = pam_full(DissimilarityMatrix(d), 1);
    Index expected = 0;
    Scalar best = d.row(0).sum();
    for (Index i = 1; i < 4; ++i)
        if (d.row(i).sum() < best) {
            best = d.row(i).sum();
            expected = i;
        }
    CHECK(result.medoids == std::vector<Index>{expected});
    CHECK(result.cost == doctest::Approx(best));
}

TEST_CASE("pam reaches the exhaustive optimum on clustered 6-point instances") {
    std::mt19937_64 rng(17);
    std::normal_distribution<Scalar> noise(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        // two well-separated groups of three points
        Matrix x(6, 2);
        for (Index i = 0; i < 6; ++i) {
            x(i, 0) = (i < 3 ? 0.0 : 12.0) + noise(rng);
            x(i, 1) = noise(rng);
        }
        Dataset data;
        data.features = x;
        data.kind = DataKind::continuous;
        const auto m = euclidean(data);
        const auto result = pam_full(m, 2);
        const Scalar best = oracle::pam_exhaustive_cost(m.values(), 2);
        CHECK(result.cost == doctest::Approx(best).epsilon(1e-12));
        CHECK(result.cost <= result.build_cost + 1e-12);
    }
}

TEST_CASE("pam: swap phase reaches a swap-local optimum, never below the global") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 6 + static_cast<Index>(trial % 3);
        const auto m = random_matrix(rng, n);
        for (int c : {2, 3}) {
            const auto result = pam_full(m, c);
            CHECK(result.cost >= oracle::pam_exhaustive_cost(m.values(), c) - 1e-12);
            CHECK(result.cost <= result.build_cost + 1e-12);
            // no single medoid/non-medoid exchange improves the returned set
            auto medoids = result.medoids;
            for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
                const Index original = medoids[slot];
                for (Index h = 0; h < n; ++h) {
                    if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
                    medoids[slot] = h;
                    Scalar cost = 0;
                    for (Index i = 0; i < n; ++i) {
                        Scalar nearest = std::numeric_limits<Scalar>::infinity();
                        for (Index mid : medoids) nearest = std::min(nearest, m(i, mid));
                        cost += nearest;
                    }
                    CHECK(cost >= result.cost - 1e-12);
                    medoids[slot] = original;
                }
            }
        }
    }
}

TEST_CASE("pam rejects c outside 1..N") {
    std::mt19937_64 rng(5);
    const auto m = random_matrix(rng, 4);
    CHECK_THROWS_AS(pam(m, 5), Error);
    CHECK_THROWS_AS(pam(m, 0), Error);
}

TEST_CASE("hierarchical: c = N gives singletons, c = 1 one cluster") {
    std::mt19937_64 rng(29);
    const auto m = random_matrix(rng, 5);
    for (Linkage linkage : {Linkage::average, Linkage::complete, Linkage::ward}) {
        const auto singles = hierarchical(m, 5, linkage);
        for (Index i = 0; i < 5; ++i) CHECK(singles.label(i) == i + 1);
        const auto all = hierarchical(m, 1, linkage);
        for (Index i = 0; i < 5; ++i) CHECK(all.label(i) == 1);
    }
}

TEST_CASE("hierarchical groups well-separated pairs under every linkage") {
    Matrix x(4, 1);
    x << 0.0, 0.1, 10.0, 10.1;
    const auto m = euclidean(continuous_dataset(x));
    for (Linkage linkage : {Linkage::average, Linkage::complete, Linkage::ward}) {
        const auto z = hierarchical(m, 2, linkage);
        CHECK(z.label(0) == z.label(1));
        CHECK(z.label(2) == z.label(3));
        CHECK(z.label(0) != z.label(2));
    }
}

TEST_CASE("average-linkage merge heights match the naive agglomeration") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_matrix(rng, 7);
        const auto tree = agglomerate(m, Linkage::average);
        const auto ref = oracle::naive_linkage_heights(m.values(), false);
        REQUIRE(tree.merges.size() == ref.size());
        for (std::size_t t = 0; t < ref.size(); ++t)
            CHECK(tree.merges[t].height == doctest::Approx(ref[t]).epsilon(1e-12));
    }
}

TEST_CASE("complete-linkage merge heights match the naive agglomeration") {
    std::mt19937_64 rng(37);
    const auto m = random_matrix(rng, 7);
    const auto tree = agglomerate(m, Linkage::complete);
    const auto ref = oracle::naive_linkage_heights(m.values(), true);
    for (std::size_t t = 0; t < ref.size(); ++t)
        CHECK(tree.merges[t].height == doctest::Approx(ref[t]).epsilon(1e-12));
}

TEST_CASE("kmeans: c = 1 returns the feature mean") {
    Matrix x(5, 2);
    x << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
    const auto result = kmeans_full(continuous_dataset(x), 1, 42);
    CHECK((result.centers.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
    for (Index i = 0; i < 5; ++i) CHECK(result.partition.label(i) == 1);
}

TEST_CASE("kmeans recovers two tight blobs exactly") {
    Matrix x(8, 2);
    x << 0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 0.1, 0.1,
         5.0, 5.0, 5.1, 5.0, 5.0, 5.1, 5.1, 5.1;
    const auto z = kmeans(continuous_dataset(x), 2, 9);
    for (Index i = 1; i < 4; ++i) CHECK(z.label(i) == z.label(0));
    for (Index i = 5; i < 8; ++i) CHECK(z.label(i) == z.label(4));
    CHECK(z.label(0) != z.label(4));
}

TEST_CASE("kmeans attains the exhaustive-optimum WSS on 8 points") {
    std::mt19937_64 rng(43);
    std::normal_distribution<Scalar> normal;
    for (int trial = 0; trial < 5; ++trial) {
        Matrix x(8, 2);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 2; ++j) x(i, j) = normal(rng);
        const auto result = kmeans_full(continuous_dataset(x), 2, 1000 + trial, 20);
        const Scalar best = oracle::kmeans_exhaustive_wss(x, 2);
        CHECK(result.wss <= best + 1e-9);
    }
}

TEST_CASE("kmeans rejects binary data") {
    Dataset data;
    data.features.resize(4, 2);
    data.features << 0, 1, 1, 0, 1, 1, 0, 0;
    data.kind = DataKind::binary;
    CHECK_THROWS_AS(kmeans(data, 2, 1), Error);
}

TEST_CASE("silhouette trivial values") {
    // two clusters of two points: within distance eps, across distance 1
    Matrix d(4, 4);
    d << 0.0, 0.2, 1.0, 1.0,
         0.2, 0.0, 1.0, 1.0,
         1.0, 1.0, 0.0, 0.2,
         1.0, 1.0, 0.2, 0.0;
    const auto z = Partition::from_labels({1, 1, 2, 2}, 2);
    const DissimilarityMatrix m(d);
    CHECK(silhouette_width(m, z, 0) == doctest::Approx(0.8));

    // a_i = b_i > 0 forces 0
    Matrix e(3, 3);
    e << 0, 1, 1,
         1, 0, 1,
         1, 1, 0;
    CHECK(silhouette_width(DissimilarityMatrix(e), Partition::from_labels({1, 1, 2}, 2), 0) ==
          doctest::Approx(0.0));

    // a_i = 0, b_i > 0 gives a perfect fit
    Matrix f(3, 3);
    f << 0, 0, 1,
         0, 0, 1,
         1, 1, 0;
    CHECK(silhouette_width(DissimilarityMatrix(f), Partition::from_labels({1, 1, 2}, 2), 0) ==
          doctest::Approx(1.0));
}

TEST_CASE("silhouette agrees with the definition on a 5-point instance") {
    std::mt19937_64 rng(53);
    const auto m = random_matrix(rng, 5);
    const auto labels = std::vector<int>{1, 2, 1, 2, 1};
    const auto z = Partition::from_labels(labels, 2);
    for (Index i = 0; i < 5; ++i)
        CHECK(silhouette_width(m, z, i) ==
              doctest::Approx(oracle::naive_silhouette(m.values(), labels, 2, i)).epsilon(1e-12));
}

TEST_CASE("silhouette stays in [-1,1] and is scale invariant") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 5 + static_cast<Index>(trial % 5);
        const auto m = random_matrix(rng, n);
        const int c = 2 + trial % 2;
        const auto z = Partition::from_labels(oracle::random_partition_labels(rng, n, c), c);
        const auto scaled = m.scaled(7.5);
        for (Index i = 0; i < n; ++i) {
            const Scalar s = silhouette_width(m, z, i);
            CHECK(s >= -1.0);
            CHECK(s <= 1.0);
            CHECK(s == doctest::Approx(silhouette_width(scaled, z, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("silhouette needs at least two clusters") {
    std::mt19937_64 rng(61);
    const auto m = random_matrix(rng, 4);
    const auto z = Partition::from_labels({1, 1, 1, 1}, 1);
    CHECK_THROWS_AS(silhouette_width(m, z, 0), Error);
}

TEST_CASE("partition text format round-trips") {
    const auto z = Partition::from_labels({2, 1, 2, 3, 1}, 3);
    const auto path = std::filesystem::temp_directory_path() / "clucert_partition.csv";
    save_partition(z, path);
    const auto loaded = load_partition(path);
    CHECK(loaded.labels == z.labels);
    CHECK(loaded.clusters == z.clusters);
    std::filesystem::remove(path);
}
