#include "patgeo/geometry.hpp"

#include "helpers.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace patgeo;
using testutil::make_corpus;
using testutil::naive_abstraction_index;
using testutil::provision;
using testutil::random_labeled;

namespace {

LabeledVectors separated_example() {
    // X = {(0,0),(0,1)}, Y = {(10,0),(10,1)}
    Matrix x(4, 2);
    x(0, 0) = 0; x(0, 1) = 0;
    x(1, 0) = 0; x(1, 1) = 1;
    x(2, 0) = 10; x(2, 1) = 0;
    x(3, 0) = 10; x(3, 1) = 1;
    return {x, {Pole::First, Pole::First, Pole::Second, Pole::Second}};
}

LabeledVectors identical_groups_example() {
    // X = {(0,0),(1,1)}, Y = {(0,0),(1,1)}
    Matrix x(4, 2);
    x(1, 0) = 1; x(1, 1) = 1;
    x(3, 0) = 1; x(3, 1) = 1;
    return {x, {Pole::First, Pole::First, Pole::Second, Pole::Second}};
}

} // namespace

TEST_CASE("dimension_variance examples") {
    SECTION("constant scores give zero variance") {
        std::vector<ProvisionData> rows;
        for (int i = 0; i < 5; ++i)
            rows.push_back(provision("p" + std::to_string(i), {}, {}, 2, -1, 3));
        auto v = dimension_variance(make_corpus(rows, 1, 1));
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
        CHECK(v[2] == 0.0);
    }
    SECTION("[-3,-3,3,3] has population variance 9") {
        std::vector<ProvisionData> rows;
        rows.push_back(provision("a", {}, {}, -3, 0, 0));
        rows.push_back(provision("b", {}, {}, -3, 0, 0));
        rows.push_back(provision("c", {}, {}, 3, 0, 0));
        rows.push_back(provision("d", {}, {}, 3, 0, 0));
        auto v = dimension_variance(make_corpus(rows, 1, 1));
        CHECK(v[0] == Approx(9.0).epsilon(1e-12));
        // sample flavor divides by N-1 instead
        auto vs = dimension_variance(make_corpus(rows, 1, 1), VarianceMode::Sample);
        CHECK(vs[0] == Approx(12.0).epsilon(1e-12));
    }
    SECTION("single provision") {
        auto v = dimension_variance(make_corpus({provision("a", {}, {}, 1, 2, 3)}, 1, 1));
        CHECK(v[0] == 0.0);
        CHECK(v[2] == 0.0);
    }
    SECTION("empty corpus is an error") {
        CHECK_THROWS_AS(dimension_variance(make_corpus({}, 1, 1)), Error);
    }
    SECTION("shifting scores by a constant leaves variance unchanged") {
        std::vector<ProvisionData> base, shifted;
        Rng rng(21);
        for (int i = 0; i < 30; ++i) {
            int v = rng.uniform_int(-2, 2);
            base.push_back(provision("p" + std::to_string(i), {}, {}, v, 0, 0));
            shifted.push_back(provision("p" + std::to_string(i), {}, {}, v + 1, 0, 0));
        }
        auto v0 = dimension_variance(make_corpus(base, 1, 1));
        auto v1 = dimension_variance(make_corpus(shifted, 1, 1));
        CHECK(v0[0] == Approx(v1[0]).margin(1e-12));
    }
}

TEST_CASE("abstraction index worked examples") {
    SECTION("separated groups") {
        // numerator (20 + 2*sqrt(101))/4, denominator 1/2
        double expected = (20.0 + 2.0 * std::sqrt(101.0)) / 4.0 / 0.5;
        double got = abstraction_index(separated_example());
        CHECK(got == Approx(expected).margin(1e-9));
        CHECK(got == Approx(20.0499).margin(1e-4));
    }
    SECTION("identical groups give exactly 1") {
        CHECK(abstraction_index(identical_groups_example()) == 1.0);
    }
    SECTION("all points identical is degenerate") {
        Matrix x(4, 2, 1.0);
        LabeledVectors data{x, {Pole::First, Pole::First, Pole::Second, Pole::Second}};
        REQUIRE_THROWS_MATCHES(abstraction_index(data), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::DegenerateGroups;
                               }));
    }
    SECTION("missing class") {
        Matrix x(2, 1);
        x(1, 0) = 1;
        LabeledVectors data{x, {Pole::First, Pole::First}};
        REQUIRE_THROWS_MATCHES(
            abstraction_index(data), Error,
            Catch::Matchers::Predicate<Error>(
                [](const Error& e) { return e.code() == Errc::MissingClass; }));
    }
    SECTION("weighted-sum denominator variant") {
        // each intra sum is 1.0, so the literal-sum denominator is 1.0
        double expected = (20.0 + 2.0 * std::sqrt(101.0)) / 4.0;
        CHECK(abstraction_index(separated_example(), IntraNorm::WeightedSum) ==
              Approx(expected).margin(1e-9));
    }
}

TEST_CASE("abstraction index matches the naive double-loop oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 3 + rng.below(28);
        std::size_t d = 1 + rng.below(10);
        LabeledVectors data = random_labeled(n, d, rng);
        double expected = naive_abstraction_index(data.vectors, data.labels);
        CHECK(abstraction_index(data) == Approx(expected).margin(1e-9));
        double expected_sum = naive_abstraction_index(data.vectors, data.labels, IntraNorm::WeightedSum);
        CHECK(abstraction_index(data, IntraNorm::WeightedSum) == Approx(expected_sum).margin(1e-9));
    }
}

TEST_CASE("abstraction index invariances") {
    Rng rng(77);
    LabeledVectors data = random_labeled(14, 3, rng);
    const double base = abstraction_index(data);

    SECTION("swapping class labels") {
        LabeledVectors flipped = data;
        for (auto& p : flipped.labels) p = opposite(p);
        CHECK(abstraction_index(flipped) == Approx(base).margin(1e-12));
    }
    SECTION("permuting points") {
        std::vector<std::size_t> perm(data.labels.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        LabeledVectors shuffled{Matrix(data.vectors.rows(), data.vectors.cols()),
                                std::vector<Pole>(data.labels.size())};
        for (std::size_t i = 0; i < perm.size(); ++i) {
            for (std::size_t j = 0; j < data.vectors.cols(); ++j)
                shuffled.vectors(i, j) = data.vectors(perm[i], j);
            shuffled.labels[i] = data.labels[perm[i]];
        }
        CHECK(abstraction_index(shuffled) == Approx(base).margin(1e-9));
    }
    SECTION("translation, rotation, and uniform scaling") {
        LabeledVectors moved = data;
        const double angle = 0.83;
        const double c = std::cos(angle), s = std::sin(angle);
        const double scale = 3.7;
        for (std::size_t i = 0; i < moved.vectors.rows(); ++i) {
            double a = moved.vectors(i, 0), b = moved.vectors(i, 1);
            moved.vectors(i, 0) = scale * (c * a - s * b) + 5.0;
            moved.vectors(i, 1) = scale * (s * a + c * b) - 2.0;
            moved.vectors(i, 2) = scale * moved.vectors(i, 2) + 1.0;
        }
        CHECK(abstraction_index(moved) == Approx(base).margin(1e-9));
    }
}

TEST_CASE("permutation test on a constant statistic gives p = 1") {
    auto result = permutation_test(identical_groups_example(), 200, 31);
    CHECK(result.index == 1.0);
    CHECK(result.p_value == 1.0);
    CHECK(result.n_permutations == 200);
}

TEST_CASE("permutation test on well-separated groups gives the smallest p") {
    auto result = permutation_test(separated_example(), 999, 5);
    CHECK(result.p_value == Approx(0.001).margin(1e-12));
}

TEST_CASE("all six balanced relabelings of the separated example behave as expected") {
    // Of the six assignments, only the observed one and its label swap reach
    // the observed index; the four mixed groupings fall well below it. The
    // permutation draw space excludes the observed partition, which is why
    // 999 permutations give p = 0.001 above.
    LabeledVectors data = separated_example();
    double observed = abstraction_index(data);
    int ge = 0, lt = 0;
    // the six assignments: every way to hand the First label to two points
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            LabeledVectors relabeled = data;
            for (std::size_t k = 0; k < 4; ++k)
                relabeled.labels[k] = (k == i || k == j) ? Pole::First : Pole::Second;
            double idx = naive_abstraction_index(relabeled.vectors, relabeled.labels);
            if (idx >= observed) ++ge;
            else ++lt;
        }
    }
    CHECK(ge == 2);
    CHECK(lt == 4);
}

TEST_CASE("permutation test is deterministic and respects the p-value range") {
    Rng rng(404);
    LabeledVectors data = random_labeled(12, 4, rng);
    auto a = permutation_test(data, 199, 77);
    auto b = permutation_test(data, 199, 77);
    CHECK(a.index == b.index);
    CHECK(a.p_value == b.p_value);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto r = permutation_test(data, 99, seed);
        CHECK(r.p_value >= 1.0 / 100.0);
        CHECK(r.p_value <= 1.0);
    }
}

TEST_CASE("permutation test counts degenerate permuted draws as ties") {
    // two coincident pairs: some relabelings produce two zero-variance
    // groups, which must count as >= observed rather than abort the test
    auto result = permutation_test(identical_groups_example(), 500, 9);
    CHECK(result.p_value == 1.0);
}

TEST_CASE("labeled_vectors excludes zero-score provisions") {
    std::vector<ProvisionData> rows;
    rows.push_back(provision("a", {0}, {}, -1, 0, 0));
    rows.push_back(provision("b", {1}, {}, 0, 1, 0)); // excluded on ExtInt
    rows.push_back(provision("c", {0, 1}, {}, 2, -1, 0));
    Corpus corpus = make_corpus(rows, 2, 1);

    LabeledVectors data = labeled_vectors(corpus, Space::SymptomGrouped, Axis::ExtInt);
    REQUIRE(data.labels.size() == 2);
    CHECK(data.labels[0] == Pole::First);
    CHECK(data.labels[1] == Pole::Second);
    CHECK(data.vectors(0, 0) == 1.0);
    CHECK(data.vectors(1, 1) == 1.0);
}
