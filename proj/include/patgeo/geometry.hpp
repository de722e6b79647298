#pragma once
// Representational geometry over labeled vector sets: per-axis score
// variance, the abstraction index (mean inter-group distance over mean
// intra-group distance), and its permutation significance test.
//
// The index for a labeling is computed from a pairwise distance matrix and a
// Gram matrix that are built once, so each permutation costs O(N^2)
// regardless of the feature dimension.

#include "patgeo/corpus.hpp"
#include "patgeo/matrix.hpp"
#include "patgeo/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace patgeo {

// N x D feature vectors with one binary pole label per row.
struct LabeledVectors {
    Matrix vectors;
    std::vector<Pole> labels;
};

// Rows are the provisions with a nonzero score on the axis; zero-score
// provisions carry no pole and are excluded.
inline LabeledVectors labeled_vectors(const Corpus& corpus, Space space, Axis axis) {
    Matrix all = feature_matrix(corpus, space);
    std::vector<std::size_t> keep;
    std::vector<Pole> labels;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (auto pole = binarize(corpus.provisions()[i].scores, axis)) {
            keep.push_back(i);
            labels.push_back(*pole);
        }
    }
    Matrix x(keep.size(), all.cols());
    for (std::size_t r = 0; r < keep.size(); ++r)
        std::copy(all.row(keep[r]).begin(), all.row(keep[r]).end(), x.row(r).begin());
    return {std::move(x), std::move(labels)};
}

enum class VarianceMode { Population, Sample };

// Variance of the signed scores along each axis, over all provisions.
inline std::array<double, 3> dimension_variance(const Corpus& corpus,
                                                VarianceMode mode = VarianceMode::Population) {
    const std::size_t n = corpus.size();
    if (n == 0) throw Error(Errc::EmptyCorpus, "variance needs at least one provision");
    std::array<double, 3> out{};
    for (Axis a : all_axes) {
        double mean = 0.0;
        for (const auto& p : corpus.provisions()) mean += p.scores.on(a);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& p : corpus.provisions()) {
            double d = p.scores.on(a) - mean;
            ss += d * d;
        }
        double denom = mode == VarianceMode::Population ? static_cast<double>(n)
                                                        : static_cast<double>(n > 1 ? n - 1 : 1);
        out[static_cast<std::size_t>(static_cast<int>(a))] = (n > 1 || mode == VarianceMode::Population)
                                                                 ? ss / denom
                                                                 : 0.0;
    }
    return out;
}

// Intra-group normalization of the abstraction index denominator.
// WeightedMean uses alpha_c * mean distance to the class centroid (equal to
// the overall mean distance of each point to its own centroid); WeightedSum
// uses the literal alpha_c * sum form.
enum class IntraNorm { WeightedMean, WeightedSum };

namespace detail {

struct PairwiseCache {
    Matrix dist; // Euclidean distances between rows
    Matrix gram; // inner products between rows
};

inline PairwiseCache build_pairwise_cache(const Matrix& x) {
    return {distance_matrix(x), gram_matrix(x)};
}

// Sum over the class of each member's distance to the class centroid,
// from Gram entries alone. Exact zero for a class of identical integer
// vectors, which is what degeneracy detection relies on.
inline double intra_centroid_distance_sum(const PairwiseCache& cache,
                                          const std::vector<std::size_t>& members) {
    const double m = static_cast<double>(members.size());
    std::vector<double> row_sums(members.size(), 0.0);
    double total = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < members.size(); ++b) s += cache.gram(members[a], members[b]);
        row_sums[a] = s;
        total += s;
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        double sq = cache.gram(members[a], members[a]) - 2.0 * (row_sums[a] / m) + total / (m * m);
        sum += std::sqrt(std::max(sq, 0.0));
    }
    return sum;
}

inline double index_from_cache(const PairwiseCache& cache, const std::vector<std::size_t>& xs,
                               const std::vector<std::size_t>& ys, IntraNorm norm) {
    if (xs.empty() || ys.empty())
        throw Error(Errc::MissingClass, "both pole classes must be nonempty");
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());
    const double n = nx + ny;

    double cross = 0.0;
    for (std::size_t a : xs)
        for (std::size_t b : ys) cross += cache.dist(a, b);
    const double numerator = cross / (nx * ny);

    const double sum_x = intra_centroid_distance_sum(cache, xs);
    const double sum_y = intra_centroid_distance_sum(cache, ys);
    const double denominator = norm == IntraNorm::WeightedMean
                                   ? (sum_x + sum_y) / n
                                   : (nx / n) * sum_x + (ny / n) * sum_y;
    if (denominator == 0.0)
        throw Error(Errc::DegenerateGroups, "every point coincides with its class centroid");
    return numerator / denominator;
}

inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_by_label(
    const std::vector<Pole>& labels) {
    std::vector<std::size_t> xs, ys;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == Pole::First ? xs : ys).push_back(i);
    return {std::move(xs), std::move(ys)};
}

} // namespace detail

inline double abstraction_index(const LabeledVectors& data, IntraNorm norm = IntraNorm::WeightedMean) {
    if (data.vectors.rows() != data.labels.size())
        throw Error(Errc::ShapeMismatch, "label count must match row count");
    if (data.vectors.rows() < 2) throw Error(Errc::MissingClass, "need at least two points");
    auto cache = detail::build_pairwise_cache(data.vectors);
    auto [xs, ys] = detail::split_by_label(data.labels);
    return detail::index_from_cache(cache, xs, ys, norm);
}

struct AbstractionResult {
    double index = 0.0;
    double p_value = 1.0;
    int n_permutations = 0;
};

// Permutation test with the +1 bias correction:
//   p = (1 + #{permuted index >= observed}) / (1 + n_permutations).
// Each draw is a class-size-preserving relabeling; draws that reproduce the
// observed partition are redrawn so only genuinely different groupings enter
// the null. A permuted draw with degenerate groups counts as >= observed.
// Deterministic given seed; permutation r uses the stream (seed, r).
inline AbstractionResult permutation_test(const LabeledVectors& data, int n_permutations,
                                          std::uint64_t seed, IntraNorm norm = IntraNorm::WeightedMean) {
    if (n_permutations < 1) throw Error(Errc::InvalidSpec, "n_permutations must be >= 1");
    if (data.vectors.rows() != data.labels.size())
        throw Error(Errc::ShapeMismatch, "label count must match row count");

    auto cache = detail::build_pairwise_cache(data.vectors);
    auto [obs_x, obs_y] = detail::split_by_label(data.labels);
    const double observed = detail::index_from_cache(cache, obs_x, obs_y, norm);

    const std::size_t n = data.labels.size();
    const std::size_t nx = obs_x.size();
    std::vector<std::uint8_t> observed_mask(n, 0);
    for (std::size_t i : obs_x) observed_mask[i] = 1;

    std::vector<std::size_t> base(n);
    std::iota(base.begin(), base.end(), std::size_t{0});

    int at_least = 0;
    for (int r = 0; r < n_permutations; ++r) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(r));
        bool counted_without_value = false;
        std::vector<std::size_t> perm;
        std::vector<std::uint8_t> mask(n);
        const int max_redraws = 64;
        int redraw = 0;
        for (;; ++redraw) {
            perm = base;
            rng.shuffle(perm);
            std::fill(mask.begin(), mask.end(), 0);
            for (std::size_t i = 0; i < nx; ++i) mask[perm[i]] = 1;
            bool same = std::equal(mask.begin(), mask.end(), observed_mask.begin());
            bool swapped = false;
            if (!same && nx * 2 == n) {
                swapped = true;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask[i] == observed_mask[i]) { swapped = false; break; }
            }
            if (!same && !swapped) break;
            if (redraw >= max_redraws) { counted_without_value = true; break; }
        }
        if (counted_without_value) {
            ++at_least; // no distinct partition reachable; count as a tie
            continue;
        }
        std::vector<std::size_t> xs(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nx));
        std::vector<std::size_t> ys(perm.begin() + static_cast<std::ptrdiff_t>(nx), perm.end());
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        double permuted;
        try {
            permuted = detail::index_from_cache(cache, xs, ys, norm);
        } catch (const Error& e) {
            if (e.code() != Errc::DegenerateGroups) throw;
            ++at_least;
            continue;
        }
        if (permuted >= observed) ++at_least;
    }

    AbstractionResult out;
    out.index = observed;
    out.n_permutations = n_permutations;
    out.p_value = (1.0 + at_least) / (1.0 + n_permutations);
    return out;
}

} // namespace patgeo
