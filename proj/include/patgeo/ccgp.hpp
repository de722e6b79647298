#pragma once
// Cross-conditional generalization performance (CCGP).
//
// One cell: train a linear SVM to discriminate the label axis's poles using
// provisions from the two subgroups that share the train pole on the
// condition axis, then score it on the two subgroups with the opposite
// condition pole. Subgroups are balanced by sampling `sample_size` members
// from each, and the cell reports the mean and std of the accuracy over
// iterations. A full table is the 12 cells (3 label axes x 2 condition axes
// x 2 directions), sorted by mean accuracy descending.

#include "patgeo/corpus.hpp"
#include "patgeo/geometry.hpp"
#include "patgeo/rng.hpp"
#include "patgeo/svm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace patgeo {

struct CcgpCell {
    Axis label_axis;
    Axis condition_axis;
    Pole train_pole; // condition pole of the training subgroups
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    int n_iterations = 0;
    int sample_size_per_subgroup = 0;

    std::string training_set_name() const {
        return std::string(pole_name(label_axis, Pole::First)) + "/" +
               pole_name(condition_axis, train_pole) + ", " + pole_name(label_axis, Pole::Second) +
               "/" + pole_name(condition_axis, train_pole);
    }
    std::string test_set_name() const {
        Pole test_pole = opposite(train_pole);
        return std::string(pole_name(label_axis, Pole::First)) + "/" +
               pole_name(condition_axis, test_pole) + ", " + pole_name(label_axis, Pole::Second) +
               "/" + pole_name(condition_axis, test_pole);
    }
};

struct CcgpTable {
    std::vector<CcgpCell> cells; // exactly 12, sorted by mean accuracy descending
};

// Smallest of the 12 subgroup sizes; the default per-subgroup sample size.
inline std::size_t smallest_subgroup_size(const Corpus& corpus) {
    std::size_t smallest = corpus.size();
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            auto groups = partition_subgroups(corpus, all_axes[a], all_axes[b]);
            for (const auto& [key, members] : groups) smallest = std::min(smallest, members.size());
        }
    }
    return smallest;
}

namespace detail {

struct CcgpGroups {
    std::vector<std::size_t> train_first;  // label First, condition = train pole
    std::vector<std::size_t> train_second; // label Second, condition = train pole
    std::vector<std::size_t> test_first;   // label First, condition = opposite pole
    std::vector<std::size_t> test_second;  // label Second, condition = opposite pole
};

inline CcgpGroups ccgp_groups(const Corpus& corpus, Axis label_axis, Axis condition_axis,
                              Pole train_pole, std::size_t sample_size) {
    auto groups = partition_subgroups(corpus, label_axis, condition_axis);
    Pole test_pole = opposite(train_pole);
    auto fetch = [&](Pole label_pole, Pole cond_pole) {
        SubgroupKey key = make_subgroup_key(label_axis, label_pole, condition_axis, cond_pole);
        auto& members = groups.at(key);
        if (members.size() < sample_size)
            throw Error(Errc::SubgroupTooSmall,
                        "subgroup " + subgroup_name(key) + " has " +
                            fmt_int(static_cast<long long>(members.size())) + " members, need " +
                            fmt_int(static_cast<long long>(sample_size)));
        return members;
    };
    return {fetch(Pole::First, train_pole), fetch(Pole::Second, train_pole),
            fetch(Pole::First, test_pole), fetch(Pole::Second, test_pole)};
}

// First `k` entries of a seeded shuffle: a uniform sample without replacement.
inline std::vector<std::size_t> sample_without_replacement(const std::vector<std::size_t>& pool,
                                                           std::size_t k, Rng& rng) {
    std::vector<std::size_t> copy = pool;
    rng.shuffle(copy);
    copy.resize(k);
    return copy;
}

inline void fill_rows(Matrix& dst, std::size_t& next_row, const Matrix& src,
                      const std::vector<std::size_t>& rows) {
    for (std::size_t r : rows) {
        std::copy(src.row(r).begin(), src.row(r).end(), dst.row(next_row).begin());
        ++next_row;
    }
}

} // namespace detail

// `features` must be feature_matrix(corpus, space); passing it in lets a
// table run share one matrix across its 12 cells.
inline CcgpCell ccgp_cell_with_features(const Corpus& corpus, const Matrix& features,
                                        Axis label_axis, Axis condition_axis, Pole train_pole,
                                        std::size_t sample_size, int n_iterations, double C,
                                        std::uint64_t seed) {
    if (label_axis == condition_axis)
        throw Error(Errc::SameAxis, "label and condition axes must differ");
    if (n_iterations < 1) throw Error(Errc::InvalidSpec, "n_iterations must be >= 1");
    if (sample_size < 1) throw Error(Errc::InvalidSpec, "sample_size must be >= 1");

    auto groups = detail::ccgp_groups(corpus, label_axis, condition_axis, train_pole, sample_size);
    const std::size_t d = features.cols();
    const std::size_t k = sample_size;

    std::vector<Pole> train_labels(2 * k);
    for (std::size_t i = 0; i < k; ++i) train_labels[i] = Pole::First;
    for (std::size_t i = k; i < 2 * k; ++i) train_labels[i] = Pole::Second;

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int it = 0; it < n_iterations; ++it) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(it));
        auto tr_first = detail::sample_without_replacement(groups.train_first, k, rng);
        auto tr_second = detail::sample_without_replacement(groups.train_second, k, rng);
        auto te_first = detail::sample_without_replacement(groups.test_first, k, rng);
        auto te_second = detail::sample_without_replacement(groups.test_second, k, rng);

#ifndef NDEBUG
        // The four subgroups partition provisions by (label pole, condition
        // pole), so no index can appear in both a train and a test sample.
        {
            std::vector<std::size_t> tr = tr_first;
            tr.insert(tr.end(), tr_second.begin(), tr_second.end());
            std::sort(tr.begin(), tr.end());
            for (std::size_t t : te_first) assert(!std::binary_search(tr.begin(), tr.end(), t));
            for (std::size_t t : te_second) assert(!std::binary_search(tr.begin(), tr.end(), t));
        }
#endif

        Matrix train(2 * k, d);
        std::size_t next = 0;
        detail::fill_rows(train, next, features, tr_first);
        detail::fill_rows(train, next, features, tr_second);

        LinearClassifier clf = train_linear_svm(train, train_labels, C, rng.next());

        std::size_t correct = 0;
        for (std::size_t r : te_first)
            if (clf.predict(features.row(r)) == Pole::First) ++correct;
        for (std::size_t r : te_second)
            if (clf.predict(features.row(r)) == Pole::Second) ++correct;
        double acc = static_cast<double>(correct) / static_cast<double>(2 * k);
        sum += acc;
        sum_sq += acc * acc;
    }

    CcgpCell cell;
    cell.label_axis = label_axis;
    cell.condition_axis = condition_axis;
    cell.train_pole = train_pole;
    cell.n_iterations = n_iterations;
    cell.sample_size_per_subgroup = static_cast<int>(k);
    cell.mean_accuracy = sum / n_iterations;
    double var = sum_sq / n_iterations - cell.mean_accuracy * cell.mean_accuracy;
    cell.std_accuracy = std::sqrt(std::max(var, 0.0));
    return cell;
}

inline CcgpCell ccgp_cell(const Corpus& corpus, Space space, Axis label_axis, Axis condition_axis,
                          Pole train_pole, std::size_t sample_size, int n_iterations, double C,
                          std::uint64_t seed) {
    Matrix features = feature_matrix(corpus, space);
    return ccgp_cell_with_features(corpus, features, label_axis, condition_axis, train_pole,
                                   sample_size, n_iterations, C, seed);
}

// sample_size 0 means "use the smallest subgroup size".
inline CcgpTable ccgp_table(const Corpus& corpus, Space space, std::size_t sample_size,
                            int n_iterations, double C, std::uint64_t seed) {
    if (sample_size == 0) sample_size = smallest_subgroup_size(corpus);
    Matrix features = feature_matrix(corpus, space);

    CcgpTable table;
    std::uint64_t cell_index = 0;
    for (Axis label : all_axes) {
        for (Axis condition : all_axes) {
            if (condition == label) continue;
            for (Pole pole : {Pole::First, Pole::Second}) {
                std::uint64_t cell_seed = derive_seed(seed, cell_index++);
                table.cells.push_back(ccgp_cell_with_features(corpus, features, label, condition,
                                                              pole, sample_size, n_iterations, C,
                                                              cell_seed));
            }
        }
    }

    std::stable_sort(table.cells.begin(), table.cells.end(), [](const CcgpCell& a, const CcgpCell& b) {
        if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
        if (a.label_axis != b.label_axis) return a.label_axis < b.label_axis;
        if (a.condition_axis != b.condition_axis) return a.condition_axis < b.condition_axis;
        return a.train_pole < b.train_pole;
    });
    return table;
}

} // namespace patgeo
