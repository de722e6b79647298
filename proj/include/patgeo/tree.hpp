#pragma once
// Multi-output regression tree with a mean-squared-error criterion, plus
// impurity-based feature importances, in-sample R^2, and the depth sweep
// that regresses herb vectors on symptom vectors.
//
// Splitting is greedy and fully deterministic: at each node the (feature,
// threshold) pair minimizing the summed child MSE over all output columns is
// chosen, with ties broken by lowest feature index, then lowest threshold.
// Candidate thresholds are midpoints between consecutive distinct values, so
// binary features get the single candidate 0.5.

#include "patgeo/corpus.hpp"
#include "patgeo/matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace patgeo {

struct TreeNode {
    int left = -1; // < 0 marks a leaf
    int right = -1;
    int feature = -1;
    double threshold = 0.0;
    int n_samples = 0;
    double impurity = 0.0;          // mean squared error summed over outputs
    std::vector<double> leaf_mean;  // populated for leaves only

    bool is_leaf() const { return left < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    int max_depth = 0;
    std::size_t n_features = 0;
    std::size_t n_outputs = 0;
    std::size_t n_train = 0;

    std::size_t apply(std::span<const double> x) const {
        std::size_t node = 0;
        while (!nodes[node].is_leaf()) {
            const TreeNode& nd = nodes[node];
            node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                       ? static_cast<std::size_t>(nd.left)
                       : static_cast<std::size_t>(nd.right);
        }
        return node;
    }

    const std::vector<double>& predict(std::span<const double> x) const {
        return nodes[apply(x)].leaf_mean;
    }
};

namespace detail {

// Gains below this (relative to the node impurity scale) do not count as
// strict improvements; guards against FP noise manufacturing splits.
constexpr double tree_min_gain = 1e-12;

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double child_sse = 0.0; // summed over both children and all outputs
};

// Node impurity * n: total squared deviation from the column means.
inline double node_sse(const Matrix& y, const std::vector<std::size_t>& idx,
                       std::vector<double>& mean_out) {
    const std::size_t h = y.cols();
    mean_out.assign(h, 0.0);
    for (std::size_t i : idx)
        for (std::size_t c = 0; c < h; ++c) mean_out[c] += y(i, c);
    for (std::size_t c = 0; c < h; ++c) mean_out[c] /= static_cast<double>(idx.size());
    double sse = 0.0;
    for (std::size_t i : idx)
        for (std::size_t c = 0; c < h; ++c) {
            double d = y(i, c) - mean_out[c];
            sse += d * d;
        }
    return sse;
}

inline SplitChoice best_split(const Matrix& x, const Matrix& y, const std::vector<std::size_t>& idx,
                              double parent_sse) {
    const std::size_t n = idx.size();
    const std::size_t d = x.cols();
    const std::size_t h = y.cols();

    // SSE_left + SSE_right = total_sq - sum_c (S_L^2/n_L + S_R^2/n_R), so the
    // best split maximizes the bracketed score.
    double total_sq = 0.0;
    std::vector<double> total_sum(h, 0.0);
    for (std::size_t i : idx)
        for (std::size_t c = 0; c < h; ++c) {
            double v = y(i, c);
            total_sq += v * v;
            total_sum[c] += v;
        }

    SplitChoice best;
    double best_score = -1.0;

    std::vector<std::size_t> sorted = idx;
    std::vector<double> left_sum(h);
    for (std::size_t f = 0; f < d; ++f) {
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
        if (x(sorted.front(), f) == x(sorted.back(), f)) continue;

        std::fill(left_sum.begin(), left_sum.end(), 0.0);
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            for (std::size_t c = 0; c < h; ++c) left_sum[c] += y(sorted[pos], c);
            double v = x(sorted[pos], f);
            double next = x(sorted[pos + 1], f);
            if (v == next) continue;

            double n_l = static_cast<double>(pos + 1);
            double n_r = static_cast<double>(n - pos - 1);
            double score = 0.0;
            for (std::size_t c = 0; c < h; ++c) {
                double s_l = left_sum[c];
                double s_r = total_sum[c] - s_l;
                score += s_l * s_l / n_l + s_r * s_r / n_r;
            }
            if (score > best_score) {
                best_score = score;
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = v + (next - v) / 2.0;
                best.child_sse = total_sq - score;
            }
        }
    }

    if (best.found) {
        double gain = parent_sse - best.child_sse;
        if (!(gain > tree_min_gain * std::max(1.0, parent_sse))) best.found = false;
    }
    return best;
}

} // namespace detail

inline RegressionTree fit_tree(const Matrix& x, const Matrix& y, int max_depth,
                               int min_samples_split = 2, std::uint64_t seed = 0) {
    (void)seed; // splitting is deterministic; kept for interface stability
    if (x.rows() != y.rows()) throw Error(Errc::ShapeMismatch, "X and Y row counts differ");
    if (x.rows() == 0) throw Error(Errc::ShapeMismatch, "cannot fit on zero samples");
    if (max_depth < 0) throw Error(Errc::InvalidSpec, "max_depth must be >= 0");

    RegressionTree tree;
    tree.max_depth = max_depth;
    tree.n_features = x.cols();
    tree.n_outputs = y.cols();
    tree.n_train = x.rows();

    struct Frame {
        std::vector<std::size_t> idx;
        int depth;
        int node;
    };

    std::vector<std::size_t> root_idx(x.rows());
    std::iota(root_idx.begin(), root_idx.end(), std::size_t{0});

    tree.nodes.emplace_back();
    std::vector<Frame> stack;
    stack.push_back({std::move(root_idx), 0, 0});

    std::vector<double> mean;
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();

        double sse = detail::node_sse(y, frame.idx, mean);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(frame.node)];
        node.n_samples = static_cast<int>(frame.idx.size());
        node.impurity = sse / static_cast<double>(frame.idx.size());

        bool can_split = frame.depth < max_depth &&
                         frame.idx.size() >= static_cast<std::size_t>(std::max(min_samples_split, 2));
        detail::SplitChoice split;
        if (can_split) split = detail::best_split(x, y, frame.idx, sse);

        if (!split.found) {
            node.leaf_mean = mean;
            continue;
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : frame.idx) {
            if (x(i, static_cast<std::size_t>(split.feature)) <= split.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }

        node.feature = split.feature;
        node.threshold = split.threshold;
        int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(frame.node)].left = left_id;
        tree.nodes[static_cast<std::size_t>(frame.node)].right = right_id;

        // Right pushed first so the left subtree is laid out first.
        stack.push_back({std::move(right_idx), frame.depth + 1, right_id});
        stack.push_back({std::move(left_idx), frame.depth + 1, left_id});
    }
    return tree;
}

// Normalized impurity-decrease importances; all-zero for a tree without
// splits.
inline std::vector<double> feature_importances(const RegressionTree& tree) {
    std::vector<double> imp(tree.n_features, 0.0);
    const double n_total = static_cast<double>(tree.n_train);
    double sum = 0.0;
    for (const TreeNode& node : tree.nodes) {
        if (node.is_leaf()) continue;
        const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
        const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
        double n = node.n_samples;
        double decrease = (n / n_total) *
                          (node.impurity - (l.n_samples / n) * l.impurity -
                           (r.n_samples / n) * r.impurity);
        imp[static_cast<std::size_t>(node.feature)] += decrease;
        sum += decrease;
    }
    if (sum > 0.0)
        for (double& v : imp) v /= sum;
    return imp;
}

// Uniform average over output columns of 1 - SS_res/SS_tot; zero-variance
// columns are excluded. If every column is constant: 1.0 when predictions
// are exact, else 0.0.
inline double r_squared(const RegressionTree& tree, const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != tree.n_features || y.cols() != tree.n_outputs)
        throw Error(Errc::ShapeMismatch, "evaluation shapes do not match the fitted tree");
    const std::size_t n = x.rows();
    const std::size_t h = y.cols();

    std::vector<double> mean(h, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < h; ++c) mean[c] += y(i, c);
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<double> ss_res(h, 0.0), ss_tot(h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pred = tree.predict(x.row(i));
        for (std::size_t c = 0; c < h; ++c) {
            double r = y(i, c) - pred[c];
            ss_res[c] += r * r;
            double t = y(i, c) - mean[c];
            ss_tot[c] += t * t;
        }
    }

    double total = 0.0;
    std::size_t used = 0;
    double residual_on_constant = 0.0;
    for (std::size_t c = 0; c < h; ++c) {
        if (ss_tot[c] > 0.0) {
            total += 1.0 - ss_res[c] / ss_tot[c];
            ++used;
        } else {
            residual_on_constant += ss_res[c];
        }
    }
    if (used == 0) return residual_on_constant == 0.0 ? 1.0 : 0.0;
    return total / static_cast<double>(used);
}

// ---------------------------------------------------------------------------
// Depth sweep
// ---------------------------------------------------------------------------

struct TreeReport {
    int depth = 0;
    std::array<std::pair<std::string, double>, 3> top_features; // importance desc
    int n_features_used = 0;
    double r2 = 0.0;
};

inline const std::vector<int>& default_tree_depths() {
    static const std::vector<int> depths{3, 5, 7, 10, 30};
    return depths;
}

// X = raw symptom matrix, optionally with the three signed pattern-score
// columns appended; Y = herb matrix.
inline std::vector<TreeReport> depth_sweep(const Corpus& corpus, const std::vector<int>& depths,
                                           bool include_patterns, int min_samples_split = 2) {
    if (corpus.size() == 0) throw Error(Errc::EmptyCorpus, "depth sweep needs provisions");
    if (depths.empty()) throw Error(Errc::InvalidSpec, "depth list is empty");

    const std::size_t s = corpus.vocab_s().size();
    const std::size_t d = s + (include_patterns ? 3 : 0);
    Matrix x(corpus.size(), d);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.provisions()[i];
        for (std::size_t j = 0; j < s; ++j) x(i, j) = p.symptoms_raw[j];
        if (include_patterns)
            for (Axis a : all_axes)
                x(i, s + static_cast<std::size_t>(static_cast<int>(a))) = p.scores.on(a);
    }
    Matrix y = feature_matrix(corpus, Space::Herb);

    auto feature_name = [&](std::size_t j) {
        return j < s ? corpus.vocab_s().token(j)
                     : std::string(axis_name(all_axes[j - s]));
    };

    std::vector<TreeReport> reports;
    for (int depth : depths) {
        RegressionTree tree = fit_tree(x, y, depth, min_samples_split);
        std::vector<double> imp = feature_importances(tree);

        std::vector<std::size_t> order(imp.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (imp[a] != imp[b]) return imp[a] > imp[b];
            return a < b;
        });

        std::set<int> used;
        for (const TreeNode& node : tree.nodes)
            if (!node.is_leaf()) used.insert(node.feature);

        TreeReport rep;
        rep.depth = depth;
        for (std::size_t k = 0; k < 3; ++k) {
            if (k < order.size())
                rep.top_features[k] = {feature_name(order[k]), imp[order[k]]};
            else
                rep.top_features[k] = {"", 0.0};
        }
        rep.n_features_used = static_cast<int>(used.size());
        rep.r2 = r_squared(tree, x, y);
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace patgeo
