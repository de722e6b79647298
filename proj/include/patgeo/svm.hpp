#pragma once
// Soft-margin linear SVM trained by dual coordinate descent, in the style of
// LIBLINEAR's L1-loss solver. The bias is handled by augmenting each sample
// with a constant 1 feature, so it participates in the L2 penalty.
//
//   primal: min_w,b  1/2 (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w.x_i + b))
//
// Coordinates are visited in a seeded random order each epoch; training stops
// when the duality gap drops below 1e-4 or after a fixed epoch cap.

#include "patgeo/corpus.hpp"
#include "patgeo/matrix.hpp"
#include "patgeo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace patgeo {

struct LinearClassifier {
    std::vector<double> weights;
    double bias = 0.0;
    double regularization = 1.0;

    double score(std::span<const double> x) const {
        double s = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
        return s;
    }

    // Second pole iff the score is strictly positive; ties go to First.
    Pole predict(std::span<const double> x) const {
        return score(x) > 0.0 ? Pole::Second : Pole::First;
    }
};

namespace detail {

constexpr double svm_gap_tolerance = 1e-4;
constexpr int svm_max_epochs = 1000;

} // namespace detail

inline LinearClassifier train_linear_svm(const Matrix& x, const std::vector<Pole>& labels, double C,
                                         std::uint64_t seed) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n != labels.size()) throw Error(Errc::ShapeMismatch, "label count must match row count");
    if (C <= 0.0) throw Error(Errc::InvalidSpec, "C must be positive");

    bool has_first = false, has_second = false;
    for (Pole p : labels) (p == Pole::First ? has_first : has_second) = true;
    if (!has_first || !has_second)
        throw Error(Errc::SingleClass, "training data must contain both pole classes");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == Pole::First ? -1.0 : 1.0;

    // Squared norms of the augmented samples; the +1 is the bias feature.
    std::vector<double> sq_norm(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 1.0;
        for (double v : x.row(i)) s += v * v;
        sq_norm[i] = s;
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(d + 1, 0.0); // w[d] is the bias

    auto margin = [&](std::size_t i) {
        double s = w[d];
        auto row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) s += w[j] * row[j];
        return y[i] * s;
    };

    auto duality_gap = [&]() {
        double w_norm_sq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
        double hinge = 0.0;
        double alpha_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            hinge += std::max(0.0, 1.0 - margin(i));
            alpha_sum += alpha[i];
        }
        double primal = 0.5 * w_norm_sq + C * hinge;
        double dual = alpha_sum - 0.5 * w_norm_sq;
        return primal - dual;
    };

    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < detail::svm_max_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            double grad = margin(i) - 1.0;
            double pg = grad;
            if (alpha[i] <= 0.0) pg = std::min(grad, 0.0);
            else if (alpha[i] >= C) pg = std::max(grad, 0.0);
            if (pg == 0.0) continue;
            double old = alpha[i];
            alpha[i] = std::clamp(old - grad / sq_norm[i], 0.0, C);
            double delta = (alpha[i] - old) * y[i];
            if (delta != 0.0) {
                auto row = x.row(i);
                for (std::size_t j = 0; j < d; ++j) w[j] += delta * row[j];
                w[d] += delta;
            }
        }
        if (duality_gap() <= detail::svm_gap_tolerance) break;
    }

    LinearClassifier clf;
    clf.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
    clf.bias = w[d];
    clf.regularization = C;
    return clf;
}

inline double training_accuracy(const LinearClassifier& clf, const Matrix& x,
                                const std::vector<Pole>& labels) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        if (clf.predict(x.row(i)) == labels[i]) ++correct;
    return x.rows() == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(x.rows());
}

} // namespace patgeo
