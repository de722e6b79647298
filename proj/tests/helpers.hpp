#pragma once
// Shared test utilities: corpus builders, random instances, and the
// independent oracles the library is checked against. Oracles here are
// deliberately naive (double loops, exhaustive search, grid refinement) and
// share no code with the implementation paths they verify.

#include "patgeo/corpus.hpp"
#include "patgeo/geometry.hpp"
#include "patgeo/matrix.hpp"
#include "patgeo/rng.hpp"
#include "patgeo/svm.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace testutil {

using namespace patgeo;

inline std::filesystem::path fresh_dir(const std::string& name) {
    std::filesystem::path dir = std::filesystem::path("test_tmp") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------------------
// Corpus construction
// ---------------------------------------------------------------------------

inline Vocabulary numbered_vocab(const std::string& prefix, std::size_t n) {
    Vocabulary v;
    for (std::size_t i = 0; i < n; ++i) v.add(prefix + std::to_string(i));
    return v;
}

// Corpus from explicit rows; grouped vectors equal raw vectors because no
// category map is supplied.
inline Corpus make_corpus(const std::vector<ProvisionData>& rows, std::size_t n_symptoms,
                          std::size_t n_herbs) {
    return Corpus(numbered_vocab("s", n_symptoms), numbered_vocab("h", n_herbs), CategoryMap{}, rows);
}

inline ProvisionData provision(std::string id, std::vector<std::uint32_t> symptoms,
                               std::vector<std::uint32_t> herbs, int ext_int, int cold_heat,
                               int def_exc) {
    return {std::move(id), std::move(symptoms), std::move(herbs),
            PatternScores{ext_int, cold_heat, def_exc}};
}

// A labeled condition/label grid corpus for CCGP tests on the
// (ExtInt, ColdHeat) pair. feature_of decides each symptom column from
// (label pole, condition pole, column, rng).
template <typename FeatureFn>
inline Corpus ccgp_corpus(std::size_t n, std::size_t n_features, FeatureFn feature_of,
                          std::uint64_t seed) {
    std::vector<ProvisionData> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::derived(seed, i);
        Pole label = rng.bernoulli(0.5) ? Pole::Second : Pole::First;
        Pole cond = rng.bernoulli(0.5) ? Pole::Second : Pole::First;
        ProvisionData row;
        row.id = "p" + std::to_string(i);
        row.scores.ext_int = label == Pole::Second ? 2 : -2;
        row.scores.cold_heat = cond == Pole::Second ? 2 : -2;
        row.scores.def_exc = 1;
        for (std::size_t f = 0; f < n_features; ++f)
            if (feature_of(label, cond, f, rng)) row.symptoms.push_back(static_cast<std::uint32_t>(f));
        rows.push_back(std::move(row));
    }
    return make_corpus(rows, n_features, 1);
}

// ---------------------------------------------------------------------------
// Abstraction-index oracle: direct double-loop over points
// ---------------------------------------------------------------------------

inline double naive_abstraction_index(const Matrix& x, const std::vector<Pole>& labels,
                                      IntraNorm norm = IntraNorm::WeightedMean) {
    std::vector<std::vector<double>> xs, ys;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::vector<double> row(x.row(i).begin(), x.row(i).end());
        (labels[i] == Pole::First ? xs : ys).push_back(std::move(row));
    }
    if (xs.empty() || ys.empty()) throw Error(Errc::MissingClass, "oracle: empty class");

    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
        return std::sqrt(s);
    };
    auto centroid = [](const std::vector<std::vector<double>>& pts) {
        std::vector<double> c(pts[0].size(), 0.0);
        for (const auto& p : pts)
            for (std::size_t k = 0; k < c.size(); ++k) c[k] += p[k];
        for (double& v : c) v /= static_cast<double>(pts.size());
        return c;
    };

    double cross = 0.0;
    for (const auto& a : xs)
        for (const auto& b : ys) cross += dist(a, b);
    double numerator = cross / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));

    auto cx = centroid(xs);
    auto cy = centroid(ys);
    double sum_x = 0.0, sum_y = 0.0;
    for (const auto& a : xs) sum_x += dist(a, cx);
    for (const auto& b : ys) sum_y += dist(b, cy);

    double n = static_cast<double>(xs.size() + ys.size());
    double denom = norm == IntraNorm::WeightedMean
                       ? (sum_x + sum_y) / n
                       : (xs.size() / n) * sum_x + (ys.size() / n) * sum_y;
    if (denom == 0.0) throw Error(Errc::DegenerateGroups, "oracle: zero denominator");
    return numerator / denom;
}

inline LabeledVectors random_labeled(std::size_t n, std::size_t d, Rng& rng) {
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.real01() * 4.0 - 2.0;
    std::vector<Pole> labels(n);
    // guarantee both classes
    labels[0] = Pole::First;
    labels[1] = Pole::Second;
    for (std::size_t i = 2; i < n; ++i) labels[i] = rng.bernoulli(0.5) ? Pole::Second : Pole::First;
    return {std::move(x), std::move(labels)};
}

// ---------------------------------------------------------------------------
// SVM primal objective and a grid-refinement oracle
// ---------------------------------------------------------------------------

inline double svm_primal_objective(const Matrix& x, const std::vector<Pole>& labels, double c_param,
                                   const std::vector<double>& w, double b) {
    double reg = b * b;
    for (double v : w) reg += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = b;
        for (std::size_t j = 0; j < x.cols(); ++j) s += w[j] * x(i, j);
        double y = labels[i] == Pole::First ? -1.0 : 1.0;
        hinge += std::max(0.0, 1.0 - y * s);
    }
    return 0.5 * reg + c_param * hinge;
}

// Coarse-to-fine grid search over (w, b). The objective is convex, so
// shrinking the box around the grid argmin converges to the optimum.
inline double svm_oracle_objective(const Matrix& x, const std::vector<Pole>& labels, double c_param) {
    const std::size_t d = x.cols();
    std::vector<double> center(d + 1, 0.0);
    double half = 8.0;
    const int points = 7; // per dimension, offsets -3..3

    std::vector<double> best = center;
    for (int level = 0; level < 40; ++level) {
        double step = half / 3.0;
        std::vector<int> offs(d + 1, -3);
        double best_obj = std::numeric_limits<double>::infinity();
        std::vector<double> cand(d + 1);
        for (;;) {
            for (std::size_t k = 0; k <= d; ++k) cand[k] = center[k] + offs[k] * step;
            std::vector<double> w(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(d));
            double obj = svm_primal_objective(x, labels, c_param, w, cand[d]);
            if (obj < best_obj) {
                best_obj = obj;
                best = cand;
            }
            std::size_t k = 0;
            while (k <= d && ++offs[k] > points / 2) offs[k++] = -3;
            if (k > d) break;
        }
        center = best;
        half *= 0.5;
    }
    std::vector<double> w(best.begin(), best.end() - 1);
    return svm_primal_objective(x, labels, c_param, w, best.back());
}

// Random instance separable by a known hyperplane with margin >= 0.4.
inline std::pair<Matrix, std::vector<Pole>> random_separable(std::size_t n, std::size_t d, Rng& rng) {
    std::vector<double> normal(d);
    double norm = 0.0;
    while (norm < 1e-6) {
        norm = 0.0;
        for (auto& v : normal) {
            v = rng.real01() * 2.0 - 1.0;
            norm += v * v;
        }
        norm = std::sqrt(norm);
    }
    for (auto& v : normal) v /= norm;
    double offset = rng.real01() - 0.5;

    Matrix x(n, d);
    std::vector<Pole> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool second = i % 2 == 1; // both classes present
        double target = (second ? 1.0 : -1.0) * (0.4 + rng.real01() * 1.6);
        std::vector<double> p(d);
        double along = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            p[j] = rng.real01() * 4.0 - 2.0;
            along += p[j] * normal[j];
        }
        double shift = target - (along - offset);
        for (std::size_t j = 0; j < d; ++j) x(i, j) = p[j] + shift * normal[j];
        labels[i] = second ? Pole::Second : Pole::First;
    }
    return {std::move(x), std::move(labels)};
}

// ---------------------------------------------------------------------------
// Tree root-split oracle: exhaustive (feature, threshold) search
// ---------------------------------------------------------------------------

struct OracleSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
};

inline OracleSplit oracle_root_split(const Matrix& x, const Matrix& y) {
    const std::size_t n = x.rows();
    const std::size_t h = y.cols();

    auto side_sse = [&](const std::vector<std::size_t>& idx) {
        double sse = 0.0;
        for (std::size_t c = 0; c < h; ++c) {
            double mean = 0.0;
            for (std::size_t i : idx) mean += y(i, c);
            mean /= static_cast<double>(idx.size());
            for (std::size_t i : idx) sse += (y(i, c) - mean) * (y(i, c) - mean);
        }
        return sse;
    };

    OracleSplit best;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::vector<double> values;
        for (std::size_t i = 0; i < n; ++i) values.push_back(x(i, f));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            double thr = values[v] + (values[v + 1] - values[v]) / 2.0;
            std::vector<std::size_t> left, right;
            for (std::size_t i = 0; i < n; ++i) (x(i, f) <= thr ? left : right).push_back(i);
            double sse = side_sse(left) + side_sse(right);
            if (sse < best_sse) {
                best_sse = sse;
                best = {true, static_cast<int>(f), thr};
            }
        }
    }
    return best;
}

} // namespace testutil
