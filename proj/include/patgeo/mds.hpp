#pragma once
// Classical (Torgerson) multidimensional scaling and RGB color codes.
//
// Double-center -1/2 * D^2, take the top-k eigenpairs, and scale eigenvectors
// by sqrt(max(eigenvalue, 0)). The rotation/reflection ambiguity is pinned by
// flipping each column so its largest-magnitude entry is positive, which
// makes the derived colors reproducible.

#include "patgeo/errors.hpp"
#include "patgeo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace patgeo {

struct Embedding3 {
    Matrix coords;                  // N x k, columns ordered by eigenvalue descending
    std::vector<double> eigenvalues; // top k, descending
    double stress = 0.0;            // |D - D_hat|_F / |D|_F, 0 for an all-zero D
};

struct ColorCode {
    int r = 0;
    int g = 0;
    int b = 0;

    bool operator==(const ColorCode&) const = default;
};

inline Embedding3 classical_mds(const Matrix& distances, int k = 3) {
    const std::size_t n = distances.rows();
    if (n != distances.cols()) throw Error(Errc::ShapeMismatch, "distance matrix must be square");
    if (k < 1) throw Error(Errc::InvalidSpec, "k must be >= 1");

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(distances(i, j)));
    const double tol = (scale > 0.0 ? scale : 1.0) * 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(distances(i, i)) > tol)
            throw Error(Errc::AsymmetricInput, "distance matrix must have a zero diagonal");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distances(i, j) < 0.0 || distances(j, i) < 0.0)
                throw Error(Errc::NegativeDistance, "distances must be nonnegative");
            if (std::fabs(distances(i, j) - distances(j, i)) > tol)
                throw Error(Errc::AsymmetricInput, "distance matrix must be symmetric");
        }
    }

    // B = -1/2 J D^2 J with J = I - 11^T/n.
    Matrix b(n, n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sq = distances(i, j) * distances(i, j);
            b(i, j) = sq;
            row_mean[i] += sq;
        }
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = -0.5 * (b(i, j) - row_mean[i] - row_mean[j] + grand);

    SymmetricEigen eig = symmetric_eigen(b);

    const std::size_t kk = static_cast<std::size_t>(k);
    Embedding3 out;
    out.coords = Matrix(n, kk);
    out.eigenvalues.assign(kk, 0.0);
    for (std::size_t c = 0; c < kk && c < n; ++c) {
        out.eigenvalues[c] = eig.values[c];
        double lambda = std::max(eig.values[c], 0.0);
        double root = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) out.coords(i, c) = eig.vectors(i, c) * root;
    }

    // Fix the sign so the largest-magnitude entry of each column is positive.
    for (std::size_t c = 0; c < kk; ++c) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mag = std::fabs(out.coords(i, c));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (n > 0 && out.coords(arg, c) < 0.0)
            for (std::size_t i = 0; i < n; ++i) out.coords(i, c) = -out.coords(i, c);
    }

    double input_norm = 0.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            input_norm += distances(i, j) * distances(i, j);
            double d_hat = euclidean(out.coords.row(i), out.coords.row(j));
            double diff = distances(i, j) - d_hat;
            residual += diff * diff;
        }
    }
    out.stress = input_norm > 0.0 ? std::sqrt(residual) / std::sqrt(input_norm) : 0.0;
    return out;
}

// Min-max normalize each coordinate column to [0,1] (constant columns map to
// 0.5), scale to 0..255 and round half-up. Columns 1..3 feed R, G, B.
inline std::vector<ColorCode> rgb_colors(const Embedding3& embedding) {
    const std::size_t n = embedding.coords.rows();
    const std::size_t k = embedding.coords.cols();
    std::vector<ColorCode> colors(n);
    for (std::size_t c = 0; c < std::min<std::size_t>(k, 3); ++c) {
        double lo = 0.0, hi = 0.0;
        if (n > 0) {
            lo = hi = embedding.coords(0, c);
            for (std::size_t i = 1; i < n; ++i) {
                lo = std::min(lo, embedding.coords(i, c));
                hi = std::max(hi, embedding.coords(i, c));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double t = hi > lo ? (embedding.coords(i, c) - lo) / (hi - lo) : 0.5;
            int v = static_cast<int>(std::floor(t * 255.0 + 0.5));
            v = std::clamp(v, 0, 255);
            if (c == 0) colors[i].r = v;
            else if (c == 1) colors[i].g = v;
            else colors[i].b = v;
        }
    }
    return colors;
}

} // namespace patgeo
