#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace funcasa {

/// Largest ambient dimension handled by the toolkit. Vectors and matrices
/// carry this as a compile-time upper bound so small linear algebra never
/// touches the heap.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Vec zeros(int n) { return Vec::Zero(n); }
inline Mat identity(int n) { return Mat::Identity(n, n); }

/// Determinant of a symmetric matrix that is expected to be positive
/// definite. Uses LDLT so graded diagonals (huge curvature near a support
/// boundary) keep their relative accuracy. Returns a non-positive value
/// when the factorization reports a non-positive pivot.
inline double spd_determinant(const Mat& m) {
    if (m.rows() == 0) return 1.0;
    Eigen::LDLT<Mat> ldlt(m);
    if (ldlt.info() != Eigen::Success) return m.determinant();
    const auto d = ldlt.vectorD();
    double det = 1.0;
    for (int i = 0; i < d.size(); ++i) det *= d[i];
    return det;
}

inline double log_abs_det(const Mat& m) {
    return std::log(std::abs(m.determinant()));
}

/// Symmetric inverse square root through the eigendecomposition.
inline Mat inverse_sqrt_spd(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    Vec inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline double condition_number_spd(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace funcasa
