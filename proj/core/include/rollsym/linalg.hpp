#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace rollsym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Number of strictly upper triangular entries of an n x n matrix.
constexpr int bivector_dim(int n) { return n * (n - 1) / 2; }

// Upper triangular coefficients (i<j, lexicographic) of a square matrix.
Vec skew_to_coeffs(const Mat& S);
Mat coeffs_to_skew(const Vec& c, int n);

// X Y^T - Y X^T, the matrix of X^Y acting by (X^Y)Z = <Z,Y>X - <Z,X>Y.
Mat wedge_matrix(const Vec& X, const Vec& Y);

Mat skew_part(const Mat& M);
double skew_defect(const Mat& M);
double orthogonality_defect(const Mat& A);

Mat expm_skew(const Mat& C);
// Principal logarithm of a rotation close to the identity; result is skew.
Mat logm_rotation(const Mat& R);

Vec gaussian_vector(int n, Rng& rng);
Mat random_rotation(int n, Rng& rng);
Mat random_skew(int n, Rng& rng);

struct RankReport {
  int rank = 0;
  Vec singular_values;
  // sigma_r / sigma_{r+1}; infinity when nothing was rejected or the
  // rejected group is exactly zero.
  double gap = 0.0;
  double tolerance = 0.0;
};

// Rank with relative threshold tol * sigma_max.
RankReport numerical_rank(const Mat& vectors_as_columns, double tol);

// Central difference of a matrix-valued function at 0. order is 2 or 4.
template <class F>
Mat central_difference(F&& f, double h, int order) {
  if (order == 4) {
    return (-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12.0 * h);
  }
  return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace rollsym
