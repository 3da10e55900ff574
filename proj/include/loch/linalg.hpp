#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "loch/common.hpp"

namespace loch {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

double spectral_norm(const Matrix& a);
double min_singular_value(const Matrix& a);

// Schur-based eigen-decomposition. For a normal matrix the Schur factor is
// diagonal and the columns of `vectors` are orthonormal eigenvectors.
struct Eigensystem {
  std::vector<Complex> values;
  Matrix vectors;
};
Eigensystem schur_eigen(const Matrix& a);

// Single-linkage clustering at absolute tolerance `tol`. Representatives are the
// lexicographically smallest (re, im) member; `reps` is sorted the same way.
struct Clusters {
  std::vector<Complex> reps;
  std::vector<std::size_t> assignment;
};
Clusters cluster_points(const std::vector<Complex>& values, double tol);
bool complex_less(Complex a, Complex b);

// Orthonormal basis of the range of a Hermitian projection-like matrix (eigenvalues above 1/2).
Matrix projection_range(const Matrix& p);
// Orthonormal basis for the orthogonal complement of the columns of an orthonormal matrix.
Matrix orthonormal_complement(const Matrix& b);
// Splits span(c) into the parts where the Hermitian projection p acts as 1 and as 0.
std::pair<Matrix, Matrix> split_by_projection(const Matrix& c, const Matrix& p);
// Reproducible orthonormal basis for span(b): Gram-Schmidt of the projector columns in
// coordinate order, each vector rotated so its first nonzero entry is real positive.
Matrix canonical_basis(const Matrix& b);

bool is_structurally_equal(const Matrix& a, const Matrix& b);

// Runs fn(i) for i in [0, n) on up to `threads()` workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
void set_threads(unsigned n);
unsigned threads();

}  // namespace loch
