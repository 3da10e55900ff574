#include "loch/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

namespace loch {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Eigensystem schur_eigen(const Matrix& a) {
  Eigensystem es;
  if (a.rows() == 0) {
    es.vectors = Matrix(0, 0);
    return es;
  }
  Eigen::ComplexSchur<Matrix> schur(a);
  const Matrix& t = schur.matrixT();
  for (Eigen::Index i = 0; i < t.rows(); ++i) es.values.push_back(t(i, i));
  es.vectors = schur.matrixU();
  return es;
}

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Clusters cluster_points(const std::vector<Complex>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return complex_less(values[a], values[b]); });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex a = values[order[i]], b = values[order[j]];
      if (b.real() - a.real() > tol) break;
      if (std::abs(a - b) <= tol) parent[find(order[i])] = find(order[j]);
    }
  std::vector<std::size_t> rep_of(n, n);  // root -> member index of representative
  for (std::size_t i : order) {
    std::size_t r = find(i);
    if (rep_of[r] == n) rep_of[r] = i;  // first in lexicographic order
  }
  Clusters c;
  std::vector<std::size_t> roots;
  for (std::size_t i : order)
    if (rep_of[find(i)] == i) roots.push_back(find(i));
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    slot[roots[k]] = k;
    c.reps.push_back(values[rep_of[roots[k]]]);
  }
  c.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.assignment[i] = slot[find(i)];
  return c;
}

Matrix projection_range(const Matrix& p) {
  const Eigen::Index n = p.rows();
  if (n == 0) return Matrix(0, 0);
  Matrix h = (p + p.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Matrix out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return out;
}

Matrix orthonormal_complement(const Matrix& b) {
  const Eigen::Index n = b.rows(), k = b.cols();
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(b);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

std::pair<Matrix, Matrix> split_by_projection(const Matrix& c, const Matrix& p) {
  const Eigen::Index k = c.cols();
  if (k == 0) return {c, c};
  Matrix h = c.adjoint() * p * c;
  h = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  std::vector<Eigen::Index> on, off;
  for (Eigen::Index i = 0; i < k; ++i) (es.eigenvalues()(i) > 0.5 ? on : off).push_back(i);
  auto take = [&](const std::vector<Eigen::Index>& idx) {
    Matrix out(c.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = c * es.eigenvectors().col(idx[j]);
    return out;
  };
  return {take(on), take(off)};
}

Matrix canonical_basis(const Matrix& b) {
  const Eigen::Index n = b.rows(), k = b.cols();
  Matrix p = b * b.adjoint();
  Matrix out(n, k);
  Eigen::Index filled = 0;
  for (Eigen::Index j = 0; j < n && filled < k; ++j) {
    Vector v = p.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index q = 0; q < filled; ++q) v -= out.col(q) * out.col(q).dot(v);
    const double nv = v.norm();
    if (nv < 1e-6) continue;
    v /= nv;
    // re-project into the subspace to shed drift, then renormalise
    v = p * v;
    for (Eigen::Index q = 0; q < filled; ++q) v -= out.col(q) * out.col(q).dot(v);
    v /= v.norm();
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        v(i) = Complex(v(i).real(), 0.0);
        break;
      }
    out.col(filled++) = v;
  }
  if (filled != k) throw ConsistencyAlarm("canonical basis lost rank");
  return out;
}

bool is_structurally_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_threads(unsigned n) { g_threads = std::max(1u, n); }
unsigned threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned t = static_cast<unsigned>(std::min<std::size_t>(threads(), n));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace loch
