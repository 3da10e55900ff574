#include "loch/hilbert.hpp"

#include <algorithm>

namespace loch {

InductiveHilbertSystem::InductiveHilbertSystem(std::shared_ptr<const DirectedSet> index, std::vector<Eigen::Index> dims)
    : index_(std::move(index)), dims_(std::move(dims)) {
  if (!index_) throw MalformedInput("missing index");
  if (dims_.size() != index_->size()) throw MalformedInput("one dimension per index element is required");
  for (auto d : dims_)
    if (d < 0) throw MalformedInput("negative dimension");
}

void InductiveHilbertSystem::set_embedding(std::size_t lambda, std::size_t nu, Matrix j) {
  if (!index_->leq(lambda, nu))
    throw OrderError("embedding for incomparable pair " + index_->name(lambda) + ", " + index_->name(nu));
  if (j.rows() != dims_[nu] || j.cols() != dims_[lambda])
    throw MalformedWitness("embedding " + index_->name(lambda) + "<=" + index_->name(nu) + " has shape " +
                           std::to_string(j.rows()) + "x" + std::to_string(j.cols()) + ", expected " +
                           std::to_string(dims_[nu]) + "x" + std::to_string(dims_[lambda]));
  emb_[{lambda, nu}] = std::move(j);
}

Matrix InductiveHilbertSystem::embedding(std::size_t lambda, std::size_t nu) const {
  if (auto it = emb_.find({lambda, nu}); it != emb_.end()) return it->second;
  if (lambda == nu) return Matrix::Identity(dims_[nu], dims_[nu]);
  if (!index_->leq(lambda, nu))
    throw OrderError(index_->name(lambda) + " is not below " + index_->name(nu));
  throw MalformedWitness("missing embedding " + index_->name(lambda) + "<=" + index_->name(nu));
}

Checked<HilbertCertificate> validate_hilbert_system(const InductiveHilbertSystem& sys, double tol) {
  const DirectedSet& ix = sys.index();
  HilbertCertificate cert;
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t v : ix.up_set(l)) {
      Matrix j = sys.embedding(l, v);
      if (j.rows() != sys.dim(v) || j.cols() != sys.dim(l))
        throw MalformedWitness("embedding " + ix.name(l) + "<=" + ix.name(v) + " has the wrong shape");
      if (l == v) {
        double r = spectral_norm(j - Matrix::Identity(j.rows(), j.cols()));
        if (r > tol) return Violation{"identity", "J_{l,l} is not the identity", {ix.name(l)}, r};
        continue;
      }
      if (sys.dim(l) > sys.dim(v))
        return Violation{"isometry", "dimension decreases along the order", {ix.name(l), ix.name(v)}, 0.0};
      double r = spectral_norm(j.adjoint() * j - Matrix::Identity(j.cols(), j.cols()));
      cert.max_isometry_residual = std::max(cert.max_isometry_residual, r);
      if (r > tol) return Violation{"isometry", "J^*J differs from the identity", {ix.name(l), ix.name(v)}, r};
      ++cert.pairs_checked;
    }
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t v : ix.up_set(l))
      for (std::size_t e : ix.up_set(v)) {
        if (l == v || v == e) continue;
        double r = spectral_norm(sys.embedding(v, e) * sys.embedding(l, v) - sys.embedding(l, e));
        if (r > tol)
          return Violation{"transitivity", "J_{e,v} J_{v,l} differs from J_{e,l}", {ix.name(l), ix.name(v), ix.name(e)}, r};
        ++cert.triples_checked;
      }
  return cert;
}

Matrix projection_onto(const InductiveHilbertSystem& sys, std::size_t lambda, std::size_t eps) {
  if (!sys.index().leq(lambda, eps))
    throw OrderError(sys.index().name(lambda) + " is not below " + sys.index().name(eps));
  Matrix j = sys.embedding(lambda, eps);
  return j * j.adjoint();
}

double representing_commutator(const InductiveHilbertSystem& sys, std::size_t lambda, std::size_t nu, std::size_t eps) {
  Matrix a = projection_onto(sys, lambda, eps);
  Matrix b = projection_onto(sys, nu, eps);
  return spectral_norm(a * b - b * a);
}

Checked<RepresentingCertificate> check_representing(const InductiveHilbertSystem& sys, double tol) {
  const DirectedSet& ix = sys.index();
  RepresentingCertificate cert;
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t v = l + 1; v < ix.size(); ++v) {
      std::size_t e = upper_bound(ix, l, v);
      double r = representing_commutator(sys, l, v, e);
      cert.entries.push_back({l, v, e, r});
      cert.max_norm = std::max(cert.max_norm, r);
      if (r > tol)
        return Violation{"representing", "projections do not commute", {ix.name(l), ix.name(v), ix.name(e)}, r};
    }
  return cert;
}

std::vector<std::vector<InoueBlock>> inoue_blocks(const DirectedSet& index, const std::vector<Eigen::Index>& component_dims) {
  if (component_dims.size() != index.size()) throw MalformedInput("one component dimension per index element is required");
  const auto order = index.lexicographic_order();
  std::vector<std::vector<InoueBlock>> out(index.size());
  for (std::size_t l = 0; l < index.size(); ++l) {
    Eigen::Index off = 0;
    for (std::size_t a : order)
      if (index.leq(a, l)) {
        if (component_dims[a] < 0) throw MalformedInput("negative component dimension");
        out[l].push_back({a, off, component_dims[a]});
        off += component_dims[a];
      }
  }
  return out;
}

InductiveHilbertSystem build_inoue_space(std::shared_ptr<const DirectedSet> index,
                                         const std::vector<Eigen::Index>& component_dims) {
  auto blocks = inoue_blocks(*index, component_dims);
  std::vector<Eigen::Index> dims;
  for (const auto& b : blocks) {
    Eigen::Index d = 0;
    for (const auto& x : b) d += x.dim;
    dims.push_back(d);
  }
  InductiveHilbertSystem sys(index, dims);
  for (std::size_t l = 0; l < index->size(); ++l)
    for (std::size_t v : index->up_set(l)) {
      if (v == l) continue;
      Matrix j = Matrix::Zero(dims[v], dims[l]);
      for (const auto& src : blocks[l]) {
        auto dst = std::find_if(blocks[v].begin(), blocks[v].end(), [&](const InoueBlock& b) { return b.component == src.component; });
        for (Eigen::Index k = 0; k < src.dim; ++k) j(dst->offset + k, src.offset + k) = 1.0;
      }
      sys.set_embedding(l, v, std::move(j));
    }
  return sys;
}

InductiveHilbertSystem twist(const InductiveHilbertSystem& sys, const std::vector<Matrix>& w) {
  if (w.size() != sys.size()) throw MalformedInput("one unitary per node is required");
  InductiveHilbertSystem out(sys.index_ptr(), sys.dims());
  for (const auto& [key, j] : sys.embeddings()) out.set_embedding(key.first, key.second, w[key.second] * j * w[key.first].adjoint());
  return out;
}

}  // namespace loch
