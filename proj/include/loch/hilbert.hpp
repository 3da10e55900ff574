#pragma once

#include <map>
#include <memory>
#include <vector>

#include "loch/common.hpp"
#include "loch/linalg.hpp"
#include "loch/order.hpp"

namespace loch {

// Finite-dimensional strictly inductive system: one space per index and an
// isometry J_{nu,lambda} : H_lambda -> H_nu for each lambda <= nu.
class InductiveHilbertSystem {
 public:
  InductiveHilbertSystem(std::shared_ptr<const DirectedSet> index, std::vector<Eigen::Index> dims);

  const DirectedSet& index() const { return *index_; }
  const std::shared_ptr<const DirectedSet>& index_ptr() const { return index_; }
  std::size_t size() const { return dims_.size(); }
  Eigen::Index dim(std::size_t node) const { return dims_.at(node); }
  const std::vector<Eigen::Index>& dims() const { return dims_; }

  void set_embedding(std::size_t lambda, std::size_t nu, Matrix j);
  bool has_embedding(std::size_t lambda, std::size_t nu) const { return emb_.count({lambda, nu}) != 0; }
  // J_{nu,lambda}; identity when lambda == nu and nothing is stored.
  Matrix embedding(std::size_t lambda, std::size_t nu) const;
  const std::map<std::pair<std::size_t, std::size_t>, Matrix>& embeddings() const { return emb_; }

 private:
  std::shared_ptr<const DirectedSet> index_;
  std::vector<Eigen::Index> dims_;
  std::map<std::pair<std::size_t, std::size_t>, Matrix> emb_;
};

struct HilbertCertificate {
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
  double max_isometry_residual = 0.0;
};
Checked<HilbertCertificate> validate_hilbert_system(const InductiveHilbertSystem& sys, double tol = 1e-12);

// P_{lambda,eps} = J J^*
Matrix projection_onto(const InductiveHilbertSystem& sys, std::size_t lambda, std::size_t eps);
double representing_commutator(const InductiveHilbertSystem& sys, std::size_t lambda, std::size_t nu,
                               std::size_t eps);

struct RepresentingEntry {
  std::size_t lambda, nu, eps;
  double norm;
};
struct RepresentingCertificate {
  std::vector<RepresentingEntry> entries;
  double max_norm = 0.0;
};
Checked<RepresentingCertificate> check_representing(const InductiveHilbertSystem& sys, double tol = 1e-10);

// H_lambda = direct sum of G_alpha over alpha <= lambda, blocks in identifier order.
InductiveHilbertSystem build_inoue_space(std::shared_ptr<const DirectedSet> index,
                                         const std::vector<Eigen::Index>& component_dims);
struct InoueBlock {
  std::size_t component;
  Eigen::Index offset;
  Eigen::Index dim;
};
std::vector<std::vector<InoueBlock>> inoue_blocks(const DirectedSet& index,
                                                  const std::vector<Eigen::Index>& component_dims);

// Same system seen through per-node unitaries: J' = W_nu J W_lambda^*.
InductiveHilbertSystem twist(const InductiveHilbertSystem& sys, const std::vector<Matrix>& unitaries);

}  // namespace loch
