#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "loch/hilbert.hpp"
#include "loch/measure.hpp"
#include "loch/operator.hpp"
#include "loch/order.hpp"

// Seeded generators for property tests and the acceptance suite.
namespace loch::rnd {

using Rng = std::mt19937_64;

struct RandomIndex {
  std::shared_ptr<const DirectedSet> index;
  ChainWitness chain;  // increasing, ends at the top element
};
// Random partial order on `size` elements "a", "b", ... with the last element on top.
RandomIndex random_index(Rng& rng, int size);

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Matrix random_unitary(Rng& rng, Eigen::Index d);

// Inoue system H_lambda = sum of G_alpha over alpha <= lambda, optionally seen
// through random per-node unitaries.
struct InoueNet {
  RandomIndex ix;
  std::vector<Eigen::Index> component_dims;
  std::vector<std::vector<InoueBlock>> blocks;
  std::vector<Matrix> twists;  // identity when untwisted
  SystemPtr sys;
};
InoueNet random_inoue(Rng& rng, int index_size, Eigen::Index max_node_dim, bool twisted);
InoueNet inoue_on(Rng& rng, const RandomIndex& ix, Eigen::Index max_node_dim, bool twisted);

// Coherent net assembled from one matrix per component.
CoherentOperator assemble(const InoueNet& net, const std::vector<Matrix>& components);
CoherentOperator assemble(const InoueNet& dom, const InoueNet& cod, const std::vector<Matrix>& components);

CoherentOperator random_coherent(Rng& rng, const InoueNet& net);
struct NormalParts {
  std::vector<Matrix> u;                 // per component
  std::vector<std::vector<Complex>> d;   // per component
};
// Components U diag(d) U^* with eigenvalues from a small set, so multiplicities repeat.
CoherentOperator random_normal(Rng& rng, const InoueNet& net, NormalParts* parts = nullptr);
// Element of the commutant of a normal net built by random_normal.
CoherentOperator random_commutant(Rng& rng, const InoueNet& net, const NormalParts& parts);

// Adds a random perturbation to T_nu for some strict pair lambda < nu with H_lambda != 0.
std::optional<std::vector<Matrix>> mutate(Rng& rng, const CoherentOperator& t);

struct FpTriple {
  CoherentOperator n, m, b;  // n on b's codomain, m on b's domain, n b = b m
};
FpTriple random_fp_triple(Rng& rng, int index_size, Eigen::Index max_node_dim);

// Atoms of component alpha appear in every node above alpha; weights in (0.1, 2).
std::shared_ptr<InductiveMeasureSystem> random_atomic_measure(Rng& rng, const RandomIndex& ix, int max_atoms);

}  // namespace loch::rnd
