#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "loch/common.hpp"
#include "loch/hilbert.hpp"
#include "loch/linalg.hpp"
#include "loch/measure.hpp"

namespace loch {

using SystemPtr = std::shared_ptr<const InductiveHilbertSystem>;

// Net of blocks T_lambda : H^dom_lambda -> H^cod_lambda over one index set.
struct CoherentOperator {
  SystemPtr domain;
  SystemPtr codomain;
  std::vector<Matrix> blocks;

  const DirectedSet& index() const { return domain->index(); }
  bool square() const { return domain == codomain; }
};

struct CoherenceVerdicts {
  bool intertwining_ok = true;  // T_nu J = J T_lambda and T_nu P = P T_nu
  bool block_ok = true;         // [J Q]^* T_nu [J Q] = diag(T_lambda, *)
  double intertwining_residual = 0.0;
  double block_residual = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> first_intertwining_failure;
  std::optional<std::pair<std::size_t, std::size_t>> first_block_failure;
};

// Evaluates both characterizations independently over all comparable pairs.
CoherenceVerdicts coherence_verdicts(const std::vector<Matrix>& blocks, const InductiveHilbertSystem& dom,
                                     const InductiveHilbertSystem& cod, double tol);

Checked<CoherentOperator> validate_coherent(std::vector<Matrix> blocks, SystemPtr domain, SystemPtr codomain,
                                            double tol = 1e-10);
Checked<CoherentOperator> validate_coherent(std::vector<Matrix> blocks, SystemPtr sys, double tol = 1e-10);

CoherentOperator identity_operator(SystemPtr sys);
CoherentOperator adjoint(const CoherentOperator& t);
CoherentOperator compose(const CoherentOperator& s, const CoherentOperator& t);  // s after t
CoherentOperator add(const CoherentOperator& s, const CoherentOperator& t);
CoherentOperator scale(Complex a, const CoherentOperator& t);
// Asserts coherence of a derived net; throws ConsistencyAlarm otherwise.
void assert_coherent(const CoherentOperator& t, double tol);

double seminorm(const CoherentOperator& t, std::size_t nu);
double seminorm(const CoherentOperator& t, const std::string& nu);

struct OperatorClass {
  bool normal, selfadjoint, positive, projection, isometric, unitary;
  double normal_residual, hermitian_residual, idempotent_residual, isometry_residual, coisometry_residual;
  double min_eigenvalue;
};
OperatorClass classify(const CoherentOperator& t, double tol = 1e-10);

struct SpectrumSet {
  struct Entry {
    Complex value;
    std::size_t node;
  };
  std::vector<Entry> multiset;
  std::vector<Complex> points;  // cluster representatives, sorted by (re, im)
  std::vector<std::vector<std::size_t>> nodes_of_point;
  bool contains(Complex z, double tol) const;
};
SpectrumSet spectrum(const CoherentOperator& t, double cluster_tol = 1e-8);
SpectrumSet make_spectrum_set(std::vector<SpectrumSet::Entry> entries, double cluster_tol);
// Smallest singular value of zI - T_lambda over all nodes.
double resolvent_gap(const CoherentOperator& t, Complex z);

// Function with one value per carrier point (basis then null points) of every node.
struct LocFunction {
  std::vector<std::vector<Complex>> values;
  static LocFunction from(const L2System& l2, const std::function<Complex(std::size_t node, const CarrierPoint&)>& f);
  static LocFunction from_location(const L2System& l2, const std::function<Complex(Complex)>& f);
};
// Throws DomainError if values disagree across an inclusion.
void check_restriction(const LocFunction& phi, const L2System& l2);
double sup_seminorm(const LocFunction& phi, const L2System& l2, std::size_t node);

CoherentOperator multiplication_operator(const LocFunction& phi, const L2System& l2);
SpectrumSet essential_range(const LocFunction& phi, const L2System& l2, double cluster_tol = 1e-8);

struct FugledePutnamReport {
  double residual = 0.0;  // max over nodes of ||N^* B - B M^*||
  std::size_t worst_node = 0;
  bool pass = false;
};
// N on B's codomain, M on B's domain, N B = B M required.
FugledePutnamReport fuglede_putnam_check(const CoherentOperator& n, const CoherentOperator& m,
                                         const CoherentOperator& b, double precondition_tol = 1e-10,
                                         double pass_tol = 1e-9);

}  // namespace loch
