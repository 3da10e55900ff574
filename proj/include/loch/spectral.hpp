#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loch/measure.hpp"
#include "loch/operator.hpp"
#include "loch/order.hpp"

namespace loch {

// Projection-valued measure on the finite set of clustered eigenvalues.
struct LocalSpectralMeasure {
  SystemPtr sys;
  std::vector<Complex> atoms;               // sorted by (re, im)
  std::vector<std::vector<Matrix>> bases;   // [node][atom]: orthonormal eigenspace basis, possibly empty

  std::size_t atom_count() const { return atoms.size(); }
  CoherentOperator E(const std::vector<std::size_t>& atom_subset) const;
  CoherentOperator E_all() const;
  std::optional<std::size_t> atom_near(Complex z, double tol) const;
};

LocalSpectralMeasure spectral_measure(const CoherentOperator& n, double cluster_tol = 1e-8, double normal_tol = 1e-10);

struct CommutantReport {
  double with_operator = 0.0;     // ||T N - N T||
  double with_projections = 0.0;  // max over atoms of ||T E({a}) - E({a}) T||
  bool commutes_with_operator = false;
  bool commutes_with_projections = false;
};
CommutantReport commutant_check(const LocalSpectralMeasure& e, const CoherentOperator& n, const CoherentOperator& t,
                                double tol = 1e-9);

// N(phi) = sum of phi(atom) E({atom}); a nullopt value is a domain error.
CoherentOperator integrate(const LocalSpectralMeasure& e,
                           const std::function<std::optional<Complex>(std::size_t atom, Complex point)>& phi);
CoherentOperator integrate(const LocalSpectralMeasure& e, const std::function<Complex(Complex)>& phi);
CoherentOperator borel_calculus(const std::function<Complex(Complex)>& psi, const CoherentOperator& n,
                                double cluster_tol = 1e-8);

struct ModelPoint {
  std::string id;
  int multiplicity = 0;
  Complex value;
  std::vector<int> membership;  // per index element: 1 if the point lies in H_lambda
  std::size_t step = 0;         // chain step that introduced it
  Matrix basis;                 // orthonormal, in coordinates of the last chain element
};

struct MultiplicityModel {
  SystemPtr sys;
  std::vector<std::string> chain;
  std::size_t top = 0;
  int max_multiplicity = 0;
  std::vector<ModelPoint> points;                   // ordered by (multiplicity, label)
  std::vector<std::vector<std::size_t>> node_points;  // per node, in model order
  std::vector<Matrix> unitaries;                    // U_lambda, rows ordered (n, point, copy)
  std::vector<double> residuals;                    // ||U N U^* - diag(phi)||
  std::vector<double> unitarity;                    // max(||U U^* - I||, ||U^* U - I||)

  std::vector<std::size_t> points_at(std::size_t node, int n) const;
  Matrix model_block(std::size_t node) const;  // diag(phi) in model coordinates
  double max_residual() const;
  double max_unitarity() const;
};

MultiplicityModel multiplicity_model(const CoherentOperator& n, const ChainWitness& chain,
                                     const Tolerances& tol = Tolerances{});

struct FunctionalModel {
  MultiplicityModel multiplicity;
  std::shared_ptr<const InductiveMeasureSystem> measure;  // counting measure on point copies
  L2System l2;
  LocFunction phi;
  CoherentOperator v;  // locally unitary, from the source system to l2.hilbert
  std::vector<double> residuals;
  std::vector<double> unitarity;
  double max_residual() const;
  double max_unitarity() const;
};

FunctionalModel functional_model(const CoherentOperator& n, const ChainWitness& chain,
                                 const Tolerances& tol = Tolerances{});

struct Fiber {
  std::string point;
  int dim;
  Complex value;
};
struct DirectIntegralView {
  std::vector<std::string> nodes;
  std::vector<std::vector<Fiber>> fibers;
};
DirectIntegralView direct_integral_view(const MultiplicityModel& m);
Matrix reassemble(const DirectIntegralView& view, std::size_t node);

}  // namespace loch
