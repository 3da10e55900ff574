#include "loch/spectral.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace loch {

CoherentOperator LocalSpectralMeasure::E(const std::vector<std::size_t>& subset) const {
  CoherentOperator t{sys, sys, {}};
  for (std::size_t l = 0; l < sys->size(); ++l) {
    Matrix p = Matrix::Zero(sys->dim(l), sys->dim(l));
    for (std::size_t a : subset) {
      if (a >= atoms.size()) throw LookupError("atom index out of range");
      const Matrix& b = bases[l][a];
      if (b.cols() > 0) p += b * b.adjoint();
    }
    t.blocks.push_back(std::move(p));
  }
  return t;
}

CoherentOperator LocalSpectralMeasure::E_all() const {
  std::vector<std::size_t> all(atoms.size());
  std::iota(all.begin(), all.end(), 0);
  return E(all);
}

std::optional<std::size_t> LocalSpectralMeasure::atom_near(Complex z, double tol) const {
  for (std::size_t a = 0; a < atoms.size(); ++a)
    if (std::abs(atoms[a] - z) <= tol) return a;
  return std::nullopt;
}

LocalSpectralMeasure spectral_measure(const CoherentOperator& n, double cluster_tol, double normal_tol) {
  if (!n.square()) throw IncompatibleError("spectral measure needs an operator on one system");
  if (!classify(n, normal_tol).normal) throw ClassificationError("operator is not locally normal");
  const std::size_t nodes = n.blocks.size();
  std::vector<Eigensystem> es(nodes);
  parallel_for(nodes, [&](std::size_t l) { es[l] = schur_eigen(n.blocks[l]); });

  std::vector<Complex> all;
  std::vector<std::pair<std::size_t, Eigen::Index>> where;
  for (std::size_t l = 0; l < nodes; ++l)
    for (std::size_t k = 0; k < es[l].values.size(); ++k) {
      all.push_back(es[l].values[k]);
      where.emplace_back(l, static_cast<Eigen::Index>(k));
    }
  Clusters c = cluster_points(all, cluster_tol);

  LocalSpectralMeasure e;
  e.sys = n.domain;
  e.atoms = c.reps;
  std::vector<std::vector<std::vector<Eigen::Index>>> cols(nodes, std::vector<std::vector<Eigen::Index>>(c.reps.size()));
  for (std::size_t i = 0; i < all.size(); ++i) cols[where[i].first][c.assignment[i]].push_back(where[i].second);
  e.bases.resize(nodes);
  for (std::size_t l = 0; l < nodes; ++l)
    for (std::size_t a = 0; a < c.reps.size(); ++a) {
      Matrix b(n.domain->dim(l), static_cast<Eigen::Index>(cols[l][a].size()));
      for (std::size_t j = 0; j < cols[l][a].size(); ++j) b.col(static_cast<Eigen::Index>(j)) = es[l].vectors.col(cols[l][a][j]);
      e.bases[l].push_back(std::move(b));
    }
  return e;
}

CommutantReport commutant_check(const LocalSpectralMeasure& e, const CoherentOperator& n, const CoherentOperator& t, double tol) {
  CommutantReport r;
  for (std::size_t l = 0; l < t.blocks.size(); ++l)
    r.with_operator = std::max(r.with_operator, spectral_norm(t.blocks[l] * n.blocks[l] - n.blocks[l] * t.blocks[l]));
  for (std::size_t a = 0; a < e.atom_count(); ++a) {
    CoherentOperator p = e.E({a});
    for (std::size_t l = 0; l < t.blocks.size(); ++l)
      r.with_projections = std::max(r.with_projections, spectral_norm(t.blocks[l] * p.blocks[l] - p.blocks[l] * t.blocks[l]));
  }
  r.commutes_with_operator = r.with_operator <= tol;
  r.commutes_with_projections = r.with_projections <= tol;
  return r;
}

CoherentOperator integrate(const LocalSpectralMeasure& e,
                           const std::function<std::optional<Complex>(std::size_t, Complex)>& phi) {
  std::vector<Complex> v;
  for (std::size_t a = 0; a < e.atom_count(); ++a) {
    auto x = phi(a, e.atoms[a]);
    if (!x) throw DomainError("function has no value at atom " + format_complex(e.atoms[a]));
    v.push_back(*x);
  }
  CoherentOperator t{e.sys, e.sys, {}};
  for (std::size_t l = 0; l < e.sys->size(); ++l) {
    Matrix m = Matrix::Zero(e.sys->dim(l), e.sys->dim(l));
    for (std::size_t a = 0; a < v.size(); ++a) {
      const Matrix& b = e.bases[l][a];
      if (b.cols() > 0) m += v[a] * (b * b.adjoint());
    }
    t.blocks.push_back(std::move(m));
  }
  return t;
}

CoherentOperator integrate(const LocalSpectralMeasure& e, const std::function<Complex(Complex)>& phi) {
  return integrate(e, [&](std::size_t, Complex z) -> std::optional<Complex> { return phi(z); });
}

CoherentOperator borel_calculus(const std::function<Complex(Complex)>& psi, const CoherentOperator& n, double cluster_tol) {
  return integrate(spectral_measure(n, cluster_tol), psi);
}

// ---- multiplicity model ----

std::vector<std::size_t> MultiplicityModel::points_at(std::size_t node, int n) const {
  std::vector<std::size_t> out;
  for (std::size_t p : node_points.at(node))
    if (points[p].multiplicity == n) out.push_back(p);
  return out;
}

Matrix MultiplicityModel::model_block(std::size_t node) const {
  std::vector<Complex> diag;
  for (std::size_t p : node_points.at(node))
    for (int k = 0; k < points[p].multiplicity; ++k) diag.push_back(points[p].value);
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  return d;
}

double MultiplicityModel::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}
double MultiplicityModel::max_unitarity() const {
  return unitarity.empty() ? 0.0 : *std::max_element(unitarity.begin(), unitarity.end());
}
double FunctionalModel::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}
double FunctionalModel::max_unitarity() const {
  return unitarity.empty() ? 0.0 : *std::max_element(unitarity.begin(), unitarity.end());
}

namespace {

struct Piece {
  Matrix basis;
  Complex value;
  std::vector<int> bits;  // -1 until the projection has been applied
  std::size_t step;
};

Complex rayleigh(const Matrix& b, const Matrix& n) {
  return (b.adjoint() * n * b).trace() / static_cast<double>(b.cols());
}

// Splits every piece by P_lambda for each lambda whose bit is still unknown.
std::vector<Piece> refine(std::vector<Piece> pieces, const InductiveHilbertSystem& sys, std::size_t eps,
                          const std::vector<std::size_t>& lambdas) {
  for (std::size_t l : lambdas) {
    const Matrix p = projection_onto(sys, l, eps);
    std::vector<Piece> next;
    for (auto& pc : pieces) {
      if (pc.bits[l] != -1) {
        next.push_back(std::move(pc));
        continue;
      }
      auto [on, off] = split_by_projection(pc.basis, p);
      if (on.cols() > 0) {
        Piece a = pc;
        a.basis = std::move(on);
        a.bits[l] = 1;
        next.push_back(std::move(a));
      }
      if (off.cols() > 0) {
        Piece b = pc;
        b.basis = std::move(off);
        b.bits[l] = 0;
        next.push_back(std::move(b));
      }
    }
    pieces = std::move(next);
  }
  return pieces;
}

}  // namespace

MultiplicityModel multiplicity_model(const CoherentOperator& n, const ChainWitness& chain, const Tolerances& tol) {
  if (!n.square()) throw IncompatibleError("multiplicity model needs an operator on one system");
  const InductiveHilbertSystem& sys = *n.domain;
  const DirectedSet& ix = sys.index();
  if (chain.chain.empty()) throw PreconditionError("a chain witness is required (index must be sequentially finite)");
  auto cert = is_sequentially_finite(ix, chain);
  if (!cert) throw PreconditionError("chain witness rejected: " + cert.violation().axiom + " " + cert.violation().message);
  auto rep = check_representing(sys, tol.representing);
  if (!rep) throw PreconditionError("system is not representing at " + rep.violation().witness[2]);
  if (!classify(n, tol.coherence).normal) throw ClassificationError("operator is not locally normal");

  const auto lex = ix.lexicographic_order();
  const auto& steps = cert.value().chain;
  std::vector<Piece> pieces;
  for (std::size_t m = 0; m < steps.size(); ++m) {
    const std::size_t e = steps[m];
    const Eigen::Index d = sys.dim(e);
    Matrix old_proj = Matrix::Zero(d, d);
    if (m > 0) {
      const Matrix j = sys.embedding(steps[m - 1], e);
      for (auto& pc : pieces) pc.basis = j * pc.basis;
      old_proj = j * j.adjoint();
    }
    std::vector<std::size_t> lambdas;
    for (std::size_t l : lex)
      if (ix.leq(l, e)) lambdas.push_back(l);

    // Earlier points only need the projections that are new at this step.
    pieces = refine(std::move(pieces), sys, e, lambdas);

    const Matrix fresh = projection_range(Matrix::Identity(d, d) - old_proj);
    std::vector<Piece> added;
    if (fresh.cols() > 0) {
      const Matrix restricted = fresh.adjoint() * n.blocks[e] * fresh;
      Eigensystem es = schur_eigen(restricted);
      Clusters c = cluster_points(es.values, tol.cluster);
      for (std::size_t a = 0; a < c.reps.size(); ++a) {
        std::vector<Eigen::Index> cols;
        for (std::size_t k = 0; k < es.values.size(); ++k)
          if (c.assignment[k] == a) cols.push_back(static_cast<Eigen::Index>(k));
        Matrix b(d, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = fresh * es.vectors.col(cols[k]);
        added.push_back({std::move(b), c.reps[a], std::vector<int>(ix.size(), -1), m});
      }
      added = refine(std::move(added), sys, e, lambdas);
    }
    for (auto& pc : added) pieces.push_back(std::move(pc));
  }

  MultiplicityModel model;
  model.sys = n.domain;
  model.chain = chain.chain;
  model.top = steps.back();
  const Matrix& ntop = n.blocks[model.top];
  for (auto& pc : pieces) {
    if (std::find(pc.bits.begin(), pc.bits.end(), -1) != pc.bits.end())
      throw ConsistencyAlarm("a projection was never applied to a model point");
    ModelPoint p;
    p.basis = canonical_basis(pc.basis);
    p.multiplicity = static_cast<int>(p.basis.cols());
    p.value = rayleigh(p.basis, ntop);
    p.membership = pc.bits;
    p.step = pc.step;
    model.points.push_back(std::move(p));
  }
  auto bit_string = [&](const ModelPoint& p) {
    std::string s;
    for (std::size_t l : lex) s += static_cast<char>('0' + p.membership[l]);
    return s;
  };
  std::stable_sort(model.points.begin(), model.points.end(), [&](const ModelPoint& a, const ModelPoint& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
    if (std::abs(a.value - b.value) > tol.cluster) return complex_less(a.value, b.value);
    if (bit_string(a) != bit_string(b)) return bit_string(a) < bit_string(b);
    return a.step < b.step;
  });
  for (std::size_t i = 0; i < model.points.size(); ++i) {
    model.points[i].id = "x" + std::to_string(i);
    model.max_multiplicity = std::max(model.max_multiplicity, model.points[i].multiplicity);
  }

  model.node_points.resize(ix.size());
  model.unitaries.resize(ix.size());
  model.residuals.resize(ix.size());
  model.unitarity.resize(ix.size());
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t i = 0; i < model.points.size(); ++i)
      if (model.points[i].membership[l] == 1) model.node_points[l].push_back(i);
  parallel_for(ix.size(), [&](std::size_t l) {
    const Matrix j = sys.embedding(l, model.top);
    const Eigen::Index d = sys.dim(l);
    Eigen::Index rows = 0;
    for (std::size_t p : model.node_points[l]) rows += model.points[p].multiplicity;
    if (rows != d) throw ConsistencyAlarm("dimension bookkeeping fails at node " + ix.name(l));
    Matrix u(d, d);
    Eigen::Index r = 0;
    for (std::size_t p : model.node_points[l]) {
      Matrix local = j.adjoint() * model.points[p].basis;
      for (Eigen::Index k = 0; k < local.cols(); ++k) u.row(r++) = local.col(k).adjoint();
    }
    const Matrix id = Matrix::Identity(d, d);
    model.unitarity[l] = std::max(spectral_norm(u * u.adjoint() - id), spectral_norm(u.adjoint() * u - id));
    model.residuals[l] = spectral_norm(u * n.blocks[l] * u.adjoint() - model.model_block(l));
    model.unitaries[l] = std::move(u);
  });
  return model;
}

FunctionalModel functional_model(const CoherentOperator& n, const ChainWitness& chain, const Tolerances& tol) {
  FunctionalModel f;
  f.multiplicity = multiplicity_model(n, chain, tol);
  const auto& mm = f.multiplicity;
  auto ms = std::make_shared<InductiveMeasureSystem>();
  ms->index = n.domain->index_ptr();
  for (std::size_t l = 0; l < ms->index->size(); ++l) {
    MeasureSpaceNode node;
    for (std::size_t p : mm.node_points[l])
      for (int k = 1; k <= mm.points[p].multiplicity; ++k) node.atoms.push_back({mm.points[p].id + "#" + std::to_string(k), 1.0});
    ms->nodes.push_back(std::move(node));
  }
  f.measure = ms;
  f.l2 = discretize_l2(f.measure, 1);
  std::map<std::string, Complex> value_of;
  for (const auto& p : mm.points) value_of[p.id] = p.value;
  f.phi = LocFunction::from(f.l2, [&](std::size_t, const CarrierPoint& cp) {
    return value_of.at(cp.key.substr(0, cp.key.find('#')));
  });
  auto v = validate_coherent(mm.unitaries, n.domain, f.l2.hilbert, 1e-9);
  if (!v) throw ConsistencyAlarm("model unitaries are not coherent: " + v.violation().message);
  f.v = v.value();
  CoherentOperator mphi = multiplication_operator(f.phi, f.l2);
  for (std::size_t l = 0; l < mm.unitaries.size(); ++l) {
    const Matrix& u = f.v.blocks[l];
    f.residuals.push_back(spectral_norm(u * n.blocks[l] * u.adjoint() - mphi.blocks[l]));
    f.unitarity.push_back(mm.unitarity[l]);
  }
  return f;
}

DirectIntegralView direct_integral_view(const MultiplicityModel& m) {
  DirectIntegralView v;
  const DirectedSet& ix = m.sys->index();
  for (std::size_t l = 0; l < ix.size(); ++l) {
    v.nodes.push_back(ix.name(l));
    std::vector<Fiber> fib;
    for (std::size_t p : m.node_points[l]) fib.push_back({m.points[p].id, m.points[p].multiplicity, m.points[p].value});
    v.fibers.push_back(std::move(fib));
  }
  return v;
}

Matrix reassemble(const DirectIntegralView& view, std::size_t node) {
  Eigen::Index d = 0;
  for (const auto& f : view.fibers.at(node)) d += f.dim;
  Matrix out = Matrix::Zero(d, d);
  Eigen::Index r = 0;
  for (const auto& f : view.fibers[node])
    for (int k = 0; k < f.dim; ++k, ++r) out(r, r) = f.value;
  return out;
}

}  // namespace loch
