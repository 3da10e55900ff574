#include "loch/operator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

namespace loch {

namespace {

void check_shapes(const std::vector<Matrix>& blocks, const InductiveHilbertSystem& dom, const InductiveHilbertSystem& cod) {
  if (dom.index().elements() != cod.index().elements())
    throw IncompatibleError("domain and codomain systems use different index sets");
  if (blocks.size() != dom.size()) throw MalformedInput("one block per index element is required");
  for (std::size_t l = 0; l < blocks.size(); ++l)
    if (blocks[l].rows() != cod.dim(l) || blocks[l].cols() != dom.dim(l))
      throw MalformedInput("block " + dom.index().name(l) + " has shape " + std::to_string(blocks[l].rows()) + "x" +
                           std::to_string(blocks[l].cols()) + ", expected " + std::to_string(cod.dim(l)) + "x" +
                           std::to_string(dom.dim(l)));
}

double max_block_norm(const std::vector<Matrix>& blocks) {
  double m = 0.0;
  for (const auto& b : blocks) m = std::max(m, spectral_norm(b));
  return m;
}

}  // namespace

CoherenceVerdicts coherence_verdicts(const std::vector<Matrix>& blocks, const InductiveHilbertSystem& dom,
                                     const InductiveHilbertSystem& cod, double tol) {
  check_shapes(blocks, dom, cod);
  const DirectedSet& ix = dom.index();
  CoherenceVerdicts v;
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t n : ix.up_set(l)) {
      if (n == l) continue;
      const Matrix j = dom.embedding(l, n), jc = cod.embedding(l, n);
      const Matrix& tn = blocks[n];
      const Matrix& tl = blocks[l];

      const Matrix p = j * j.adjoint(), pc = jc * jc.adjoint();
      const double r1 = std::max(spectral_norm(tn * j - jc * tl), spectral_norm(tn * p - pc * tn));

      const Matrix q = orthonormal_complement(j), qc = orthonormal_complement(jc);
      const double r2 = std::max({spectral_norm(jc.adjoint() * tn * j - tl), spectral_norm(qc.adjoint() * tn * j),
                                  spectral_norm(jc.adjoint() * tn * q)});

      v.intertwining_residual = std::max(v.intertwining_residual, r1);
      v.block_residual = std::max(v.block_residual, r2);
      if (r1 > tol && v.intertwining_ok) {
        v.intertwining_ok = false;
        v.first_intertwining_failure = std::make_pair(l, n);
      }
      if (r2 > tol && v.block_ok) {
        v.block_ok = false;
        v.first_block_failure = std::make_pair(l, n);
      }
    }
  return v;
}

Checked<CoherentOperator> validate_coherent(std::vector<Matrix> blocks, SystemPtr domain, SystemPtr codomain, double tol) {
  CoherenceVerdicts v = coherence_verdicts(blocks, *domain, *codomain, tol);
  if (v.intertwining_ok != v.block_ok)
    throw ConsistencyAlarm("coherence characterizations disagree (residuals " + std::to_string(v.intertwining_residual) +
                           " and " + std::to_string(v.block_residual) + ")");
  if (!v.intertwining_ok) {
    auto [l, n] = *v.first_intertwining_failure;
    return Violation{"coherence", "T_nu is not block diagonal with corner T_lambda",
                     {domain->index().name(l), domain->index().name(n)}, v.intertwining_residual};
  }
  return CoherentOperator{std::move(domain), std::move(codomain), std::move(blocks)};
}

Checked<CoherentOperator> validate_coherent(std::vector<Matrix> blocks, SystemPtr sys, double tol) {
  return validate_coherent(std::move(blocks), sys, sys, tol);
}

void assert_coherent(const CoherentOperator& t, double tol) {
  const double scale = 1.0 + max_block_norm(t.blocks);
  CoherenceVerdicts v = coherence_verdicts(t.blocks, *t.domain, *t.codomain, tol * scale);
  if (!v.intertwining_ok || !v.block_ok)
    throw ConsistencyAlarm("derived net lost coherence (residual " + std::to_string(v.intertwining_residual) + ")");
}

CoherentOperator identity_operator(SystemPtr sys) {
  CoherentOperator t{sys, sys, {}};
  for (std::size_t l = 0; l < sys->size(); ++l) t.blocks.push_back(Matrix::Identity(sys->dim(l), sys->dim(l)));
  return t;
}

namespace {
constexpr double kDerivedTol = 1e-9;
}

CoherentOperator adjoint(const CoherentOperator& t) {
  CoherentOperator a{t.codomain, t.domain, {}};
  for (const auto& b : t.blocks) a.blocks.push_back(b.adjoint());
  assert_coherent(a, kDerivedTol);
  return a;
}

CoherentOperator compose(const CoherentOperator& s, const CoherentOperator& t) {
  if (s.domain != t.codomain) throw IncompatibleError("compose: systems do not match");
  CoherentOperator r{t.domain, s.codomain, {}};
  for (std::size_t l = 0; l < t.blocks.size(); ++l) r.blocks.push_back(s.blocks[l] * t.blocks[l]);
  assert_coherent(r, kDerivedTol);
  return r;
}

CoherentOperator add(const CoherentOperator& s, const CoherentOperator& t) {
  if (s.domain != t.domain || s.codomain != t.codomain) throw IncompatibleError("add: systems do not match");
  CoherentOperator r{s.domain, s.codomain, {}};
  for (std::size_t l = 0; l < t.blocks.size(); ++l) r.blocks.push_back(s.blocks[l] + t.blocks[l]);
  assert_coherent(r, kDerivedTol);
  return r;
}

CoherentOperator scale(Complex a, const CoherentOperator& t) {
  CoherentOperator r{t.domain, t.codomain, {}};
  for (const auto& b : t.blocks) r.blocks.push_back(a * b);
  return r;
}

double seminorm(const CoherentOperator& t, std::size_t nu) {
  if (nu >= t.blocks.size()) throw LookupError("unknown node");
  return spectral_norm(t.blocks[nu]);
}

double seminorm(const CoherentOperator& t, const std::string& nu) { return seminorm(t, t.index().index_of(nu)); }

OperatorClass classify(const CoherentOperator& t, double tol) {
  OperatorClass c{};
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  bool square = true;
  for (const auto& b : t.blocks) {
    const Eigen::Index n = b.cols(), m = b.rows();
    c.isometry_residual = std::max(c.isometry_residual, spectral_norm(b.adjoint() * b - Matrix::Identity(n, n)));
    c.coisometry_residual = std::max(c.coisometry_residual, spectral_norm(b * b.adjoint() - Matrix::Identity(m, m)));
    if (n != m) {
      square = false;
      continue;
    }
    c.normal_residual = std::max(c.normal_residual, spectral_norm(b * b.adjoint() - b.adjoint() * b));
    c.hermitian_residual = std::max(c.hermitian_residual, spectral_norm(b - b.adjoint()));
    c.idempotent_residual = std::max(c.idempotent_residual, spectral_norm(b * b - b));
    if (n > 0) {
      Matrix h = (b + b.adjoint()) * 0.5;
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      c.min_eigenvalue = std::min(c.min_eigenvalue, es.eigenvalues().minCoeff());
    }
  }
  square = square && t.square();
  c.normal = square && c.normal_residual <= tol;
  c.selfadjoint = square && c.hermitian_residual <= tol;
  c.positive = c.selfadjoint && c.min_eigenvalue >= -tol;
  c.projection = c.selfadjoint && c.idempotent_residual <= tol;
  c.isometric = c.isometry_residual <= tol;
  c.unitary = c.isometric && c.coisometry_residual <= tol;
  return c;
}

bool SpectrumSet::contains(Complex z, double tol) const {
  return std::any_of(points.begin(), points.end(), [&](Complex p) { return std::abs(p - z) <= tol; });
}

SpectrumSet make_spectrum_set(std::vector<SpectrumSet::Entry> entries, double cluster_tol) {
  SpectrumSet s;
  s.multiset = std::move(entries);
  std::vector<Complex> vals;
  for (const auto& e : s.multiset) vals.push_back(e.value);
  Clusters c = cluster_points(vals, cluster_tol);
  s.points = c.reps;
  s.nodes_of_point.assign(c.reps.size(), {});
  for (std::size_t i = 0; i < s.multiset.size(); ++i) {
    auto& v = s.nodes_of_point[c.assignment[i]];
    if (std::find(v.begin(), v.end(), s.multiset[i].node) == v.end()) v.push_back(s.multiset[i].node);
  }
  for (auto& v : s.nodes_of_point) std::sort(v.begin(), v.end());
  return s;
}

SpectrumSet spectrum(const CoherentOperator& t, double cluster_tol) {
  if (!t.square()) throw IncompatibleError("spectrum needs an operator on one system");
  std::vector<std::vector<Complex>> per(t.blocks.size());
  parallel_for(t.blocks.size(), [&](std::size_t l) { per[l] = schur_eigen(t.blocks[l]).values; });
  std::vector<SpectrumSet::Entry> entries;
  for (std::size_t l = 0; l < per.size(); ++l)
    for (Complex z : per[l]) entries.push_back({z, l});
  return make_spectrum_set(std::move(entries), cluster_tol);
}

double resolvent_gap(const CoherentOperator& t, Complex z) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& b : t.blocks)
    if (b.rows() > 0) gap = std::min(gap, min_singular_value(z * Matrix::Identity(b.rows(), b.cols()) - b));
  return gap;
}

LocFunction LocFunction::from(const L2System& l2, const std::function<Complex(std::size_t, const CarrierPoint&)>& f) {
  LocFunction phi;
  for (std::size_t l = 0; l < l2.carriers.size(); ++l) {
    std::vector<Complex> v;
    for (const auto& p : l2.carriers[l].basis) v.push_back(f(l, p));
    for (const auto& p : l2.carriers[l].null) v.push_back(f(l, p));
    phi.values.push_back(std::move(v));
  }
  return phi;
}

LocFunction LocFunction::from_location(const L2System& l2, const std::function<Complex(Complex)>& f) {
  return from(l2, [&](std::size_t, const CarrierPoint& p) { return f(p.location); });
}

namespace {

void check_sizes(const LocFunction& phi, const L2System& l2) {
  if (phi.values.size() != l2.carriers.size()) throw DomainError("function must have values on every node");
  for (std::size_t l = 0; l < l2.carriers.size(); ++l)
    if (phi.values[l].size() != l2.carriers[l].basis.size() + l2.carriers[l].null.size())
      throw DomainError("function is undefined at some carrier point of node " + l2.measure->index->name(l));
}

}  // namespace

void check_restriction(const LocFunction& phi, const L2System& l2) {
  check_sizes(phi, l2);
  const auto& sys = *l2.measure;
  const DirectedSet& ix = *sys.index;
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t n : ix.up_set(l)) {
      if (n == l) continue;
      auto w = inclusion_witness(sys, l, n);
      std::map<std::pair<std::size_t, int>, Complex> at;
      const auto& cn = l2.carriers[n];
      std::size_t k = 0;
      for (const auto* part : {&cn.basis, &cn.null})
        for (const auto& p : *part) at[{p.cell, p.sample}] = phi.values[n][k++];
      k = 0;
      const auto& cl = l2.carriers[l];
      for (const auto* part : {&cl.basis, &cl.null})
        for (const auto& p : *part) {
          const Complex v = phi.values[l][k++];
          auto it = at.find({w.at(p.cell), p.sample});
          if (it == at.end() || std::abs(it->second - v) > 1e-12 * (1.0 + std::abs(v)))
            throw DomainError("function values disagree at " + p.key + " between " + ix.name(l) + " and " + ix.name(n));
        }
    }
}

double sup_seminorm(const LocFunction& phi, const L2System& l2, std::size_t node) {
  double m = 0.0;
  for (std::size_t k = 0; k < l2.carriers.at(node).basis.size(); ++k) m = std::max(m, std::abs(phi.values[node][k]));
  return m;
}

CoherentOperator multiplication_operator(const LocFunction& phi, const L2System& l2) {
  check_restriction(phi, l2);
  CoherentOperator t{l2.hilbert, l2.hilbert, {}};
  for (std::size_t l = 0; l < l2.carriers.size(); ++l) {
    const auto d = static_cast<Eigen::Index>(l2.carriers[l].basis.size());
    Matrix b = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) b(k, k) = phi.values[l][static_cast<std::size_t>(k)];
    t.blocks.push_back(std::move(b));
  }
  return t;
}

SpectrumSet essential_range(const LocFunction& phi, const L2System& l2, double cluster_tol) {
  check_sizes(phi, l2);
  std::vector<SpectrumSet::Entry> entries;
  for (std::size_t l = 0; l < l2.carriers.size(); ++l)
    for (std::size_t k = 0; k < l2.carriers[l].basis.size(); ++k) entries.push_back({phi.values[l][k], l});
  return make_spectrum_set(std::move(entries), cluster_tol);
}

FugledePutnamReport fuglede_putnam_check(const CoherentOperator& n, const CoherentOperator& m, const CoherentOperator& b,
                                         double precondition_tol, double pass_tol) {
  if (!n.square() || !m.square()) throw IncompatibleError("N and M must act on single systems");
  if (b.codomain != n.domain || b.domain != m.domain) throw IncompatibleError("B must map M's system into N's system");
  FugledePutnamReport r;
  for (std::size_t l = 0; l < b.blocks.size(); ++l) {
    const double pre = spectral_norm(n.blocks[l] * b.blocks[l] - b.blocks[l] * m.blocks[l]);
    if (pre > precondition_tol)
      throw PreconditionError("NB != BM at node " + b.index().name(l) + " (residual " + std::to_string(pre) + ")");
    const double res = spectral_norm(n.blocks[l].adjoint() * b.blocks[l] - b.blocks[l] * m.blocks[l].adjoint());
    if (res > r.residual) {
      r.residual = res;
      r.worst_node = l;
    }
  }
  r.pass = r.residual <= pass_tol;
  return r;
}

}  // namespace loch
