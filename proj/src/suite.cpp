#include "loch/suite.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "loch/hata.hpp"
#include "loch/random_nets.hpp"
#include "loch/spectral.hpp"

namespace loch::suite {

namespace {

using rnd::Rng;

class Tally {
 public:
  void fail(const std::string& why) {
    if (ok_) first_ = why;
    ok_ = false;
    ++failures_;
  }
  void check(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return ok_; }
  std::string detail() const {
    if (ok_) return notes_;
    return std::to_string(failures_) + " failure(s), first: " + first_ + (notes_.empty() ? "" : " | " + notes_);
  }

 private:
  bool ok_ = true;
  int failures_ = 0;
  std::string first_;
  std::string notes_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ---- 1 ----
void branch_counts(Rng&, Tally& t) {
  const IfsParams p;
  const int expected[] = {2, 3, 5, 9, 17, 33};
  for (int n = 0; n <= 5; ++n) {
    auto got = enumerate_branches(p, n).size();
    t.check(got == static_cast<std::size_t>(expected[n]), "n=" + std::to_string(n) + " gave " + std::to_string(got));
  }
  for (int n = 0; n <= 12; ++n) {
    auto got = enumerate_branches(p, n).size();
    t.check(got == (std::size_t{1} << n) + 1, "n=" + std::to_string(n) + " gave " + std::to_string(got));
  }
  t.note("n<=12 checked");
}

// ---- 2 ----
bool multiset_equal(std::vector<Segment> a, std::vector<Segment> b, double tol) {
  if (a.size() != b.size()) return false;
  auto by_start = [](const Segment& x, const Segment& y) { return x.start.real() < y.start.real(); };
  std::sort(b.begin(), b.end(), by_start);
  std::vector<bool> used(b.size(), false);
  for (const auto& s : a) {
    auto lo = std::lower_bound(b.begin(), b.end(), Segment{{s.start.real() - tol, 0.0}, {}}, by_start);
    bool found = false;
    for (auto it = lo; it != b.end() && it->start.real() <= s.start.real() + tol; ++it) {
      auto k = static_cast<std::size_t>(it - b.begin());
      if (!used[k] && std::abs(it->start - s.start) <= tol && std::abs(it->end - s.end) <= tol) {
        used[k] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void recursion_fidelity(Rng& rng, Tally& t) {
  const IfsParams p;
  double worst_gap = 0.0;
  for (int n = 0; n <= 10; ++n) {
    auto a = generate_approximation(p, n);
    auto b = generate_approximation(p, n + 1);
    t.check(multiset_equal(apply_ifs(a.segments, p), b.segments, 1e-12), "F(X_n) != X_{n+1} at n=" + std::to_string(n));
    double gap = max_inclusion_gap(a.segments, b.segments, 5);
    worst_gap = std::max(worst_gap, gap);
    t.check(gap <= 1e-12, "X_n not inside X_{n+1} at n=" + std::to_string(n) + " gap " + fmt(gap));
  }
  const Complex c = p.c;
  const double a2 = std::norm(c), q = 1.0 - a2;
  auto cj = [](Complex z) { return std::conj(z); };
  // Closed forms of the length-2 and length-3 compositions.
  const std::vector<std::pair<Word, std::function<Complex(Complex)>>> forms = {
      {"11", [&](Complex z) { return a2 * z; }},
      {"22", [&](Complex z) { return q * q * z + a2 * (2.0 - a2); }},
      {"12", [&](Complex z) { return c * q * z + c * a2; }},
      {"21", [&](Complex z) { return q * std::conj(c) * z + a2; }},
      {"111", [&](Complex z) { return c * a2 * cj(z); }},
      {"122", [&](Complex z) { return c * q * q * cj(z) + c * a2 * (2.0 - a2); }},
      {"112", [&](Complex z) { return a2 * q * cj(z) + a2 * a2; }},
      {"121", [&](Complex z) { return c * c * q * cj(z) + c * a2; }},
      {"222", [&](Complex z) { return q * q * q * cj(z) + a2 * (3.0 - 3.0 * a2 + a2 * a2); }},
      {"211", [&](Complex z) { return a2 * q * cj(z) + a2; }},
      {"212", [&](Complex z) { return std::conj(c) * q * q * cj(z) + q * std::conj(c) * a2 + a2; }},
      {"221", [&](Complex z) { return q * q * c * cj(z) + a2 * (2.0 - a2); }},
  };
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Complex z{u(rng), u(rng)};
    for (const auto& [w, f] : forms) worst = std::max(worst, std::abs(compose_word(w, z, p) - f(z)));
  }
  t.check(worst <= 1e-14, "closed form mismatch " + fmt(worst));
  t.note("max closed-form error " + fmt(worst) + ", max inclusion gap " + fmt(worst_gap));
}

// ---- 3 ----
void connectivity(Rng&, Tally& t) {
  const IfsParams p;
  const Complex c = p.c;
  const Complex oracle = apply_map(1, c, p);
  t.check(std::abs(oracle - apply_map(2, 0.0, p)) <= 1e-15, "f1(c) != f2(0)");
  for (int n = 0; n <= 10; ++n) {
    auto cert = check_connectivity(generate_approximation(p, n));
    if (!cert) {
      t.fail("n=" + std::to_string(n) + ": " + cert.violation().axiom + " " + cert.violation().message);
      continue;
    }
    t.check(cert.value().components == 1, "components != 1 at n=" + std::to_string(n));
    t.check(std::abs(cert.value().junction - oracle) <= 1e-12, "junction differs from |c|^2");
  }
  t.note("junction " + format_complex(oracle));
}

// ---- 4 ----
std::vector<std::string> labels_of(const MeasureSpaceNode& n) { return n.segment_labels; }

SetExpr random_combo(Rng& rng, const InductiveMeasureSystem& sys, std::size_t node) {
  auto labels = labels_of(sys.node(node));
  std::vector<std::string> pick;
  for (const auto& l : labels)
    if (uniform(rng, 0, 1)) pick.push_back(l);
  SetExpr e = SetExpr::branches(pick);
  const std::size_t other = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(sys.index->size()) - 1));
  switch (uniform(rng, 0, 2)) {
    case 0:
      e = SetExpr::unite({e, SetExpr::intersect(SetExpr::carrier(sys.index->name(other)), SetExpr::carrier(sys.index->name(node)))});
      break;
    case 1:
      e = SetExpr::subtract(e, SetExpr::carrier(sys.index->name(other)));
      break;
    default:
      e = SetExpr::intersect(e, SetExpr::carrier(sys.index->name(other)));
  }
  return e;
}

void measure_limits(Rng& rng, Tally& t) {
  const IfsParams p;
  int checked = 0, pairs = 0;
  std::vector<HataSystem> systems;
  for (auto v : {HataVariant::linear, HataVariant::branch_indexed, HataVariant::branch_union})
    systems.push_back(build_inductive_system(v, p, 4));
  for (const auto& h : systems) {
    const auto& sys = h.system;
    const std::size_t n = sys.index->size();
    std::vector<std::size_t> nodes;
    if (n <= 64) {
      for (std::size_t l = 0; l < n; ++l) nodes.push_back(l);
    } else {
      for (const auto& id : h.chain.chain) nodes.push_back(sys.index->index_of(id));
      for (int i = 0; i < 12; ++i) nodes.push_back(static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(n) - 1)));
    }
    for (std::size_t l : nodes) {
      const SetExpr here = SetExpr::carrier(sys.index->name(l));
      std::vector<SetExpr> sets{here, SetExpr::empty()};
      for (const auto& lab : labels_of(sys.node(l))) sets.push_back(SetExpr::branches({lab}));
      for (int i = 0; i < 3; ++i) sets.push_back(SetExpr::intersect(random_combo(rng, sys, l), here));
      for (const auto& a : sets) {
        const double mu = node_measure(sys.node(l), evaluate(sys, l, a));
        const ExtendedValue ext = extended_measure(sys, {a, std::nullopt});
        const double lim = limit_measure(sys, {a, std::nullopt});
        ++checked;
        if (ext.infinite || std::abs(ext.value - mu) > 1e-12 || std::abs(lim - mu) > 1e-12)
          t.fail(std::string(variant_name(h.variant)) + " node " + sys.index->name(l) + " set " + a.describe() + ": " +
                 fmt(mu) + " vs " + fmt(ext.value));
      }
    }
  }
  // Nested pairs: A = B cap C.
  for (int i = 0; i < 200; ++i) {
    const auto& h = systems[static_cast<std::size_t>(i % 3)];
    const auto& sys = h.system;
    const std::size_t top = *sys.index->top();
    const SetExpr b = random_combo(rng, sys, top);
    const SetExpr a = SetExpr::intersect(b, random_combo(rng, sys, top));
    const double mb = extended_measure(sys, {b, std::nullopt}).value;
    const double ma = extended_measure(sys, {a, std::nullopt}).value;
    ++pairs;
    t.check(ma <= mb + 1e-12, "monotonicity fails: " + fmt(ma) + " > " + fmt(mb));
  }
  for (const auto& h : systems) {
    const ExtendedValue ray = extended_measure(h.system, hata_branch_ray(h, '1', true));
    const ExtendedValue full = extended_measure(h.system, hata_full_set(h));
    t.check(!ray.infinite && ray.value <= full.value, "ray not below the full set");
    t.check(full.infinite, std::string("total length not divergent for ") + variant_name(h.variant));
    t.check(full.growth_ratio && std::abs(*full.growth_ratio - 1.25) <= 1e-12, "growth ratio differs from 1.25");
  }
  const double oracle = std::abs(p.c) + 1.0 - std::norm(p.c);
  t.check(std::abs(growth_ratio(p) - oracle) <= 1e-15, "growth_ratio formula");
  t.note(std::to_string(checked) + " Omega-sets, " + std::to_string(pairs) + " nested pairs, ratio " + fmt(growth_ratio(p)));
}

// ---- 5 ----
void coherence_equivalence(Rng& rng, Tally& t) {
  int systems = 0, disagreements = 0, wrong = 0;
  while (systems < 100) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 6), 8, systems % 2 == 1);
    CoherentOperator op = rnd::random_coherent(rng, net);
    auto mutated = rnd::mutate(rng, op);
    if (!mutated) continue;
    ++systems;
    auto good = coherence_verdicts(op.blocks, *net.sys, *net.sys, 1e-10);
    auto bad = coherence_verdicts(*mutated, *net.sys, *net.sys, 1e-10);
    if (good.intertwining_ok != good.block_ok) ++disagreements;
    if (bad.intertwining_ok != bad.block_ok) ++disagreements;
    if (!good.intertwining_ok || !good.block_ok || bad.intertwining_ok || bad.block_ok) ++wrong;
  }
  t.check(disagreements == 0, std::to_string(disagreements) + " disagreements");
  t.check(wrong == 0, std::to_string(wrong) + " systems with a wrong verdict");
  t.note("100 coherent + 100 mutated nets, disagreements " + std::to_string(disagreements));
}

// ---- 6 ----
void seminorm_laws(Rng& rng, Tally& t) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 6), 8, true);
    CoherentOperator s = rnd::random_coherent(rng, net), x = rnd::random_coherent(rng, net);
    CoherentOperator xs = adjoint(x), xx = compose(xs, x), sx = compose(s, x);
    assert_coherent(xx, 1e-9);
    assert_coherent(sx, 1e-9);
    for (std::size_t l = 0; l < net.sys->size(); ++l) {
      const double q = seminorm(x, l), qs = seminorm(s, l);
      const double scale = std::max(1.0, q * q);
      const double e1 = std::abs(seminorm(xx, l) - q * q) / scale;
      const double e2 = std::abs(seminorm(xs, l) - q) / std::max(1.0, q);
      worst = std::max({worst, e1, e2});
      t.check(e1 <= 1e-9, "q(T*T) != q(T)^2");
      t.check(e2 <= 1e-9, "q(T*) != q(T)");
      t.check(seminorm(sx, l) <= qs * q * (1.0 + 1e-9) + 1e-12, "q(ST) > q(S) q(T)");
    }
  }
  t.note("max relative error " + fmt(worst));
}

// ---- 7 ----
std::vector<Complex> oracle_eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

void spectrum_union(Rng& rng, Tally& t) {
  int probes = 0;
  for (int i = 0; i < 100; ++i) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 6), 8, true);
    CoherentOperator n = rnd::random_normal(rng, net);
    SpectrumSet sp = spectrum(n, 1e-8);
    std::vector<Complex> all;
    for (std::size_t l = 0; l < n.blocks.size(); ++l)
      for (Complex z : oracle_eigenvalues(n.blocks[l])) {
        all.push_back(z);
        bool hit = false;
        for (std::size_t k = 0; k < sp.points.size(); ++k)
          if (std::abs(sp.points[k] - z) <= 1e-8 &&
              std::count(sp.nodes_of_point[k].begin(), sp.nodes_of_point[k].end(), l))
            hit = true;
        t.check(hit, "block eigenvalue missing from spectrum");
      }
    for (Complex z : sp.points)
      t.check(std::any_of(all.begin(), all.end(), [&](Complex w) { return std::abs(w - z) <= 1e-8; }),
              "spectrum point not a block eigenvalue");
    t.check(sp.multiset.size() == all.size(), "multiset size");
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20;) {
      Complex z{u(rng), u(rng)};
      if (sp.contains(z, 1e-3)) continue;
      ++k;
      ++probes;
      t.check(resolvent_gap(n, z) > 1e-6, "probe not in resolvent set");
      for (const auto& b : n.blocks) {
        if (b.rows() == 0) continue;
        Matrix a = z * Matrix::Identity(b.rows(), b.cols()) - b;
        Matrix inv = a.partialPivLu().inverse();
        t.check((a * inv - Matrix::Identity(b.rows(), b.cols())).norm() <= 1e-9, "block not invertible at probe");
      }
    }
  }
  t.note(std::to_string(probes) + " off-spectrum probes");
}

// ---- 8 ----
void fuglede_putnam(Rng& rng, Tally& t) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto tr = rnd::random_fp_triple(rng, uniform(rng, 1, 5), 8);
    auto rep = fuglede_putnam_check(tr.n, tr.m, tr.b);
    double oracle = 0.0;
    for (std::size_t l = 0; l < tr.b.blocks.size(); ++l) {
      const Matrix d = tr.n.blocks[l].adjoint() * tr.b.blocks[l] - tr.b.blocks[l] * tr.m.blocks[l].adjoint();
      oracle = std::max(oracle, d.rows() && d.cols() ? spectral_norm(d) : 0.0);
    }
    worst = std::max(worst, rep.residual);
    t.check(rep.pass && rep.residual <= 1e-9, "residual " + fmt(rep.residual));
    t.check(std::abs(oracle - rep.residual) <= 1e-12, "reported residual differs from direct computation");
  }
  t.note("max residual " + fmt(worst));
}

// ---- 9 ----
double block_diff(const CoherentOperator& a, const CoherentOperator& b) {
  double d = 0.0;
  for (std::size_t l = 0; l < a.blocks.size(); ++l)
    if (a.blocks[l].size()) d = std::max(d, (a.blocks[l] - b.blocks[l]).norm());
  return d;
}

// Blockwise products and sums without re-certifying coherence each time.
CoherentOperator raw_product(const CoherentOperator& a, const CoherentOperator& b) {
  CoherentOperator r{b.domain, a.codomain, {}};
  for (std::size_t l = 0; l < a.blocks.size(); ++l) r.blocks.push_back(a.blocks[l] * b.blocks[l]);
  return r;
}
CoherentOperator raw_sum(const CoherentOperator& a, const CoherentOperator& b) {
  CoherentOperator r{a.domain, a.codomain, {}};
  for (std::size_t l = 0; l < a.blocks.size(); ++l) r.blocks.push_back(a.blocks[l] + b.blocks[l]);
  return r;
}

void spectral_measure_laws(Rng& rng, Tally& t) {
  int nontrivial = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 5), 8, true);
    rnd::NormalParts parts;
    CoherentOperator n = rnd::random_normal(rng, net, &parts);
    LocalSpectralMeasure e = spectral_measure(n);
    const std::size_t k = e.atom_count();
    if (k > 6) {
      t.fail("more atoms than the eigenvalue pool");
      continue;
    }
    const std::size_t subsets = std::size_t{1} << k;
    std::vector<CoherentOperator> proj;
    for (std::size_t m = 0; m < subsets; ++m) {
      std::vector<std::size_t> s;
      for (std::size_t a = 0; a < k; ++a)
        if (m >> a & 1) s.push_back(a);
      proj.push_back(e.E(s));
    }
    for (std::size_t a = 0; a < k; ++a) {
      bool nonzero = false;
      for (const auto& b : proj[std::size_t{1} << a].blocks) nonzero = nonzero || b.norm() > 0.5;
      t.check(nonzero, "E({atom}) vanishes");
    }
    const CoherentOperator id = identity_operator(n.domain);
    worst = std::max(worst, block_diff(proj[subsets - 1], id));
    t.check(block_diff(proj[subsets - 1], id) <= 1e-10, "E is not unital");
    t.check(block_diff(proj[0], scale(0.0, id)) == 0.0, "E(empty) != 0");
    for (std::size_t x = 0; x < subsets; ++x) {
      assert_coherent(proj[x], 1e-10);
      t.check(block_diff(raw_product(proj[x], proj[x]), proj[x]) <= 1e-10, "E(A) not idempotent");
      t.check(block_diff(adjoint(proj[x]), proj[x]) <= 1e-10, "E(A) not self-adjoint");
      for (std::size_t y = 0; y < subsets; ++y) {
        const double mult = block_diff(proj[x & y], raw_product(proj[x], proj[y]));
        worst = std::max(worst, mult);
        t.check(mult <= 1e-10, "E(A cap B) != E(A) E(B)");
        if ((x & y) == 0) t.check(block_diff(proj[x | y], raw_sum(proj[x], proj[y])) <= 1e-10, "E not additive");
      }
    }
    const double rec = block_diff(integrate(e, [](Complex z) { return z; }), n);
    const double one = block_diff(integrate(e, [](Complex) { return Complex{1.0, 0.0}; }), id);
    worst = std::max({worst, rec, one});
    t.check(rec <= 1e-10, "integrate(id) != N");
    t.check(one <= 1e-10, "integrate(1) != I");

    // Commutant criterion, both directions.
    CoherentOperator inside = rnd::random_commutant(rng, net, parts);
    auto r1 = commutant_check(e, n, inside);
    t.check(r1.commutes_with_operator && r1.commutes_with_projections, "commutant element rejected");
    CoherentOperator outside = rnd::random_coherent(rng, net);
    auto r2 = commutant_check(e, n, outside);
    t.check(r2.commutes_with_operator == r2.commutes_with_projections, "commutant criterion disagrees");
    if (!r2.commutes_with_operator) ++nontrivial;
  }
  t.check(nontrivial >= 10, "too few non-commuting examples");
  t.note("max law residual " + fmt(worst) + ", non-commuting cases " + std::to_string(nontrivial));
}

// ---- 10 ----
void borel_calculus_laws(Rng& rng, Tally& t) {
  const auto psi1 = [](Complex z) { return z * z - 0.5 * std::conj(z) + Complex(0.25, 1.0); };
  const auto psi2 = [](Complex z) { return std::exp(Complex(0.3, -0.2) * z); };
  double worst = 0.0;
  auto check = [&](double d, const char* what) {
    worst = std::max(worst, d);
    t.check(d <= 1e-10, what);
  };
  for (int i = 0; i < 50; ++i) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 5), 8, true);
    CoherentOperator n = rnd::random_normal(rng, net);
    const CoherentOperator a = borel_calculus(psi1, n), b = borel_calculus(psi2, n);
    check(block_diff(borel_calculus([&](Complex z) { return psi1(z) + psi2(z); }, n), add(a, b)), "sum");
    check(block_diff(borel_calculus([&](Complex z) { return psi1(z) * psi2(z); }, n), compose(a, b)), "product");
    check(block_diff(borel_calculus([&](Complex z) { return std::conj(psi1(z)); }, n), adjoint(a)), "involution");
    check(block_diff(borel_calculus([](Complex) { return Complex{1.0, 0.0}; }, n), identity_operator(n.domain)), "unit");
    check(block_diff(borel_calculus([](Complex z) { return z; }, n), n), "identity function");

    // psi(M_phi) = M_{psi o phi} on an atomic carrier.
    auto ix = rnd::random_index(rng, uniform(rng, 1, 5));
    auto ms = rnd::random_atomic_measure(rng, ix, 3);
    L2System l2 = discretize_l2(ms, 1);
    std::map<std::string, Complex> val;
    const std::vector<Complex> pool{{0, 0}, {1, 0}, {-1, 0.5}, {0, 2}, {0.5, -1.5}};
    for (const auto& node : ms->nodes)
      for (const auto& at : node.atoms)
        if (!val.count(at.id)) val[at.id] = pool[static_cast<std::size_t>(uniform(rng, 0, 4))];
    LocFunction phi = LocFunction::from(l2, [&](std::size_t, const CarrierPoint& p) { return val.at(p.key); });
    LocFunction comp = LocFunction::from(l2, [&](std::size_t, const CarrierPoint& p) { return psi1(val.at(p.key)); });
    check(block_diff(borel_calculus(psi1, multiplication_operator(phi, l2)), multiplication_operator(comp, l2)),
          "psi(M_phi) != M_{psi o phi}");
  }
  t.note("max residual " + fmt(worst));
}

// ---- 11 ----
bool same_points(const SpectrumSet& a, const SpectrumSet& b, double tol) {
  for (Complex z : a.points)
    if (!b.contains(z, tol)) return false;
  return true;
}

void functional_model_roundtrip(Rng& rng, Tally& t) {
  double res = 0.0, uni = 0.0;
  int max_mult = 0;
  const Tolerances tol;
  for (int i = 0; i < 50; ++i) {
    auto net = rnd::random_inoue(rng, uniform(rng, 1, 5), 10, true);
    CoherentOperator n = rnd::random_normal(rng, net);
    FunctionalModel fm = functional_model(n, net.ix.chain, tol);
    const auto& mm = fm.multiplicity;
    res = std::max(res, fm.max_residual());
    uni = std::max(uni, fm.max_unitarity());
    max_mult = std::max(max_mult, mm.max_multiplicity);
    t.check(fm.max_residual() <= 1e-9, "conjugation residual " + fmt(fm.max_residual()));
    t.check(fm.max_unitarity() <= 1e-12, "unitarity residual " + fmt(fm.max_unitarity()));
    for (std::size_t l = 0; l < n.blocks.size(); ++l) {
      long total = 0;
      double sup = 0.0;
      for (int k = 1; k <= mm.max_multiplicity; ++k) {
        auto pts = mm.points_at(l, k);
        total += static_cast<long>(k) * static_cast<long>(pts.size());
        for (auto p : pts) sup = std::max(sup, std::abs(mm.points[p].value));
      }
      t.check(total == static_cast<long>(net.sys->dim(l)), "multiplicity bookkeeping at " + n.index().name(l));
      t.check(sup <= seminorm(n, l) + 1e-9, "sup bound fails at " + n.index().name(l));
    }
    SpectrumSet a = spectrum(n), b = spectrum(multiplication_operator(fm.phi, fm.l2));
    t.check(same_points(a, b, 1e-8) && same_points(b, a, 1e-8), "spectrum of M_phi differs from spectrum of N");
  }
  t.note("max residual " + fmt(res) + ", max unitarity " + fmt(uni) + ", max multiplicity " + std::to_string(max_mult));
}

// ---- 12 ----
void representing_certificates(Rng& rng, Tally& t) {
  for (int i = 0; i < 50; ++i) {
    auto ix = rnd::random_index(rng, uniform(rng, 1, 6));
    std::vector<Eigen::Index> dims;
    for (std::size_t a = 0; a < ix.index->size(); ++a) dims.push_back(uniform(rng, 0, 3));
    auto sys = build_inoue_space(ix.index, dims);
    const DirectedSet& ds = *ix.index;
    for (std::size_t e = 0; e < ds.size(); ++e)
      for (std::size_t l : ds.down_set(e))
        for (std::size_t v : ds.down_set(e)) {
          const Matrix p = projection_onto(sys, l, e), q = projection_onto(sys, v, e);
          t.check(p * q == q * p, "Inoue projections do not commute exactly");
        }
    auto rep = check_representing(sys, 0.0);
    t.check(rep.ok() && rep.value().max_norm == 0.0, "Inoue system not exactly representing");
  }
  const IfsParams p;
  for (auto [v, depth] : {std::pair{HataVariant::linear, 4}, {HataVariant::branch_indexed, 3}, {HataVariant::branch_union, 3}}) {
    auto h = build_inductive_system(v, p, depth);
    auto ms = std::make_shared<const InductiveMeasureSystem>(h.system);
    L2System l2 = discretize_l2(ms, 2);
    auto rep = check_representing(*l2.hilbert, 1e-12);
    t.check(rep.ok(), std::string("discretized ") + variant_name(v) + " system is not representing");
  }
  auto idx = check_directed({"a", "b", "t"}, {{"a", "a"}, {"b", "b"}, {"t", "t"}, {"a", "t"}, {"b", "t"}});
  auto ds = std::make_shared<const DirectedSet>(idx.value());
  InductiveHilbertSystem bad(ds, {1, 1, 2});
  Matrix ja(2, 1), jb(2, 1);
  ja << 1.0, 0.0;
  jb << std::sqrt(0.5), std::sqrt(0.5);
  bad.set_embedding(0, 2, ja);
  bad.set_embedding(1, 2, jb);
  auto rep = check_representing(bad, 1e-12);
  const std::vector<std::string> expect{"a", "b", "t"};
  t.check(!rep.ok() && rep.violation().axiom == "representing" && rep.violation().witness == expect,
          "non-nested counterexample not rejected with witness (a, b, t)");
  t.note("counterexample commutator " + fmt(rep.ok() ? 0.0 : rep.violation().residual));
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  void (*fn)(Rng&, Tally&);
};

const Criterion kCriteria[] = {
    {1, "hata-branch-counts", 1, branch_counts},
    {2, "hata-recursion-fidelity", 10, recursion_fidelity},
    {3, "hata-connectivity", 5, connectivity},
    {4, "measure-limits", 10, measure_limits},
    {5, "coherence-equivalence", 20, coherence_equivalence},
    {6, "seminorm-laws", 10, seminorm_laws},
    {7, "spectrum-union", 20, spectrum_union},
    {8, "fuglede-putnam", 10, fuglede_putnam},
    {9, "spectral-measure-laws", 30, spectral_measure_laws},
    {10, "borel-calculus", 10, borel_calculus_laws},
    {11, "functional-model", 60, functional_model_roundtrip},
    {12, "representing-certificates", 5, representing_certificates},
};

}  // namespace

std::vector<CriterionResult> run(std::uint64_t seed, const std::vector<int>& only,
                                 const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(c.id));
    Tally tally;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(rng, tally);
    } catch (const std::exception& e) {
      tally.fail(std::string("exception: ") + e.what());
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.limit_seconds = c.limit;
    r.pass = tally.ok() && r.seconds < c.limit;
    r.detail = tally.detail();
    if (tally.ok() && !r.pass) r.detail = "time limit exceeded; " + r.detail;
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s  %2d %-26s %7.3fs / %gs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.limit_seconds);
  return buf + r.detail;
}

}  // namespace loch::suite
