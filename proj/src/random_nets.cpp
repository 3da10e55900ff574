#include "loch/random_nets.hpp"

#include <algorithm>
#include <numeric>

namespace loch::rnd {

namespace {

const std::vector<Complex>& value_pool() {
  static const std::vector<Complex> pool{{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.5}, {0.0, 2.0}, {0.5, -1.5}, {2.5, 0.25}};
  return pool;
}

Complex pick(Rng& rng, const std::vector<Complex>& pool) {
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

}  // namespace

RandomIndex random_index(Rng& rng, int size) {
  if (size < 1 || size > 26) throw InvalidParams("index size must be in 1..26");
  const auto n = static_cast<std::size_t>(size);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  std::bernoulli_distribution edge(0.4);
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = true;
    le[i][n - 1] = true;
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) le[i][j] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  auto ds = check_directed(names, [&](std::size_t a, std::size_t b) { return le[a][b]; });
  RandomIndex out;
  out.index = std::make_shared<const DirectedSet>(std::move(ds.value()));
  std::size_t cur = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  out.chain.chain.push_back(names[cur]);
  while (cur != n - 1) {
    std::vector<std::size_t> above;
    for (std::size_t j = 0; j < n; ++j)
      if (j != cur && le[cur][j]) above.push_back(j);
    cur = above[std::uniform_int_distribution<std::size_t>(0, above.size() - 1)(rng)];
    out.chain.chain.push_back(names[cur]);
  }
  return out;
}

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_unitary(Rng& rng, Eigen::Index d) {
  if (d == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d, d));
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

InoueNet inoue_on(Rng& rng, const RandomIndex& ix, Eigen::Index max_node_dim, bool twisted) {
  InoueNet net;
  net.ix = ix;
  const std::size_t n = ix.index->size();
  std::uniform_int_distribution<Eigen::Index> dim(0, 4);
  net.component_dims.resize(n);
  for (auto& d : net.component_dims) d = dim(rng);
  // Every node sits below the top, so the total bounds every node dimension.
  auto total = [&] { return std::accumulate(net.component_dims.begin(), net.component_dims.end(), Eigen::Index{0}); };
  std::uniform_int_distribution<std::size_t> which(0, n - 1);
  while (total() > max_node_dim) {
    auto& d = net.component_dims[which(rng)];
    if (d > 0) --d;
  }
  if (total() == 0) net.component_dims[n - 1] = 1;
  net.blocks = inoue_blocks(*ix.index, net.component_dims);
  InductiveHilbertSystem base = build_inoue_space(ix.index, net.component_dims);
  for (std::size_t l = 0; l < n; ++l)
    net.twists.push_back(twisted ? random_unitary(rng, base.dim(l)) : Matrix::Identity(base.dim(l), base.dim(l)));
  net.sys = twisted ? std::make_shared<const InductiveHilbertSystem>(twist(base, net.twists))
                    : std::make_shared<const InductiveHilbertSystem>(std::move(base));
  return net;
}

InoueNet random_inoue(Rng& rng, int index_size, Eigen::Index max_node_dim, bool twisted) {
  return inoue_on(rng, random_index(rng, index_size), max_node_dim, twisted);
}

CoherentOperator assemble(const InoueNet& dom, const InoueNet& cod, const std::vector<Matrix>& components) {
  CoherentOperator t{dom.sys, cod.sys, {}};
  for (std::size_t l = 0; l < dom.blocks.size(); ++l) {
    Matrix m = Matrix::Zero(cod.sys->dim(l), dom.sys->dim(l));
    const auto& bd = dom.blocks[l];
    const auto& bc = cod.blocks[l];
    for (std::size_t k = 0; k < bd.size(); ++k) {
      const auto& a = components[bd[k].component];
      if (a.rows() != bc[k].dim || a.cols() != bd[k].dim) throw InvalidParams("component matrix has the wrong shape");
      m.block(bc[k].offset, bd[k].offset, bc[k].dim, bd[k].dim) = a;
    }
    t.blocks.push_back(cod.twists[l] * m * dom.twists[l].adjoint());
  }
  return t;
}

CoherentOperator assemble(const InoueNet& net, const std::vector<Matrix>& components) {
  return assemble(net, net, components);
}

CoherentOperator random_coherent(Rng& rng, const InoueNet& net) {
  std::vector<Matrix> comps;
  for (auto d : net.component_dims) comps.push_back(random_matrix(rng, d, d));
  return assemble(net, comps);
}

CoherentOperator random_normal(Rng& rng, const InoueNet& net, NormalParts* parts) {
  NormalParts local;
  NormalParts& p = parts ? *parts : local;
  p = {};
  std::vector<Matrix> comps;
  for (auto d : net.component_dims) {
    Matrix u = random_unitary(rng, d);
    std::vector<Complex> vals;
    Matrix diag = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      vals.push_back(pick(rng, value_pool()));
      diag(i, i) = vals.back();
    }
    comps.push_back(u * diag * u.adjoint());
    p.u.push_back(std::move(u));
    p.d.push_back(std::move(vals));
  }
  return assemble(net, comps);
}

CoherentOperator random_commutant(Rng& rng, const InoueNet& net, const NormalParts& parts) {
  std::vector<Matrix> comps;
  for (std::size_t a = 0; a < parts.u.size(); ++a) {
    const auto d = static_cast<Eigen::Index>(parts.d[a].size());
    Matrix k = random_matrix(rng, d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (parts.d[a][static_cast<std::size_t>(i)] != parts.d[a][static_cast<std::size_t>(j)]) k(i, j) = 0.0;
    comps.push_back(parts.u[a] * k * parts.u[a].adjoint());
  }
  return assemble(net, comps);
}

std::optional<std::vector<Matrix>> mutate(Rng& rng, const CoherentOperator& t) {
  const DirectedSet& ix = t.index();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t l = 0; l < ix.size(); ++l)
    for (std::size_t v = 0; v < ix.size(); ++v)
      if (ix.leq(l, v) && !ix.leq(v, l) && t.domain->dim(l) > 0) pairs.emplace_back(l, v);
  if (pairs.empty()) return std::nullopt;
  auto [l, v] = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
  (void)l;
  std::vector<Matrix> blocks = t.blocks;
  blocks[v] += 0.5 * random_matrix(rng, blocks[v].rows(), blocks[v].cols());
  return blocks;
}

FpTriple random_fp_triple(Rng& rng, int index_size, Eigen::Index max_node_dim) {
  RandomIndex ix = random_index(rng, index_size);
  InoueNet left = inoue_on(rng, ix, max_node_dim, true);   // B's codomain
  InoueNet right = inoue_on(rng, ix, max_node_dim, true);  // B's domain
  NormalParts pn, pm;
  FpTriple t{random_normal(rng, left, &pn), random_normal(rng, right, &pm), {}};
  std::vector<Matrix> comps;
  for (std::size_t a = 0; a < pn.u.size(); ++a) {
    const auto rows = static_cast<Eigen::Index>(pn.d[a].size());
    const auto cols = static_cast<Eigen::Index>(pm.d[a].size());
    Matrix k = random_matrix(rng, rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (pn.d[a][static_cast<std::size_t>(i)] != pm.d[a][static_cast<std::size_t>(j)]) k(i, j) = 0.0;
    comps.push_back(pn.u[a] * k * pm.u[a].adjoint());
  }
  t.b = assemble(right, left, comps);
  return t;
}

std::shared_ptr<InductiveMeasureSystem> random_atomic_measure(Rng& rng, const RandomIndex& ix, int max_atoms) {
  const DirectedSet& ds = *ix.index;
  std::uniform_int_distribution<int> count(0, max_atoms);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::vector<std::vector<Atom>> comps(ds.size());
  for (std::size_t a = 0; a < ds.size(); ++a) {
    const int k = count(rng);
    for (int i = 0; i < k; ++i) comps[a].push_back({ds.name(a) + "." + std::to_string(i), weight(rng)});
  }
  if (comps.back().empty()) comps.back().push_back({ds.name(ds.size() - 1) + ".0", weight(rng)});
  auto sys = std::make_shared<InductiveMeasureSystem>();
  sys->index = ix.index;
  for (std::size_t l = 0; l < ds.size(); ++l) {
    MeasureSpaceNode node;
    for (std::size_t a : ds.lexicographic_order())
      if (ds.leq(a, l)) node.atoms.insert(node.atoms.end(), comps[a].begin(), comps[a].end());
    sys->nodes.push_back(std::move(node));
  }
  return sys;
}

}  // namespace loch::rnd
