#include "loch/order.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_set>

namespace loch {

void DirectedSet::init_index() {
  if (elements_.empty()) throw MalformedInput("directed set needs at least one element");
  index_.clear();
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], i).second) throw MalformedInput("duplicate element '" + elements_[i] + "'");
  }
}

void DirectedSet::finish() {
  const std::size_t n = size();
  down_ = BitMatrix(n);
  equivalent_.clear();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (up_.test(a, b)) {
        down_.set(b, a);
        if (a < b && up_.test(b, a)) equivalent_.emplace_back(a, b);
      }
  top_.reset();
  for (std::size_t t = 0; t < n && !top_; ++t)
    if (down_count(t) == n) top_ = t;
}

std::size_t DirectedSet::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown element '" + id + "'");
  return it->second;
}

std::vector<std::size_t> DirectedSet::down_set(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < size(); ++a)
    if (down_.test(i, a)) out.push_back(a);
  return out;
}

std::vector<std::size_t> DirectedSet::up_set(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < size(); ++a)
    if (up_.test(i, a)) out.push_back(a);
  return out;
}

std::size_t DirectedSet::down_count(std::size_t i) const {
  std::size_t c = 0;
  const auto* r = down_.row(i);
  for (std::size_t w = 0; w < down_.words(); ++w) c += static_cast<std::size_t>(std::popcount(r[w]));
  return c;
}


std::vector<std::size_t> DirectedSet::lexicographic_order() const {
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return elements_[a] < elements_[b]; });
  return idx;
}

DirectedSet DirectedSet::trusted(std::vector<std::string> elements,
                                 const std::function<bool(std::size_t, std::size_t)>& leq) {
  DirectedSet ds;
  ds.elements_ = std::move(elements);
  ds.init_index();
  const std::size_t n = ds.size();
  ds.up_ = BitMatrix(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a == b || leq(a, b)) ds.up_.set(a, b);
  ds.finish();
  return ds;
}

namespace {

// Checks the axioms on a filled relation; returns the first violation if any.
std::optional<Violation> check_axioms(const std::vector<std::string>& el, const BitMatrix& up) {
  const std::size_t n = el.size();
  for (std::size_t a = 0; a < n; ++a)
    if (!up.test(a, a)) return Violation{"reflexivity", "element is not below itself", {el[a], el[a]}, 0.0};
  const std::size_t W = up.words();
  for (std::size_t a = 0; a < n; ++a) {
    const auto* ra = up.row(a);
    for (std::size_t b = 0; b < n; ++b) {
      if (!up.test(a, b)) continue;
      const auto* rb = up.row(b);
      for (std::size_t w = 0; w < W; ++w) {
        std::uint64_t missing = rb[w] & ~ra[w];
        if (missing) {
          std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(missing));
          return Violation{"transitivity", "a<=b and b<=c but not a<=c", {el[a], el[b], el[c]}, 0.0};
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto* ra = up.row(a);
      const auto* rb = up.row(b);
      bool found = false;
      for (std::size_t w = 0; w < W && !found; ++w) found = (ra[w] & rb[w]) != 0;
      if (!found) return Violation{"upper-bound", "pair has no common upper bound", {el[a], el[b]}, 0.0};
    }
  return std::nullopt;
}

}  // namespace

Checked<DirectedSet> check_directed(const std::vector<std::string>& elements,
                                    const std::vector<std::pair<std::string, std::string>>& pairs) {
  DirectedSet ds;
  ds.elements_ = elements;
  ds.init_index();
  ds.up_ = BitMatrix(ds.size());
  for (const auto& [a, b] : pairs) {
    auto ia = ds.index_.find(a), ib = ds.index_.find(b);
    if (ia == ds.index_.end() || ib == ds.index_.end())
      throw MalformedInput("pair (" + a + "," + b + ") references an unknown element");
    ds.up_.set(ia->second, ib->second);
  }
  if (auto v = check_axioms(ds.elements_, ds.up_)) return *v;
  ds.finish();
  return ds;
}

Checked<DirectedSet> check_directed(std::vector<std::string> elements,
                                    const std::function<bool(std::size_t, std::size_t)>& leq) {
  DirectedSet ds;
  ds.elements_ = std::move(elements);
  ds.init_index();
  const std::size_t n = ds.size();
  ds.up_ = BitMatrix(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (leq(a, b)) ds.up_.set(a, b);
  if (auto v = check_axioms(ds.elements_, ds.up_)) return *v;
  ds.finish();
  return ds;
}

std::vector<std::string> down_set(const DirectedSet& ds, const std::string& id) {
  std::vector<std::string> out;
  for (std::size_t a : ds.down_set(ds.index_of(id))) out.push_back(ds.name(a));
  return out;
}

std::size_t upper_bound(const DirectedSet& ds, std::size_t a, std::size_t b) {
  const std::size_t n = ds.size();
  std::vector<std::size_t> common;
  for (std::size_t c = 0; c < n; ++c)
    if (ds.leq(a, c) && ds.leq(b, c)) common.push_back(c);
  if (common.empty()) throw OrderError("no common upper bound for " + ds.name(a) + " and " + ds.name(b));
  std::optional<std::size_t> best;
  for (std::size_t c : common) {
    bool minimal = std::none_of(common.begin(), common.end(),
                                [&](std::size_t d) { return ds.leq(d, c) && !ds.leq(c, d); });
    if (minimal && (!best || ds.name(c) < ds.name(*best))) best = c;
  }
  return *best;
}

std::string upper_bound(const DirectedSet& ds, const std::string& a, const std::string& b) {
  return ds.name(upper_bound(ds, ds.index_of(a), ds.index_of(b)));
}

Checked<SequentialCertificate> is_sequentially_finite(const DirectedSet& ds, const ChainWitness& w) {
  if (w.chain.empty()) throw MalformedWitness("empty chain");
  SequentialCertificate cert;
  for (const auto& id : w.chain) cert.chain.push_back(ds.index_of(id));
  for (std::size_t m = 0; m + 1 < cert.chain.size(); ++m)
    if (!ds.leq(cert.chain[m], cert.chain[m + 1]))
      return Violation{"c1", "chain is not increasing", {w.chain[m], w.chain[m + 1]}, 0.0};
  cert.covering_step.assign(ds.size(), 0);
  for (std::size_t x = 0; x < ds.size(); ++x) {
    auto it = std::find_if(cert.chain.begin(), cert.chain.end(), [&](std::size_t e) { return ds.leq(x, e); });
    if (it == cert.chain.end()) return Violation{"c2", "element lies below no chain element", {ds.name(x)}, 0.0};
    cert.covering_step[x] = static_cast<std::size_t>(it - cert.chain.begin());
  }
  // Finite by construction; enumerated so the certificate records the counts.
  for (std::size_t e : cert.chain) cert.down_set_sizes.push_back(ds.down_count(e));
  return cert;
}

std::vector<std::pair<int, int>> branch_index_pairs(int depth, bool with_cap) {
  if (depth < 0 || depth > 20) throw InvalidIndex("branch index depth out of range");
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n <= depth; ++n)
    for (int k = 0; k <= (1 << n); ++k) out.emplace_back(n, k);
  if (with_cap) out.emplace_back(depth + 1, 0);
  return out;
}

std::string branch_index_name(int n, int k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

bool branch_index_leq(std::pair<int, int> a, std::pair<int, int> b) {
  return a.first < b.first || (a.first == b.first && (a.second == 0 || a.second == b.second));
}

Checked<DirectedSet> branch_index_order(int depth, bool with_cap) {
  auto pairs = branch_index_pairs(depth, with_cap);
  std::vector<std::string> names;
  for (auto [n, k] : pairs) names.push_back(branch_index_name(n, k));
  return check_directed(std::move(names),
                        [&](std::size_t a, std::size_t b) { return branch_index_leq(pairs[a], pairs[b]); });
}

}  // namespace loch
