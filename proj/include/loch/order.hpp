#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "loch/common.hpp"

namespace loch {

// Dense square bit matrix; row i holds the set {j : rel(i, j)}.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }
  bool test(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u; }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

class DirectedSet {
 public:
  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(std::size_t i) const { return elements_.at(i); }
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  bool leq(std::size_t a, std::size_t b) const { return up_.test(a, b); }
  bool leq(const std::string& a, const std::string& b) const { return leq(index_of(a), index_of(b)); }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }

  std::vector<std::size_t> down_set(std::size_t i) const;
  std::vector<std::size_t> up_set(std::size_t i) const;
  std::size_t down_count(std::size_t i) const;

  // Distinct elements that are mutually below each other (allowed, reported).
  const std::vector<std::pair<std::size_t, std::size_t>>& equivalent_pairs() const { return equivalent_; }

  // First element in enumeration order lying above every element.
  std::optional<std::size_t> top() const { return top_; }

  // Element indices sorted by identifier.
  std::vector<std::size_t> lexicographic_order() const;

  // Builds from an order known to be a directed preorder by construction.
  // Reflexivity and directedness are not re-verified.
  static DirectedSet trusted(std::vector<std::string> elements,
                             const std::function<bool(std::size_t, std::size_t)>& leq);

 private:
  friend Checked<DirectedSet> check_directed(const std::vector<std::string>&,
                                             const std::vector<std::pair<std::string, std::string>>&);
  friend Checked<DirectedSet> check_directed(std::vector<std::string>,
                                             const std::function<bool(std::size_t, std::size_t)>&);
  void init_index();
  void finish();

  std::vector<std::string> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  BitMatrix up_;    // up_(a, b)   <=> a <= b
  BitMatrix down_;  // down_(b, a) <=> a <= b
  std::vector<std::pair<std::size_t, std::size_t>> equivalent_;
  std::optional<std::size_t> top_;
};

Checked<DirectedSet> check_directed(const std::vector<std::string>& elements,
                                    const std::vector<std::pair<std::string, std::string>>& pairs);
// Same checks for an order given as a predicate over element positions.
Checked<DirectedSet> check_directed(std::vector<std::string> elements,
                                    const std::function<bool(std::size_t, std::size_t)>& leq);

std::vector<std::string> down_set(const DirectedSet& ds, const std::string& id);

// Minimal common upper bound; ties go to the lexicographically smallest identifier.
std::size_t upper_bound(const DirectedSet& ds, std::size_t a, std::size_t b);
std::string upper_bound(const DirectedSet& ds, const std::string& a, const std::string& b);

struct ChainWitness {
  std::vector<std::string> chain;
};

struct SequentialCertificate {
  std::vector<std::size_t> chain;
  std::vector<std::size_t> covering_step;   // per element: first m with element <= chain[m]
  std::vector<std::size_t> down_set_sizes;  // per chain step
};

Checked<SequentialCertificate> is_sequentially_finite(const DirectedSet& ds, const ChainWitness& w);

// The two-level order on pairs (n,k): (n,k) <= (m,l) iff n < m, or n == m and (k == 0 or k == l).
// Levels 0..depth carry 0 <= k <= 2^n; with_cap adds (depth+1, 0) above everything.
std::vector<std::pair<int, int>> branch_index_pairs(int depth, bool with_cap);
std::string branch_index_name(int n, int k);
bool branch_index_leq(std::pair<int, int> a, std::pair<int, int> b);
Checked<DirectedSet> branch_index_order(int depth, bool with_cap);

}  // namespace loch
