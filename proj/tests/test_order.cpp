#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "loch/order.hpp"
#include "loch/random_nets.hpp"

using namespace loch;

namespace {

DirectedSet chain3() {
  return check_directed({"1", "2", "3"}, {{"1", "1"}, {"2", "2"}, {"3", "3"}, {"1", "2"}, {"2", "3"}, {"1", "3"}}).value();
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(CheckDirected, SingletonIsValid) {
  auto ds = check_directed({"a"}, {{"a", "a"}});
  ASSERT_TRUE(ds.ok());
  EXPECT_EQ(ds.value().size(), 1u);
  EXPECT_EQ(ds.value().top(), std::optional<std::size_t>(0));
}

TEST(CheckDirected, AntichainHasNoUpperBound) {
  auto ds = check_directed({"a", "b"}, {{"a", "a"}, {"b", "b"}});
  ASSERT_FALSE(ds.ok());
  EXPECT_EQ(ds.violation().axiom, "upper-bound");
  EXPECT_EQ(ds.violation().witness, (std::vector<std::string>{"a", "b"}));
}

TEST(CheckDirected, MissingReflexivePair) {
  auto ds = check_directed({"a", "b"}, {{"a", "a"}, {"a", "b"}});
  ASSERT_FALSE(ds.ok());
  EXPECT_EQ(ds.violation().axiom, "reflexivity");
}

TEST(CheckDirected, TransitivityWitness) {
  auto ds = check_directed({"a", "b", "c"}, {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"b", "c"}});
  ASSERT_FALSE(ds.ok());
  EXPECT_EQ(ds.violation().axiom, "transitivity");
  EXPECT_EQ(ds.violation().witness, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(CheckDirected, MalformedInputs) {
  EXPECT_THROW(check_directed(std::vector<std::string>{}, std::vector<std::pair<std::string, std::string>>{}), MalformedInput);
  EXPECT_THROW(check_directed({"a", "a"}, {{"a", "a"}}), MalformedInput);
  EXPECT_THROW(check_directed({"a"}, {{"a", "z"}}), MalformedInput);
}

TEST(CheckDirected, PreorderEquivalencesAreFlagged) {
  auto ds = check_directed({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}});
  ASSERT_TRUE(ds.ok());
  ASSERT_EQ(ds.value().equivalent_pairs().size(), 1u);
}

TEST(BranchIndex, UncappedTruncationIsNotDirected) {
  auto ds = branch_index_order(3, false);
  ASSERT_FALSE(ds.ok());
  EXPECT_EQ(ds.violation().axiom, "upper-bound");
}

TEST(BranchIndex, CappedTruncationMatchesBruteForce) {
  auto ds = branch_index_order(3, true);
  ASSERT_TRUE(ds.ok());
  const auto pairs = branch_index_pairs(3, true);
  EXPECT_EQ(pairs.size(), 1u + 2 + 3 + 5 + 9);
  // Independent reading of the order: strictly lower level, or same level with k = 0 or k equal.
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      auto [n, k] = pairs[a];
      auto [m, l] = pairs[b];
      bool expect = n < m || (n == m && (k == 0 || k == l));
      EXPECT_EQ(ds.value().leq(a, b), expect);
    }
}

TEST(DownSet, Chain) { EXPECT_EQ(as_set(down_set(chain3(), "2")), (std::set<std::string>{"1", "2"})); }

TEST(DownSet, Singleton) {
  auto ds = check_directed({"a"}, {{"a", "a"}}).value();
  EXPECT_EQ(down_set(ds, "a"), std::vector<std::string>{"a"});
}

TEST(DownSet, BranchIndexedNode) {
  auto ds = branch_index_order(3, true).value();
  std::set<std::string> expect{"(2,1)", "(2,0)"};
  for (int n = 0; n < 2; ++n)
    for (int k = 0; k <= (1 << n); ++k) expect.insert(branch_index_name(n, k));
  EXPECT_EQ(as_set(down_set(ds, "(2,1)")), expect);
}

TEST(UpperBound, Examples) {
  auto c = chain3();
  EXPECT_EQ(upper_bound(c, "1", "3"), "3");
  EXPECT_EQ(upper_bound(c, "2", "2"), "2");
  auto ds = branch_index_order(2, true).value();
  EXPECT_EQ(upper_bound(ds, "(1,1)", "(1,2)"), "(2,0)");
  EXPECT_EQ(upper_bound(ds, "(1,1)", "(1,1)"), "(1,1)");
}

TEST(UpperBound, PropertiesOnRandomOrders) {
  rnd::Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    auto ix = rnd::random_index(rng, 1 + i % 7);
    const auto& ds = *ix.index;
    for (std::size_t a = 0; a < ds.size(); ++a)
      for (std::size_t b = 0; b < ds.size(); ++b) {
        auto u = upper_bound(ds, a, b);
        EXPECT_EQ(u, upper_bound(ds, b, a));
        EXPECT_TRUE(ds.leq(a, u) && ds.leq(b, u));
        if (ds.leq(a, b)) {
          auto da = ds.down_set(a), db = ds.down_set(b);
          for (auto x : da) EXPECT_TRUE(std::count(db.begin(), db.end(), x));
        }
      }
  }
}

TEST(SequentiallyFinite, ChainWitness) {
  auto c = chain3();
  auto cert = is_sequentially_finite(c, {{"1", "2", "3"}});
  ASSERT_TRUE(cert.ok());
  EXPECT_EQ(cert.value().down_set_sizes, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(SequentiallyFinite, BranchIndexedLevelChain) {
  auto ds = branch_index_order(3, true).value();
  ChainWitness w;
  for (int m = 0; m <= 4; ++m) w.chain.push_back(branch_index_name(m, 0));
  EXPECT_TRUE(is_sequentially_finite(ds, w).ok());
  w.chain.pop_back();
  auto v = is_sequentially_finite(ds, w);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "c2");
  EXPECT_EQ(v.violation().witness, std::vector<std::string>{"(3,1)"});
}

TEST(SequentiallyFinite, NonIncreasingAndEmpty) {
  auto c = chain3();
  auto v = is_sequentially_finite(c, {{"3", "1"}});
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "c1");
  EXPECT_THROW(is_sequentially_finite(c, {}), MalformedWitness);
}

TEST(SequentiallyFinite, StableUnderRelabeling) {
  rnd::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    auto ix = rnd::random_index(rng, 1 + i % 6);
    const auto& ds = *ix.index;
    std::vector<std::string> renamed;
    for (const auto& e : ds.elements()) renamed.push_back("z" + e);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t a = 0; a < ds.size(); ++a)
      for (std::size_t b = 0; b < ds.size(); ++b)
        if (ds.leq(a, b)) pairs.emplace_back(renamed[a], renamed[b]);
    auto other = check_directed(renamed, pairs).value();
    ChainWitness w;
    for (const auto& e : ix.chain.chain) w.chain.push_back("z" + e);
    EXPECT_TRUE(is_sequentially_finite(ds, ix.chain).ok());
    EXPECT_TRUE(is_sequentially_finite(other, w).ok());
  }
}
