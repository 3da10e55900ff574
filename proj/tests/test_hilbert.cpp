#include <gtest/gtest.h>

#include <cmath>

#include "loch/hilbert.hpp"
#include "loch/random_nets.hpp"

using namespace loch;

namespace {

std::shared_ptr<const DirectedSet> make_index(const std::vector<std::string>& el,
                                              const std::vector<std::pair<std::string, std::string>>& strict) {
  auto pairs = strict;
  for (const auto& e : el) pairs.emplace_back(e, e);
  return std::make_shared<DirectedSet>(check_directed(el, pairs).value());
}

// {a, b} below t, with H_a and H_b two non-orthogonal, non-nested lines in C^2.
InductiveHilbertSystem tilted_lines() {
  auto ix = make_index({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}});
  InductiveHilbertSystem s(ix, {1, 1, 2});
  Matrix ja(2, 1), jb(2, 1);
  ja << 1.0, 0.0;
  jb << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  s.set_embedding(0, 2, ja);
  s.set_embedding(1, 2, jb);
  return s;
}

}  // namespace

TEST(HilbertSystem, SingleNode) {
  InductiveHilbertSystem s(make_index({"a"}, {}), {3});
  EXPECT_TRUE(validate_hilbert_system(s).ok());
  EXPECT_TRUE(s.embedding(0, 0).isIdentity());
}

TEST(HilbertSystem, ChainInjection) {
  InductiveHilbertSystem s(make_index({"1", "2"}, {{"1", "2"}}), {1, 2});
  Matrix j(2, 1);
  j << 1.0, 0.0;
  s.set_embedding(0, 1, j);
  auto c = validate_hilbert_system(s);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.value().pairs_checked, 1u);
  Matrix p = projection_onto(s, 0, 1);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_TRUE(p.isApprox(expect));
  EXPECT_TRUE(projection_onto(s, 1, 1).isIdentity());

  s.set_embedding(0, 1, 2.0 * j);
  auto v = validate_hilbert_system(s);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "isometry");
  EXPECT_NEAR(v.violation().residual, 3.0, 1e-12);
}

TEST(HilbertSystem, ShapeAndOrderErrors) {
  InductiveHilbertSystem s(make_index({"1", "2"}, {{"1", "2"}}), {1, 2});
  EXPECT_THROW(s.set_embedding(0, 1, Matrix::Zero(3, 1)), MalformedWitness);
  EXPECT_THROW(s.set_embedding(1, 0, Matrix::Zero(1, 2)), OrderError);
  EXPECT_THROW(s.embedding(0, 1), MalformedWitness);
  EXPECT_THROW(projection_onto(s, 1, 0), OrderError);
}

TEST(HilbertSystem, TransitivityViolation) {
  auto ix = make_index({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}});
  InductiveHilbertSystem s(ix, {1, 1, 2});
  Matrix e1(2, 1), e2(2, 1);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  s.set_embedding(0, 1, Matrix::Identity(1, 1));
  s.set_embedding(1, 2, e1);
  s.set_embedding(0, 2, e2);
  auto v = validate_hilbert_system(s);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "transitivity");
  EXPECT_EQ(v.violation().witness, (std::vector<std::string>{"1", "2", "3"}));
}

TEST(Representing, ChainsAlwaysRepresent) {
  rnd::Rng rng(1);
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::string> el;
    std::vector<std::pair<std::string, std::string>> strict;
    for (int i = 0; i < n; ++i) el.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) strict.emplace_back(el[static_cast<std::size_t>(i)], el[static_cast<std::size_t>(j)]);
    auto ix = make_index(el, strict);
    std::vector<Eigen::Index> comp(static_cast<std::size_t>(n), 1);
    auto base = build_inoue_space(ix, comp);
    std::vector<Matrix> w;
    for (std::size_t l = 0; l < ix->size(); ++l) w.push_back(rnd::random_unitary(rng, base.dim(l)));
    auto s = twist(base, w);
    EXPECT_TRUE(validate_hilbert_system(s).ok());
    EXPECT_TRUE(check_representing(s).ok());
  }
}

TEST(Representing, Counterexample) {
  auto s = tilted_lines();
  ASSERT_TRUE(validate_hilbert_system(s).ok());
  auto r = check_representing(s);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violation().axiom, "representing");
  EXPECT_EQ(r.violation().witness, (std::vector<std::string>{"a", "b", "t"}));
  // P_a = diag(1,0), P_b = [[1,1],[1,1]]/2, so [P_a, P_b] = [[0,1],[-1,0]]/2 with norm 1/2.
  EXPECT_NEAR(r.violation().residual, 0.5, 1e-14);
}

TEST(Inoue, ChainDims) {
  auto s = build_inoue_space(make_index({"1", "2"}, {{"1", "2"}}), {1, 1});
  EXPECT_EQ(s.dims(), (std::vector<Eigen::Index>{1, 2}));
  Matrix j = s.embedding(0, 1);
  EXPECT_EQ(j(0, 0), Complex(1.0));
  EXPECT_EQ(j(1, 0), Complex(0.0));
}

TEST(Inoue, Singleton) {
  auto s = build_inoue_space(make_index({"a"}, {}), {4});
  EXPECT_EQ(s.dims(), std::vector<Eigen::Index>{4});
}

TEST(Inoue, BranchIndexedDimsAreDownSetSizes) {
  auto ix = std::make_shared<DirectedSet>(branch_index_order(1, true).value());
  auto s = build_inoue_space(ix, std::vector<Eigen::Index>(ix->size(), 1));
  for (std::size_t l = 0; l < ix->size(); ++l) EXPECT_EQ(static_cast<std::size_t>(s.dim(l)), ix->down_count(l));
  auto r = check_representing(s);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().max_norm, 0.0);
}

TEST(Inoue, ProjectionsAreCoordinateDiagonals) {
  auto ix = make_index({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}});
  auto s = build_inoue_space(ix, {1, 2, 1});
  ASSERT_EQ(s.dim(2), 4);
  Matrix pa = projection_onto(s, 0, 2), pb = projection_onto(s, 1, 2);
  EXPECT_TRUE(pa.isApprox(Eigen::Vector4cd(1, 0, 0, 0).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(pb.isApprox(Eigen::Vector4cd(0, 1, 1, 0).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE((pa * pb).isZero(0.0));
}

TEST(Inoue, ProjectionProductIsIntersection) {
  rnd::Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    auto net = rnd::random_inoue(rng, 2 + t % 6, 10, false);
    const auto& ix = net.sys->index();
    const std::size_t top = *ix.top();
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b < ix.size(); ++b) {
        Matrix pa = projection_onto(*net.sys, a, top), pb = projection_onto(*net.sys, b, top);
        // Oracle: diagonal with 1 on blocks of components below both a and b.
        Matrix expect = Matrix::Zero(net.sys->dim(top), net.sys->dim(top));
        for (const auto& blk : net.blocks[top])
          if (ix.leq(blk.component, a) && ix.leq(blk.component, b))
            expect.block(blk.offset, blk.offset, blk.dim, blk.dim).setIdentity();
        EXPECT_TRUE(pa * pb == expect);
        if (ix.leq(a, b)) EXPECT_TRUE(pa * pb == pa);
      }
  }
}

TEST(Representing, IndependentOfUpperBound) {
  rnd::Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    auto net = rnd::random_inoue(rng, 3 + t % 5, 8, true);
    const auto& ix = net.sys->index();
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b < ix.size(); ++b)
        for (std::size_t e = 0; e < ix.size(); ++e)
          if (ix.leq(a, e) && ix.leq(b, e)) EXPECT_LE(representing_commutator(*net.sys, a, b, e), 1e-12);
  }
  auto s = tilted_lines();
  EXPECT_NEAR(representing_commutator(s, 0, 1, 2), 0.5, 1e-14);
}

TEST(Twist, PreservesValidity) {
  rnd::Rng rng(3);
  auto net = rnd::random_inoue(rng, 5, 8, true);
  EXPECT_TRUE(validate_hilbert_system(*net.sys).ok());
  EXPECT_THROW(twist(*net.sys, {}), MalformedInput);
}
