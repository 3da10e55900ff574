#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loch/hata.hpp"
#include "loch/hilbert.hpp"
#include "loch/measure.hpp"
#include "loch/random_nets.hpp"

using namespace loch;

namespace {

std::shared_ptr<const DirectedSet> chain_ab() {
  return std::make_shared<DirectedSet>(check_directed({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}}).value());
}

InductiveMeasureSystem atoms_ab(double wa_small, double wa_big) {
  InductiveMeasureSystem s;
  s.index = chain_ab();
  s.nodes.resize(2);
  s.nodes[0].atoms = {{"a", wa_small}};
  s.nodes[1].atoms = {{"a", wa_big}, {"b", 2.0}};
  return s;
}

const IfsParams kP{};

}  // namespace

TEST(MeasureSystem, AtomicNested) {
  auto cert = validate_system(atoms_ab(1.0, 1.0));
  ASSERT_TRUE(cert.ok());
  EXPECT_EQ(cert.value().pairs_checked, 1u);
}

TEST(MeasureSystem, AtomWeightMismatch) {
  auto v = validate_system(atoms_ab(1.0, 1.5));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "sim3");
}

TEST(MeasureSystem, MissingAtomInLargerNode) {
  auto s = atoms_ab(1.0, 1.0);
  s.nodes[0].atoms.push_back({"z", 1.0});
  auto v = validate_system(s);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation().axiom, "sim2");
}

TEST(MeasureSystem, NonInjectiveWitness) {
  auto s = atoms_ab(1.0, 1.0);
  s.nodes[0].atoms.push_back({"b", 2.0});
  s.witnesses[{0, 1}] = {0, 0};
  EXPECT_THROW(validate_system(s), MalformedWitness);
}

TEST(MeasureSystem, HataLinearDepthThree) {
  auto h = build_inductive_system(HataVariant::linear, kP, 3);
  auto cert = validate_system(h.system);
  ASSERT_TRUE(cert.ok());
  EXPECT_EQ(cert.value().pairs_checked, 6u);
}

TEST(MeasureSystem, ShiftedSegmentBreaksInclusion) {
  auto h = build_inductive_system(HataVariant::linear, kP, 2);
  h.system.nodes[1].segments.back().end += Complex(0.0, 0.01);
  EXPECT_FALSE(validate_system(h.system).ok());
}

TEST(LimitMeasure, Examples) {
  auto h = build_inductive_system(HataVariant::linear, kP, 3);
  EXPECT_NEAR(limit_measure(h.system, {SetExpr::carrier("0"), std::nullopt}), 1.5, 1e-14);
  EXPECT_EQ(limit_measure(h.system, {SetExpr::empty(), std::nullopt}), 0.0);
  auto a = SetExpr::branches({"X00"}), b = SetExpr::branches({"2"});
  const double ma = limit_measure(h.system, {a, std::nullopt}), mb = limit_measure(h.system, {b, std::nullopt});
  EXPECT_NEAR(limit_measure(h.system, {SetExpr::unite({a, b}), std::nullopt}), ma + mb, 1e-14);
  EXPECT_NEAR(ma, 1.0, 1e-15);
}

TEST(LimitMeasure, RejectsOmegaTildeOnly) {
  auto h = build_inductive_system(HataVariant::linear, kP, 3);
  EXPECT_THROW(limit_measure(h.system, hata_full_set(h)), ClassificationError);
}

TEST(Classification, Examples) {
  auto h = build_inductive_system(HataVariant::linear, kP, 3);
  auto full = is_in_omega_tilde(h.system, {SetExpr::full(), std::nullopt});
  EXPECT_EQ(full.membership, Membership::in_omega);
  EXPECT_EQ(full.containing_node, std::optional<std::size_t>(3));
  auto tail = is_in_omega_tilde(h.system, hata_full_set(h));
  EXPECT_EQ(tail.membership, Membership::in_omega_tilde_only);

  auto ray = is_in_omega_tilde(h.system, hata_branch_ray(h, '1', false));
  EXPECT_EQ(ray.membership, Membership::in_omega);
  EXPECT_EQ(is_in_omega_tilde(h.system, hata_branch_ray(h, '1', true)).membership, Membership::in_omega_tilde_only);

  auto s = atoms_ab(1.0, 1.0);
  auto atom = is_in_omega_tilde(s, {SetExpr::atoms({"b"}), std::nullopt});
  EXPECT_EQ(atom.membership, Membership::in_omega);
  EXPECT_EQ(atom.containing_node, std::optional<std::size_t>(1));
  EXPECT_EQ(is_in_omega_tilde(s, {SetExpr::atoms({"a"}), std::nullopt}).containing_node, std::optional<std::size_t>(0));
  EXPECT_EQ(is_in_omega_tilde(s, {SetExpr::atoms({"q"}), std::nullopt}).membership, Membership::not_measurable);
}

TEST(ExtendedMeasure, Examples) {
  auto h = build_inductive_system(HataVariant::linear, kP, 4);
  EXPECT_EQ(extended_measure(h.system, {SetExpr::empty(), std::nullopt}).value, 0.0);
  auto inf = extended_measure(h.system, hata_full_set(h));
  EXPECT_TRUE(inf.infinite);
  ASSERT_TRUE(inf.growth_ratio.has_value());
  EXPECT_NEAR(*inf.growth_ratio, 1.25, 1e-15);
  for (const char* node : {"0", "2", "4"}) {
    LimitSet a{SetExpr::carrier(node), std::nullopt};
    EXPECT_NEAR(extended_measure(h.system, a).value, limit_measure(h.system, a), 1e-13);
  }
  auto ray = extended_measure(h.system, hata_branch_ray(h, '1', true));
  EXPECT_FALSE(ray.infinite);
  EXPECT_GT(ray.value, extended_measure(h.system, hata_branch_ray(h, '1', false)).value);
  EXPECT_THROW(extended_measure(h.system, {SetExpr::atoms({"x"}), std::nullopt}), ClassificationError);
}

TEST(ExtendedMeasure, MonotoneAndTraceNondecreasing) {
  auto h = build_inductive_system(HataVariant::linear, kP, 4);
  auto b = enumerate_branches(kP, 4);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::string> small, big;
    for (const auto& br : b) {
      int r = static_cast<int>(rng() % 3);
      if (r == 0) small.push_back(br.label);
      if (r <= 1) big.push_back(br.label);
    }
    LimitSet a{SetExpr::branches(small), std::nullopt}, bb{SetExpr::branches(big), std::nullopt};
    EXPECT_LE(extended_measure(h.system, a).value, extended_measure(h.system, bb).value + 1e-15);
    auto net = trace_net(h.system, SetExpr::branches(big));
    for (std::size_t i = 1; i < net.size(); ++i) EXPECT_LE(net[i - 1], net[i] + 1e-15);
  }
}

TEST(SigmaAdditivity, TwoAtoms) {
  auto s = atoms_ab(1.0, 1.0);
  auto c = check_local_sigma_additivity(s, 1, {SetExpr::atoms({"a"}), SetExpr::atoms({"b"})});
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.value().union_measure, 3.0);
  EXPECT_EQ(c.value().sum, 3.0);
}

TEST(SigmaAdditivity, OverlapAndOutsideAreRejected) {
  auto s = atoms_ab(1.0, 1.0);
  EXPECT_THROW(check_local_sigma_additivity(s, 1, {SetExpr::atoms({"a"}), SetExpr::atoms({"a", "b"})}),
               PreconditionError);
  EXPECT_THROW(check_local_sigma_additivity(s, 0, {SetExpr::atoms({"b"})}), PreconditionError);
}

TEST(SigmaAdditivity, HataLevelTwoBranches) {
  auto h = build_inductive_system(HataVariant::linear, kP, 2);
  std::vector<SetExpr> family;
  auto b = enumerate_branches(kP, 2);
  ASSERT_EQ(b.size(), 5u);
  for (const auto& br : b) family.push_back(SetExpr::branches({br.label}));
  auto c = check_local_sigma_additivity(h.system, 2, family);
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(c.value().union_measure, branch_measure(b), 1e-13);
}

TEST(SigmaAdditivity, RandomAtomicPartitions) {
  rnd::Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    auto ix = rnd::random_index(rng, 1 + t % 5);
    auto ms = rnd::random_atomic_measure(rng, ix, 4);
    const std::size_t top = *ix.index->top();
    std::vector<std::vector<std::string>> parts(1 + rng() % 4);
    for (const auto& a : ms->node(top).atoms) parts[rng() % parts.size()].push_back(a.id);
    std::vector<SetExpr> family;
    for (auto& p : parts) family.push_back(SetExpr::atoms(p));
    auto c = check_local_sigma_additivity(*ms, top, family);
    ASSERT_TRUE(c.ok());
    EXPECT_NEAR(c.value().union_measure, ms->node(top).total(), 1e-12);
  }
}

TEST(Discretize, AtomicNode) {
  MeasureSpaceNode n;
  n.atoms = {{"a", 1.0}, {"b", 4.0}};
  auto c = discretize_l2(n, 1);
  ASSERT_EQ(c.dim(), 2u);
  EXPECT_EQ(c.basis[1].key, "b");
  EXPECT_EQ(c.weights()(1), 4.0);
}

TEST(Discretize, UnitSegment) {
  MeasureSpaceNode n;
  n.segments = {{0.0, 1.0}};
  auto c = discretize_l2(n, 4);
  ASSERT_EQ(c.dim(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(c.basis[k].weight, 0.25);
    EXPECT_NEAR(c.basis[k].location.real(), 0.125 + 0.25 * static_cast<double>(k), 1e-15);
  }
  n.segments.push_back({0.5, 0.5});
  EXPECT_THROW(discretize_l2(n, 2), DegenerateCarrier);
}

TEST(Discretize, ZeroMassAtomsAreNull) {
  MeasureSpaceNode n;
  n.allow_zero_mass = true;
  n.atoms = {{"a", 0.0}, {"b", 1.0}};
  auto c = discretize_l2(n, 1);
  EXPECT_EQ(c.dim(), 1u);
  EXPECT_EQ(c.null.size(), 1u);
}

TEST(Discretize, HataLevelZeroIntoLevelOne) {
  auto h = build_inductive_system(HataVariant::linear, kP, 1);
  auto l2 = discretize_l2(std::make_shared<InductiveMeasureSystem>(h.system), 2);
  EXPECT_EQ(l2.hilbert->dim(0), 4);
  EXPECT_EQ(l2.hilbert->dim(1), 6);
  Matrix j = l2.hilbert->embedding(0, 1);
  EXPECT_LE((j.adjoint() * j - Matrix::Identity(4, 4)).norm(), 1e-15);
  // Weights of matching basis vectors agree, so the weighted Gram matrices coincide.
  for (Eigen::Index k = 0; k < 4; ++k)
    for (Eigen::Index r = 0; r < 6; ++r)
      if (j(r, k) != 0.0) EXPECT_EQ(l2.carriers[0].basis[k].weight, l2.carriers[1].basis[r].weight);
}

TEST(Discretize, L2SystemsAreRepresentingAndTransitive) {
  for (auto v : {HataVariant::linear, HataVariant::branch_indexed, HataVariant::branch_union}) {
    auto h = build_inductive_system(v, kP, 2);
    auto l2 = discretize_l2(std::make_shared<InductiveMeasureSystem>(h.system), 2);
    EXPECT_TRUE(validate_hilbert_system(*l2.hilbert).ok());
    auto r = check_representing(*l2.hilbert);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(r.value().max_norm, 1e-12);
  }
  rnd::Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    auto ix = rnd::random_index(rng, 2 + t % 6);
    auto l2 = discretize_l2(rnd::random_atomic_measure(rng, ix, 3), 1);
    EXPECT_TRUE(validate_hilbert_system(*l2.hilbert).ok());
    EXPECT_TRUE(check_representing(*l2.hilbert).ok());
  }
}
