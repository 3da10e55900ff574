#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <regex>
#include <stack>

#include "loch/hata.hpp"

using namespace loch;

namespace {

const IfsParams kP{};

bool near(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

// Crude well-formedness: every opening tag is closed in order.
bool balanced_xml(const std::string& s) {
  std::stack<std::string> open;
  std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(s.begin(), s.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (open.empty() || open.top() != m[2]) return false;
      open.pop();
    } else {
      open.push(m[2]);
    }
  }
  return open.empty();
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(kP.validate());
  EXPECT_THROW((IfsParams{Complex(2.0, 0.0)}).validate(), InvalidParams);
  EXPECT_THROW((IfsParams{Complex(0.5, 0.0)}).validate(), InvalidParams);
  EXPECT_THROW((IfsParams{Complex(0.0, 0.0)}).validate(), InvalidParams);
}

TEST(Maps, Examples) {
  EXPECT_TRUE(near(apply_map(1, 1.0, kP), kP.c));
  EXPECT_TRUE(near(apply_map(2, 0.0, kP), 0.25));
  EXPECT_TRUE(near(apply_map(2, 1.0, kP), 1.0));
  EXPECT_THROW(apply_map(3, 0.0, kP), MalformedInput);
}

TEST(Maps, ComposeWord) {
  const Complex z{0.2, -0.7};
  EXPECT_TRUE(near(compose_word("", z, kP), z));
  EXPECT_TRUE(near(compose_word("11", z, kP), 0.25 * z));
  EXPECT_TRUE(near(compose_word("12", 0.0, kP), Complex(0.075, 0.1)));
  EXPECT_THROW(compose_word("13", z, kP), MalformedInput);
}

TEST(Maps, ClosedFormsUpToLengthThree) {
  const Complex c = kP.c;
  const double a2 = std::norm(c), q = 1.0 - a2;
  auto cj = [](Complex z) { return std::conj(z); };
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
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Complex z{u(rng), u(rng)};
    for (const auto& [w, f] : forms) EXPECT_TRUE(near(compose_word(w, z, kP), f(z))) << w;
  }
}

// Exchanging the linear coefficients of 112 and 121 gives forms that do not match.
TEST(Maps, CoefficientsOf112And121DoNotExchange) {
  const Complex c = kP.c, z{0.3, 0.9};
  const double a2 = std::norm(c), q = 1.0 - a2;
  const Complex lit112 = c * c * q * std::conj(z) + c * c * a2;
  const Complex lit121 = a2 * q * std::conj(z) + c * a2;
  EXPECT_GT(std::abs(compose_word("112", z, kP) - lit112), 1e-3);
  EXPECT_GT(std::abs(compose_word("121", z, kP) - lit121), 1e-3);
}

TEST(Maps, WordAffineMatchesComposition) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 0; m <= 6; ++m)
    for (const auto& w : words_of_length(m)) {
      auto f = word_affine(w, kP);
      const Complex z{u(rng), u(rng)};
      EXPECT_EQ(f.conjugates, m % 2 == 1);
      EXPECT_TRUE(near(f.a * (f.conjugates ? std::conj(z) : z) + f.b, compose_word(w, z, kP), 1e-13));
    }
}

TEST(Approximation, LevelZeroAndOne) {
  auto a0 = generate_approximation(kP, 0);
  ASSERT_EQ(a0.segments.size(), 2u);
  auto a1 = generate_approximation(kP, 1);
  ASSERT_EQ(a1.segments.size(), 4u);
  const Complex c = kP.c;
  const double a2 = std::norm(c);
  std::vector<Segment> expect = {{0.0, c}, {0.0, a2}, {a2, (1.0 - a2) * std::conj(c) + a2}, {a2, 1.0}};
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& s : a1.segments) found |= same_segment(s, e, 1e-12);
    EXPECT_TRUE(found) << e.start << " " << e.end;
  }
}

TEST(Approximation, LevelTwoContainsF22OfUnitInterval) {
  auto a = generate_approximation(kP, 2);
  ASSERT_EQ(a.segments.size(), 8u);
  bool found = false;
  for (const auto& s : a.segments) found |= same_segment(s, {0.4375, 1.0}, 1e-12);
  EXPECT_TRUE(found);
}

TEST(Approximation, SegmentCountsAndErrors) {
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(generate_approximation(kP, n).segments.size(), std::size_t{2} << n);
  EXPECT_THROW(generate_approximation(kP, -1), MalformedInput);
  EXPECT_THROW(generate_approximation(kP, 2, 1), MalformedInput);
  EXPECT_THROW(generate_approximation(IfsParams{Complex(1.5, 0.5)}, 2), InvalidParams);
}

TEST(Approximation, WordImagesOfSeedsReproduceSegments) {
  auto a = generate_approximation(kP, 6);
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const Segment seed = a.seeds[i] == Seed::x00 ? Segment{0.0, 1.0} : Segment{0.0, kP.c};
    Segment img{compose_word(a.words[i], seed.start, kP), compose_word(a.words[i], seed.end, kP)};
    EXPECT_TRUE(same_segment(img, a.segments[i], 1e-12));
  }
}

TEST(Approximation, NestedAndSelfSimilar) {
  for (int n = 0; n < 8; ++n) {
    auto a = generate_approximation(kP, n), b = generate_approximation(kP, n + 1);
    EXPECT_LE(max_inclusion_gap(a.segments, b.segments, 7), 1e-12);
    auto f = apply_ifs(a.segments, kP);
    ASSERT_EQ(f.size(), b.segments.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_TRUE(same_segment(f[i], b.segments[i], 1e-12));
  }
}

TEST(Approximation, SamplesIncludeEndpoints) {
  auto a = generate_approximation(kP, 1, 4);
  auto pts = a.sample(0);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_TRUE(near(pts.front(), a.segments[0].start));
  EXPECT_TRUE(near(pts.back(), a.segments[0].end));
}

TEST(Branches, Counts) {
  EXPECT_EQ(enumerate_branches(kP, 0).size(), 2u);
  EXPECT_EQ(enumerate_branches(kP, 3).size(), 9u);
  EXPECT_EQ(enumerate_branches(kP, 5).size(), 33u);
  for (int n = 0; n <= 12; ++n) EXPECT_EQ(enumerate_branches(kP, n).size(), (std::size_t{1} << n) + 1);
}

TEST(Branches, Measure) {
  EXPECT_NEAR(branch_measure(enumerate_branches(kP, 0)), 1.5, 1e-15);
  EXPECT_NEAR(branch_measure(enumerate_branches(kP, 1)), 1.875, 1e-15);
  EXPECT_EQ(branch_measure({}), 0.0);
}

TEST(Branches, MeasureMatchesIncrementSum) {
  for (int n = 0; n <= 12; ++n) {
    double expect = 1.5;
    for (int k = 0; k < n; ++k) expect += level_increment(kP, k);
    EXPECT_NEAR(branch_measure(enumerate_branches(kP, n)), expect, 1e-12);
    EXPECT_NEAR(total_length(generate_approximation(kP, n)), branch_measure(enumerate_branches(kP, n)), 1e-11);
  }
}

TEST(Branches, StartNodesLieOnEarlierBranches) {
  auto b = enumerate_branches(kP, 6);
  auto parents = branch_parents(b);
  EXPECT_FALSE(parents[0].has_value());
  for (std::size_t i = 1; i < b.size(); ++i) {
    ASSERT_TRUE(parents[i].has_value()) << b[i].label;
    EXPECT_LT(*parents[i], i);
    EXPECT_LE(point_segment_distance(b[i].start_node, b[*parents[i]].segment), 1e-12);
  }
}

TEST(Connectivity, SmallLevels) {
  auto c0 = check_connectivity(generate_approximation(kP, 0));
  ASSERT_TRUE(c0.ok());
  EXPECT_EQ(c0.value().components, 1u);
  auto c1 = check_connectivity(generate_approximation(kP, 1));
  ASSERT_TRUE(c1.ok());
  EXPECT_TRUE(near(c1.value().junction, std::norm(kP.c), 1e-12));
  for (int n = 2; n <= 10; ++n) EXPECT_TRUE(check_connectivity(generate_approximation(kP, n)).ok()) << n;
}

TEST(Connectivity, OtherParameters) {
  for (Complex c : {Complex(0.5, 0.5), Complex(0.6, -0.3), Complex(0.2, 0.1)}) {
    IfsParams p{c};
    for (int n = 0; n <= 7; ++n) EXPECT_TRUE(check_connectivity(generate_approximation(p, n)).ok());
  }
}

TEST(Svg, PolylineCounts) {
  for (auto [n, count] : std::vector<std::pair<int, std::size_t>>{{0, 2}, {5, 64}}) {
    auto svg = render_svg(generate_approximation(kP, n));
    EXPECT_EQ(count_of(svg, "<polyline"), count);
    EXPECT_TRUE(balanced_xml(svg));
  }
}

TEST(Svg, LevelFourteen) {
  auto svg = render_svg(generate_approximation(kP, 14));
  EXPECT_EQ(count_of(svg, "<polyline"), 32768u);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_TRUE(balanced_xml(svg));
}

TEST(Svg, Deterministic) {
  auto a = generate_approximation(kP, 4);
  EXPECT_EQ(render_svg(a), render_svg(a));
}

TEST(Systems, LinearDepthThree) {
  auto h = build_inductive_system(HataVariant::linear, kP, 3);
  EXPECT_EQ(h.system.index->elements(), (std::vector<std::string>{"0", "1", "2", "3"}));
  EXPECT_EQ(h.chain.chain, h.system.index->elements());
  for (int m = 0; m <= 3; ++m)
    EXPECT_EQ(h.system.nodes[static_cast<std::size_t>(m)].segments.size(), (std::size_t{1} << m) + 1);
}

TEST(Systems, BranchIndexedDepthTwo) {
  auto h = build_inductive_system(HataVariant::branch_indexed, kP, 2);
  const auto& ix = *h.system.index;
  EXPECT_EQ(ix.size(), 2u + 3 + 5 + 1);
  for (std::size_t a = 0; a < ix.size(); ++a)
    for (std::size_t b = 0; b < ix.size(); ++b) {
      auto pa = branch_index_pairs(2, true)[a], pb = branch_index_pairs(2, true)[b];
      EXPECT_EQ(ix.leq(a, b), branch_index_leq(pa, pb));
    }
  EXPECT_TRUE(is_sequentially_finite(ix, h.chain).ok());
}

TEST(Systems, BranchUnionDepthOneEnumeration) {
  auto h = build_inductive_system(HataVariant::branch_union, kP, 1);
  auto b = enumerate_branches(kP, 1);
  // Brute force: subsets of {X01, 2} joined to X00 that are connected.
  std::size_t expect = 0;
  for (unsigned r = 0; r < 4; ++r) {
    std::vector<std::size_t> subset{0};
    for (unsigned i = 0; i < 2; ++i)
      if (r >> i & 1u) subset.push_back(i + 1);
    if (branches_connected(b, subset)) ++expect;
  }
  EXPECT_EQ(h.system.index->size(), expect);
  const auto& ix = *h.system.index;
  for (std::size_t x = 0; x < ix.size(); ++x)
    for (std::size_t y = 0; y < ix.size(); ++y) {
      bool sub = true;
      for (const auto& l : h.system.nodes[x].segment_labels) {
        const auto& ly = h.system.nodes[y].segment_labels;
        sub &= std::find(ly.begin(), ly.end(), l) != ly.end();
      }
      EXPECT_EQ(ix.leq(x, y), sub);
    }
}

TEST(Systems, BranchUnionRejectsDisconnectedOrRootless) {
  auto b = enumerate_branches(kP, 2);
  EXPECT_THROW(branch_union_node(kP, 2, {"X01"}), InvalidIndex);
  EXPECT_NO_THROW(branch_union_node(kP, 2, {"X00", "2"}));
  // "12" hangs off X01, so it is cut off from X00 without it.
  EXPECT_THROW(branch_union_node(kP, 2, {"X00", "12"}), InvalidIndex);
  EXPECT_THROW(branch_union_node(kP, 2, {"X00", "nope"}), InvalidIndex);
}

TEST(Systems, DepthCaps) {
  EXPECT_THROW(build_inductive_system(HataVariant::branch_indexed, kP, 11), InvalidIndex);
  EXPECT_THROW(build_inductive_system(HataVariant::branch_union, kP, 5), InvalidIndex);
  EXPECT_THROW(parse_variant("spiral"), std::exception);
  EXPECT_EQ(parse_variant(variant_name(HataVariant::branch_union)), HataVariant::branch_union);
}

TEST(Systems, ValidateAll) {
  for (auto v : {HataVariant::linear, HataVariant::branch_indexed, HataVariant::branch_union})
    for (int d = 0; d <= 2; ++d) EXPECT_TRUE(validate_system(build_inductive_system(v, kP, d).system).ok());
}
