#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "loch/io.hpp"
#include "loch/random_nets.hpp"

using namespace loch;
using io::Json;

TEST(Dump, NumberFormatting) {
  EXPECT_EQ(io::dump(Json(0.1), 0), "0.10000000000000001\n");
  EXPECT_EQ(io::dump(Json(2.0), 0), "2.0\n");
  EXPECT_EQ(io::dump(Json(-0.0), 0), "0.0\n");
  EXPECT_EQ(io::dump(Json(1e300), 0), "1.0000000000000001e+300\n");
  EXPECT_EQ(io::dump(Json(std::numeric_limits<double>::infinity()), 0), "null\n");
  EXPECT_EQ(io::dump(Json(3), 0), "3\n");
}

TEST(Dump, FlatArraysStayOnOneLine) {
  Json j;
  j["m"] = Json::array({Json::array({Json::array({1.0, 0.0}), Json::array({0.5, -1.0})})});
  j["v"] = Json::array({1, 2});
  EXPECT_EQ(io::dump(j), "{\n  \"m\": [\n    [[1.0,0.0], [0.5,-1.0]]\n  ],\n  \"v\": [1, 2]\n}\n");
}

TEST(Dump, DoublesRoundTripExactly) {
  rnd::Rng rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(Json::parse(io::dump(Json(x), 0)).get<double>(), x);
  }
}

TEST(Json, ComplexAndMatrix) {
  EXPECT_EQ(io::complex_from_json(io::complex_to_json({0.3, -0.4})), Complex(0.3, -0.4));
  EXPECT_EQ(io::complex_from_json(Json(2.5)), Complex(2.5));
  rnd::Rng rng(2);
  Matrix m = rnd::random_matrix(rng, 3, 2);
  EXPECT_TRUE(io::matrix_from_json(Json::parse(io::dump(io::matrix_to_json(m)))) == m);
  EXPECT_THROW(io::matrix_from_json(Json::parse("[[1],[1,2]]")), MalformedInput);
}

TEST(Json, ViolationReport) {
  auto j = io::violation_to_json({"c2", "msg", {"x"}, 0.25});
  EXPECT_EQ(j["status"], "fail");
  EXPECT_EQ(j["axiom"], "c2");
  EXPECT_EQ(j["witness"], Json::array({"x"}));
  EXPECT_EQ(j["residual"].get<double>(), 0.25);
}

TEST(Json, IndexRoundTrip) {
  rnd::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    auto ix = rnd::random_index(rng, 1 + t % 7);
    auto back = io::index_from_json(io::index_to_json(*ix.index, ix.chain));
    ASSERT_TRUE(back.ok());
    const auto& d = *back.value().index;
    EXPECT_EQ(d.elements(), ix.index->elements());
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = 0; b < d.size(); ++b) EXPECT_EQ(d.leq(a, b), ix.index->leq(a, b));
    EXPECT_EQ(back.value().chain.chain, ix.chain.chain);
  }
  auto bad = io::index_from_json(Json::parse(R"({"elements":["a","b"],"leq":[["a","a"],["b","b"]]})"));
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.violation().axiom, "upper-bound");
}

TEST(Json, MeasureRoundTrip) {
  auto h = build_inductive_system(HataVariant::branch_indexed, IfsParams{}, 2);
  auto j = io::measure_to_json(h.system, h.chain);
  auto back = io::measure_from_json(Json::parse(io::dump(j)));
  ASSERT_TRUE(back.ok());
  const auto& s = *back.value().system;
  ASSERT_EQ(s.nodes.size(), h.system.nodes.size());
  for (std::size_t l = 0; l < s.nodes.size(); ++l) {
    ASSERT_EQ(s.nodes[l].segments.size(), h.system.nodes[l].segments.size());
    for (std::size_t i = 0; i < s.nodes[l].segments.size(); ++i) {
      EXPECT_EQ(s.nodes[l].segments[i].start, h.system.nodes[l].segments[i].start);
      EXPECT_EQ(s.nodes[l].segments[i].end, h.system.nodes[l].segments[i].end);
    }
  }
  EXPECT_TRUE(validate_system(s).ok());
  EXPECT_EQ(io::dump(io::measure_to_json(s, back.value().chain)), io::dump(j));
}

TEST(Json, AtomicMeasureFromText) {
  auto j = Json::parse(R"({"index":{"elements":["a","b"],"leq":[["a","a"],["b","b"],["a","b"]]},
    "nodes":{"a":{"kind":"atomic","atoms":{"p":1.0}},"b":{"kind":"atomic","atoms":{"p":1.0,"q":4.0}}}})");
  auto m = io::measure_from_json(j);
  ASSERT_TRUE(m.ok());
  EXPECT_TRUE(validate_system(*m.value().system).ok());
  EXPECT_EQ(m.value().system->node(1).total(), 5.0);
  auto broken = j;
  broken["nodes"].erase("b");
  EXPECT_THROW(io::measure_from_json(broken), MalformedInput);
}

TEST(Json, HilbertAndOperatorRoundTrip) {
  rnd::Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    auto net = rnd::random_inoue(rng, 2 + t % 5, 6, true);
    auto op = rnd::random_coherent(rng, net);
    auto j = Json::parse(io::dump(io::operator_to_json(op, net.ix.chain)));
    auto back = io::operator_from_json(j, ".");
    ASSERT_TRUE(back.ok());
    const auto& d = back.value();
    EXPECT_EQ(d.chain.chain, net.ix.chain.chain);
    for (std::size_t l = 0; l < op.blocks.size(); ++l) {
      EXPECT_TRUE(d.blocks[l] == op.blocks[l]);
      for (std::size_t n : net.sys->index().up_set(l)) EXPECT_TRUE(d.domain->embedding(l, n) == net.sys->embedding(l, n));
    }
  }
}

TEST(Json, OperatorErrors) {
  auto j = Json::parse(R"({"system":{"index":{"elements":["a"],"leq":[["a","a"]]},"dims":{"a":2},"embeddings":{}},
    "blocks":{"a":[[[1,0]]]}})");
  EXPECT_THROW(io::operator_from_json(j, "."), MalformedInput);
  j["system"] = "does-not-exist.json";
  EXPECT_THROW(io::operator_from_json(j, "."), MalformedInput);
  auto h = Json::parse(R"({"index":{"elements":["a","b"],"leq":[["a","a"],["b","b"],["a","b"]]},"dims":{"a":1,"b":1},"embeddings":{}})");
  EXPECT_THROW(io::hilbert_from_json(h), MalformedWitness);
}

TEST(Json, ModelRoundTripAndTamper) {
  rnd::Rng rng(5);
  auto net = rnd::random_inoue(rng, 5, 8, true);
  auto n = rnd::random_normal(rng, net);
  auto m = multiplicity_model(n, net.ix.chain);
  auto j = Json::parse(io::dump(io::model_to_json(m, n, net.ix.chain)));
  auto ok = io::verify_model(j, Tolerances{});
  EXPECT_FALSE(ok.violation.has_value());
  EXPECT_TRUE(ok.bookkeeping_ok);
  EXPECT_LE(ok.max_residual, 1e-9);

  auto shifted = j;
  shifted["points"][0]["phi"] = io::complex_to_json(io::complex_from_json(j["points"][0]["phi"]) + Complex(1.0));
  auto bad = io::verify_model(shifted, Tolerances{});
  ASSERT_TRUE(bad.violation.has_value());
  EXPECT_EQ(bad.violation->axiom, "model-residual");

  auto dropped = j;
  dropped["points"][0]["multiplicity"] = dropped["points"][0]["multiplicity"].get<int>() + 1;
  auto dv = io::verify_model(dropped, Tolerances{});
  ASSERT_TRUE(dv.violation.has_value());
  EXPECT_EQ(dv.violation->axiom, "multiplicity");
}

TEST(Csv, Spectrum) {
  auto ix = std::make_shared<DirectedSet>(check_directed({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}}).value());
  auto s = std::make_shared<InductiveHilbertSystem>(build_inoue_space(ix, {1, 1}));
  Matrix t2 = Matrix::Zero(2, 2);
  t2(0, 0) = 2.0;
  t2(1, 1) = Complex(0, 3);
  auto op = validate_coherent({Matrix::Constant(1, 1, 2.0), t2}, s).value();
  EXPECT_EQ(io::spectrum_csv(spectrum(op), *ix), "re,im,nodes\n0,3,b\n2,0,a;b\n");
}
