#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "loch/hata.hpp"
#include "loch/io.hpp"
#include "loch/kernels.hpp"
#include "loch/spectral.hpp"
#include "loch/suite.hpp"

namespace fs = std::filesystem;
using loch::io::Json;

namespace {

struct RunConfig {
  std::string in, out, system;
  std::string c = "0.3+0.4i";
  int n = 5;
  int depth = 3;
  int samples = 2;
  int hilbert_samples = 0;
  std::string variant = "linear";
  double tol = 0.0;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  std::vector<int> only;
};

// Validation failures print a JSON report on stdout and exit 1.
struct Failed {
  Json report;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    loch::io::write_file(out, text);
}

void ok_report(Json j) {
  Json r;
  r["status"] = "ok";
  for (auto it = j.begin(); it != j.end(); ++it) r[it.key()] = it.value();
  std::cout << loch::io::dump(r);
}

loch::Tolerances tolerances(const RunConfig& cfg) {
  loch::Tolerances t = loch::default_tolerances();
  if (cfg.tol != 0.0) {
    if (!(cfg.tol > 0.0)) throw loch::MalformedInput("tolerance must be positive");
    t.representing = t.coherence = cfg.tol;
  }
  return t;
}

void distinct_paths(const RunConfig& cfg) {
  if (!cfg.in.empty() && !cfg.out.empty() && fs::weakly_canonical(cfg.in) == fs::weakly_canonical(cfg.out))
    throw loch::MalformedInput("input and output paths must differ");
}

loch::IfsParams params(const RunConfig& cfg) {
  loch::IfsParams p{loch::parse_complex(cfg.c)};
  p.validate();
  return p;
}

template <class T>
const T& unwrap(const loch::Checked<T>& c) {
  if (!c) throw Failed{loch::io::violation_to_json(c.violation())};
  return c.value();
}

loch::io::OperatorData load_operator(const RunConfig& cfg) {
  Json op = loch::io::read_file(cfg.in);
  const fs::path base = fs::path(cfg.in).parent_path();
  if (!cfg.system.empty()) {
    Json sys = loch::io::read_file(cfg.system);
    return unwrap(loch::io::operator_from_json(op, base, &sys));
  }
  return unwrap(loch::io::operator_from_json(op, base));
}

void hata_gen(const RunConfig& cfg) {
  emit(loch::branch_csv(loch::enumerate_branches(params(cfg), cfg.n)), cfg.out);
}

void hata_svg(const RunConfig& cfg) {
  auto a = loch::generate_approximation(params(cfg), cfg.n, cfg.samples);
  emit(loch::render_svg(a, cfg.samples), cfg.out);
}

void hata_system(const RunConfig& cfg) {
  auto h = loch::build_inductive_system(loch::parse_variant(cfg.variant), params(cfg), cfg.depth);
  if (cfg.hilbert_samples > 0) {
    auto l2 = loch::discretize_l2(std::make_shared<const loch::InductiveMeasureSystem>(h.system), cfg.hilbert_samples);
    emit(loch::io::dump(loch::io::hilbert_to_json(*l2.hilbert, h.chain)), cfg.out);
  } else {
    emit(loch::io::dump(loch::io::measure_to_json(h.system, h.chain)), cfg.out);
  }
}

void verify_coherence(const RunConfig& cfg) {
  auto op = load_operator(cfg);
  const auto tol = tolerances(cfg);
  auto v = loch::validate_coherent(op.blocks, op.domain, op.codomain, tol.coherence);
  unwrap(v);
  auto verdicts = loch::coherence_verdicts(op.blocks, *op.domain, *op.codomain, tol.coherence);
  Json j;
  j["axiom"] = "coherence";
  j["nodes"] = op.domain->size();
  j["intertwining_residual"] = verdicts.intertwining_residual;
  j["block_residual"] = verdicts.block_residual;
  ok_report(j);
}

void verify_representing(const RunConfig& cfg) {
  auto data = unwrap(loch::io::hilbert_from_json(loch::io::read_file(cfg.in)));
  const auto tol = tolerances(cfg);
  auto h = unwrap(loch::validate_hilbert_system(*data.system));
  auto rep = unwrap(loch::check_representing(*data.system, tol.representing));
  Json j;
  j["axiom"] = "representing";
  j["pairs_checked"] = rep.entries.size();
  j["max_commutator"] = rep.max_norm;
  j["max_isometry_residual"] = h.max_isometry_residual;
  ok_report(j);
}

void verify_measure(const RunConfig& cfg) {
  auto data = unwrap(loch::io::measure_from_json(loch::io::read_file(cfg.in)));
  auto cert = unwrap(loch::validate_system(*data.system));
  Json j;
  j["axiom"] = "sim1-sim3";
  j["pairs_checked"] = cert.pairs_checked;
  Json eq = Json::array();
  for (auto [a, b] : cert.equivalent_pairs)
    eq.push_back(Json::array({data.system->index->name(a), data.system->index->name(b)}));
  j["equivalent_pairs"] = std::move(eq);
  if (!data.chain.chain.empty()) unwrap(loch::is_sequentially_finite(*data.system->index, data.chain));
  ok_report(j);
}

void spectrum_cmd(const RunConfig& cfg) {
  distinct_paths(cfg);
  auto op = load_operator(cfg);
  loch::CoherentOperator t = unwrap(loch::validate_coherent(op.blocks, op.domain, op.codomain, tolerances(cfg).coherence));
  if (!t.square()) throw loch::IncompatibleError("spectrum needs an operator on one system");
  auto s = loch::spectrum(t, tolerances(cfg).cluster);
  emit(loch::io::spectrum_csv(s, t.index()), cfg.out);
  if (!cfg.out.empty() && cfg.out != "-") {
    Json j;
    j["points"] = s.points.size();
    j["out"] = cfg.out;
    ok_report(j);
  }
}

void model_build(const RunConfig& cfg) {
  distinct_paths(cfg);
  auto op = load_operator(cfg);
  const auto tol = tolerances(cfg);
  loch::CoherentOperator n = unwrap(loch::validate_coherent(op.blocks, op.domain, op.codomain, tol.coherence));
  auto m = loch::multiplicity_model(n, op.chain, tol);
  emit(loch::io::dump(loch::io::model_to_json(m, n, op.chain)), cfg.out);
  if (!cfg.out.empty() && cfg.out != "-") {
    Json j;
    j["points"] = m.points.size();
    j["max_multiplicity"] = m.max_multiplicity;
    j["max_residual"] = m.max_residual();
    j["max_unitarity"] = m.max_unitarity();
    ok_report(j);
  }
}

void model_verify(const RunConfig& cfg) {
  auto r = loch::io::verify_model(loch::io::read_file(cfg.in), tolerances(cfg));
  if (r.violation) throw Failed{loch::io::violation_to_json(*r.violation)};
  Json j;
  j["max_residual"] = r.max_residual;
  j["max_unitarity"] = r.max_unitarity;
  j["coherence_residual"] = r.coherence_residual;
  ok_report(j);
}

int suite_cmd(const RunConfig& cfg) {
  std::cout << "isa " << loch::kernels::isa_name(loch::kernels::active_isa()) << ", seed " << cfg.seed << "\n";
  bool all = true;
  loch::suite::run(cfg.seed, cfg.only, [&](const loch::suite::CriterionResult& r) {
    all = all && r.pass;
    std::cout << loch::suite::format_line(r) << std::endl;
  });
  return all ? 0 : 1;
}

bool malformed(const loch::Error& e) {
  const std::string& k = e.kind();
  return k == "malformed-input" || k == "malformed-witness" || k == "lookup" || k == "invalid-params" ||
         k == "invalid-index" || k == "order" || k == "degenerate-carrier";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally Hilbert space laboratory"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "worker threads for per-node work")->check(CLI::Range(1u, 256u));

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<void(const RunConfig&)> fn) {
    sub->callback([&, fn] { action = [&, fn] { fn(cfg); return 0; }; });
  };

  auto* hata = app.add_subcommand("hata", "Hata set approximations and inductive systems");
  hata->require_subcommand(1);
  auto* gen = hata->add_subcommand("gen", "branch table as CSV");
  auto* svg = hata->add_subcommand("svg", "SVG of X_n");
  auto* sys = hata->add_subcommand("system", "inductive measure system as JSON");
  for (auto* s : {gen, svg, sys}) {
    s->add_option("--c", cfg.c, "parameter c as RE+IMi");
    s->add_option("--out", cfg.out, "output file (stdout when omitted)");
  }
  gen->add_option("--n", cfg.n, "level")->check(CLI::Range(0, 20));
  svg->add_option("--n", cfg.n, "level")->check(CLI::Range(0, 20));
  svg->add_option("--samples", cfg.samples, "points per segment")->check(CLI::Range(2, 1000));
  sys->add_option("--variant", cfg.variant, "linear | branch-indexed | branch-union");
  sys->add_option("--depth", cfg.depth, "depth")->required();
  sys->add_option("--hilbert", cfg.hilbert_samples, "emit the discretized L2 system with s samples per segment");
  bind(gen, hata_gen);
  bind(svg, hata_svg);
  bind(sys, hata_system);

  auto* verify = app.add_subcommand("verify", "validate an input file");
  verify->require_subcommand(1);
  auto* vc = verify->add_subcommand("coherence", "operator net coherence");
  auto* vr = verify->add_subcommand("representing", "commuting projections of a Hilbert system");
  auto* vm = verify->add_subcommand("measure", "measure system axioms");
  for (auto* s : {vc, vr, vm}) {
    s->add_option("--in", cfg.in, "input JSON")->required();
    s->add_option("--tol", cfg.tol, "tolerance override");
  }
  vc->add_option("--system", cfg.system, "Hilbert system JSON overriding the operator's own");
  bind(vc, verify_coherence);
  bind(vr, verify_representing);
  bind(vm, verify_measure);

  auto* spec = app.add_subcommand("spectrum", "spectrum of a coherent net as CSV");
  spec->add_option("--in", cfg.in, "operator JSON")->required();
  spec->add_option("--system", cfg.system, "Hilbert system JSON");
  spec->add_option("--out", cfg.out, "CSV output");
  spec->add_option("--tol", cfg.tol, "tolerance override");
  bind(spec, spectrum_cmd);

  auto* model = app.add_subcommand("model", "multiplicity models of locally normal operators");
  model->require_subcommand(1);
  auto* mb = model->add_subcommand("build", "build a model");
  mb->add_option("--in", cfg.in, "operator JSON")->required();
  mb->add_option("--system", cfg.system, "Hilbert system JSON (with chain)");
  mb->add_option("--out", cfg.out, "model JSON");
  mb->add_option("--tol", cfg.tol, "tolerance override");
  auto* mv = model->add_subcommand("verify", "recompute model residuals");
  mv->add_option("--in", cfg.in, "model JSON")->required();
  mv->add_option("--tol", cfg.tol, "tolerance override");
  bind(mb, model_build);
  bind(mv, model_verify);

  auto* suite = app.add_subcommand("suite", "acceptance suite");
  suite->add_option("--seed", cfg.seed, "random seed");
  suite->add_option("--only", cfg.only, "criterion ids")->delimiter(',');
  suite->callback([&] { action = [&] { return suite_cmd(cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  loch::set_threads(cfg.threads);
  try {
    return action ? action() : 2;
  } catch (const Failed& f) {
    std::cout << loch::io::dump(f.report);
    return 1;
  } catch (const loch::Error& e) {
    if (malformed(e)) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    Json r;
    r["status"] = "fail";
    r["axiom"] = e.kind();
    r["message"] = e.what();
    std::cout << loch::io::dump(r);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
