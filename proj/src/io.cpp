#include "loch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace loch::io {

namespace {

void put_string(std::string& out, const std::string& s) {
  out += Json(s).dump();
}

void put_number(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  if (x == 0.0) x = 0.0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
  if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

bool is_scalar_array(const Json& j) {
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

// Arrays of scalars, or of scalar pairs such as matrix rows, stay on one line.
bool is_flat(const Json& j) {
  for (const auto& x : j)
    if (x.is_object() || (x.is_array() && !is_scalar_array(x))) return false;
  return true;
}

void emit(std::string& out, const Json& j, int indent, int level) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad;
        put_string(out, it.key());
        out += indent > 0 ? ": " : ":";
        emit(out, it.value(), indent, level + 1);
      }
      out += close + '}';
      return;
    }
    case Json::value_t::array: {
      // Short numeric rows stay on one line.
      if (j.empty() || is_flat(j)) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += indent > 0 ? ", " : ",";
          emit(out, j[i], 0, 0);
        }
        out += ']';
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        out += pad;
        emit(out, j[i], indent, level + 1);
      }
      out += close + ']';
      return;
    }
    case Json::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string pair_key(const DirectedSet& ix, std::size_t a, std::size_t b) { return ix.name(a) + "<=" + ix.name(b); }

std::pair<std::size_t, std::size_t> parse_pair_key(const DirectedSet& ix, const std::string& key) {
  auto pos = key.find("<=");
  if (pos == std::string::npos) throw MalformedInput("pair key must look like a<=b: " + key);
  return {ix.index_of(key.substr(0, pos)), ix.index_of(key.substr(pos + 2))};
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

ChainWitness chain_from(const Json& j) {
  ChainWitness w;
  if (j.is_object() && j.contains("chain"))
    for (const auto& x : j.at("chain")) w.chain.push_back(x.get<std::string>());
  return w;
}

template <class F>
auto wrap(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(e.what());
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  emit(out, j, indent, 0);
  out += '\n';
  return out;
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write " + path.string());
  out << text;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw MalformedInput("complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw MalformedInput("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw MalformedInput("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json violation_to_json(const Violation& v) {
  Json j;
  j["status"] = "fail";
  j["axiom"] = v.axiom;
  j["message"] = v.message;
  j["witness"] = v.witness;
  j["residual"] = v.residual;
  return j;
}

Json index_to_json(const DirectedSet& ds, const ChainWitness& chain) {
  Json j;
  j["elements"] = ds.elements();
  Json leq = Json::array();
  for (std::size_t a = 0; a < ds.size(); ++a)
    for (std::size_t b = 0; b < ds.size(); ++b)
      if (ds.leq(a, b)) leq.push_back(Json::array({ds.name(a), ds.name(b)}));
  j["leq"] = std::move(leq);
  if (!chain.chain.empty()) j["chain"] = chain.chain;
  return j;
}

Checked<IndexData> index_from_json(const Json& j) {
  return wrap([&]() -> Checked<IndexData> {
    std::vector<std::string> elements = need(j, "elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& p : need(j, "leq")) {
      if (!p.is_array() || p.size() != 2) throw MalformedInput("leq entries must be [smaller, larger]");
      pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    auto ds = check_directed(elements, pairs);
    if (!ds) return ds.violation();
    return IndexData{std::make_shared<const DirectedSet>(std::move(ds.value())), chain_from(j)};
  });
}

Json measure_to_json(const InductiveMeasureSystem& sys, const ChainWitness& chain) {
  const DirectedSet& ix = *sys.index;
  Json j;
  j["index"] = index_to_json(ix, chain);
  Json nodes = Json::object();
  for (std::size_t l = 0; l < ix.size(); ++l) {
    const auto& n = sys.nodes[l];
    Json node;
    if (n.segments.empty()) {
      node["kind"] = "atomic";
      Json atoms = Json::object();
      for (const auto& a : n.atoms) atoms[a.id] = a.weight;
      node["atoms"] = std::move(atoms);
    } else {
      node["kind"] = "segments";
      Json segs = Json::array();
      for (const auto& s : n.segments) segs.push_back(Json::array({complex_to_json(s.start), complex_to_json(s.end)}));
      node["segments"] = std::move(segs);
      if (!n.segment_labels.empty()) node["labels"] = n.segment_labels;
      if (!n.atoms.empty()) {
        Json atoms = Json::object();
        for (const auto& a : n.atoms) atoms[a.id] = a.weight;
        node["atoms"] = std::move(atoms);
      }
    }
    if (n.allow_zero_mass) node["allow_zero_mass"] = true;
    nodes[ix.name(l)] = std::move(node);
  }
  j["nodes"] = std::move(nodes);
  Json wit = Json::object();
  for (const auto& [pr, w] : sys.witnesses) {
    Json arr = Json::array();
    for (auto c : w) arr.push_back(c == kNoCell ? Json(nullptr) : Json(c));
    wit[pair_key(ix, pr.first, pr.second)] = std::move(arr);
  }
  j["witnesses"] = std::move(wit);
  return j;
}

Checked<MeasureData> measure_from_json(const Json& j) {
  return wrap([&]() -> Checked<MeasureData> {
    auto idx = index_from_json(need(j, "index"));
    if (!idx) return idx.violation();
    auto sys = std::make_shared<InductiveMeasureSystem>();
    sys->index = idx.value().index;
    const DirectedSet& ix = *sys->index;
    const Json& nodes = need(j, "nodes");
    for (std::size_t l = 0; l < ix.size(); ++l) {
      if (!nodes.contains(ix.name(l))) throw MalformedInput("no node entry for " + ix.name(l));
      const Json& n = nodes.at(ix.name(l));
      MeasureSpaceNode node;
      const std::string kind = need(n, "kind").get<std::string>();
      if (kind != "atomic" && kind != "segments") throw MalformedInput("unknown node kind " + kind);
      if (n.contains("atoms"))
        for (auto it = n.at("atoms").begin(); it != n.at("atoms").end(); ++it)
          node.atoms.push_back({it.key(), it.value().get<double>()});
      if (kind == "segments") {
        for (const auto& s : need(n, "segments")) {
          if (!s.is_array() || s.size() != 2) throw MalformedInput("segments are [[x0,y0],[x1,y1]]");
          node.segments.push_back({complex_from_json(s[0]), complex_from_json(s[1])});
        }
        if (n.contains("labels")) node.segment_labels = n.at("labels").get<std::vector<std::string>>();
        if (!node.segment_labels.empty() && node.segment_labels.size() != node.segments.size())
          throw MalformedInput("one label per segment is required");
      }
      node.allow_zero_mass = n.value("allow_zero_mass", false);
      sys->nodes.push_back(std::move(node));
    }
    if (j.contains("witnesses"))
      for (auto it = j.at("witnesses").begin(); it != j.at("witnesses").end(); ++it) {
        auto pr = parse_pair_key(ix, it.key());
        std::vector<std::size_t> w;
        for (const auto& c : it.value()) w.push_back(c.is_null() ? kNoCell : c.get<std::size_t>());
        sys->witnesses[pr] = std::move(w);
      }
    return MeasureData{sys, idx.value().chain};
  });
}

Json hilbert_to_json(const InductiveHilbertSystem& sys, const ChainWitness& chain) {
  const DirectedSet& ix = sys.index();
  Json j;
  j["index"] = index_to_json(ix, chain);
  Json dims = Json::object();
  for (std::size_t l = 0; l < ix.size(); ++l) dims[ix.name(l)] = sys.dim(l);
  j["dims"] = std::move(dims);
  Json emb = Json::object();
  for (const auto& [pr, m] : sys.embeddings()) emb[pair_key(ix, pr.first, pr.second)] = matrix_to_json(m);
  j["embeddings"] = std::move(emb);
  return j;
}

Checked<HilbertData> hilbert_from_json(const Json& j) {
  return wrap([&]() -> Checked<HilbertData> {
    auto idx = index_from_json(need(j, "index"));
    if (!idx) return idx.violation();
    const DirectedSet& ix = *idx.value().index;
    std::vector<Eigen::Index> dims;
    const Json& d = need(j, "dims");
    for (std::size_t l = 0; l < ix.size(); ++l) {
      if (!d.contains(ix.name(l))) throw MalformedInput("no dimension for " + ix.name(l));
      dims.push_back(d.at(ix.name(l)).get<Eigen::Index>());
    }
    auto sys = std::make_shared<InductiveHilbertSystem>(idx.value().index, dims);
    if (j.contains("embeddings"))
      for (auto it = j.at("embeddings").begin(); it != j.at("embeddings").end(); ++it) {
        auto [a, b] = parse_pair_key(ix, it.key());
        sys->set_embedding(a, b, matrix_from_json(it.value()));
      }
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b < ix.size(); ++b)
        if (a != b && ix.leq(a, b) && !sys->has_embedding(a, b))
          throw MalformedWitness("missing embedding " + pair_key(ix, a, b));
    return HilbertData{sys, idx.value().chain};
  });
}

Json operator_to_json(const CoherentOperator& t, const ChainWitness& chain) {
  Json j;
  j["system"] = hilbert_to_json(*t.domain, chain);
  if (!t.square()) j["codomain"] = hilbert_to_json(*t.codomain);
  Json blocks = Json::object();
  for (std::size_t l = 0; l < t.blocks.size(); ++l) blocks[t.index().name(l)] = matrix_to_json(t.blocks[l]);
  j["blocks"] = std::move(blocks);
  return j;
}

namespace {

Json resolve(const Json& ref, const std::filesystem::path& base) {
  if (ref.is_string()) {
    std::filesystem::path p = ref.get<std::string>();
    return read_file(p.is_absolute() ? p : base / p);
  }
  return ref;
}

}  // namespace

Checked<OperatorData> operator_from_json(const Json& j, const std::filesystem::path& base_dir,
                                         const Json* system_override) {
  return wrap([&]() -> Checked<OperatorData> {
    const Json sysj = system_override ? *system_override : resolve(need(j, "system"), base_dir);
    auto dom = hilbert_from_json(sysj);
    if (!dom) return dom.violation();
    OperatorData out;
    out.domain = dom.value().system;
    out.chain = dom.value().chain;
    out.codomain = out.domain;
    if (j.contains("codomain")) {
      auto cod = hilbert_from_json(resolve(j.at("codomain"), base_dir));
      if (!cod) return cod.violation();
      if (cod.value().system->index().elements() != out.domain->index().elements())
        throw IncompatibleError("domain and codomain use different index sets");
      out.codomain = cod.value().system;
    }
    if (j.contains("chain")) out.chain = chain_from(j);
    const DirectedSet& ix = out.domain->index();
    const Json& blocks = need(j, "blocks");
    for (std::size_t l = 0; l < ix.size(); ++l) {
      if (!blocks.contains(ix.name(l))) throw MalformedInput("no block for node " + ix.name(l));
      Matrix b = matrix_from_json(blocks.at(ix.name(l)));
      if (b.rows() != out.codomain->dim(l) || b.cols() != out.domain->dim(l))
        throw MalformedInput("block " + ix.name(l) + " has the wrong shape");
      out.blocks.push_back(std::move(b));
    }
    return out;
  });
}

Json model_to_json(const MultiplicityModel& m, const CoherentOperator& n, const ChainWitness& chain) {
  const DirectedSet& ix = m.sys->index();
  Json j;
  j["format"] = "loch-multiplicity-model";
  j["chain"] = chain.chain;
  j["top"] = ix.name(m.top);
  j["max_multiplicity"] = m.max_multiplicity;
  j["infinite_multiplicity"] = Json::array();
  Json pts = Json::array();
  for (const auto& p : m.points) {
    Json q;
    q["id"] = p.id;
    q["multiplicity"] = p.multiplicity;
    q["phi"] = complex_to_json(p.value);
    Json in = Json::array();
    for (std::size_t l : ix.lexicographic_order())
      if (p.membership[l] == 1) in.push_back(ix.name(l));
    q["nodes"] = std::move(in);
    q["introduced_at"] = m.chain.at(p.step);
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  Json nodes = Json::object();
  for (std::size_t l = 0; l < ix.size(); ++l) {
    Json node;
    Json ids = Json::array();
    for (std::size_t p : m.node_points[l]) ids.push_back(m.points[p].id);
    node["points"] = std::move(ids);
    Json strata = Json::object();
    for (int k = 1; k <= m.max_multiplicity; ++k) strata[std::to_string(k)] = m.points_at(l, k).size();
    node["strata"] = std::move(strata);
    node["U"] = matrix_to_json(m.unitaries[l]);
    node["residual"] = m.residuals[l];
    node["unitarity"] = m.unitarity[l];
    nodes[ix.name(l)] = std::move(node);
  }
  j["nodes"] = std::move(nodes);
  j["operator"] = operator_to_json(n, chain);
  return j;
}

ModelVerification verify_model(const Json& model, const Tolerances& tol) {
  return wrap([&]() -> ModelVerification {
    ModelVerification r;
    auto op = operator_from_json(need(model, "operator"), ".");
    if (!op) {
      r.violation = op.violation();
      return r;
    }
    const InductiveHilbertSystem& sys = *op.value().domain;
    const DirectedSet& ix = sys.index();
    std::map<std::string, std::pair<int, Complex>> points;
    for (const auto& p : need(model, "points"))
      points[need(p, "id").get<std::string>()] = {need(p, "multiplicity").get<int>(), complex_from_json(need(p, "phi"))};
    const Json& nodes = need(model, "nodes");
    std::vector<Matrix> u(ix.size());
    std::vector<std::vector<std::string>> keys(ix.size());  // "<point>#k" per model row
    for (std::size_t l = 0; l < ix.size(); ++l) {
      const Json& node = need(nodes, ix.name(l).c_str());
      u[l] = matrix_from_json(need(node, "U"));
      std::vector<Complex> diag;
      for (const auto& id : need(node, "points")) {
        auto it = points.find(id.get<std::string>());
        if (it == points.end()) throw MalformedInput("unknown model point " + id.get<std::string>());
        for (int k = 1; k <= it->second.first; ++k) {
          diag.push_back(it->second.second);
          keys[l].push_back(it->first + "#" + std::to_string(k));
        }
      }
      const auto d = sys.dim(l);
      if (static_cast<Eigen::Index>(diag.size()) != d || u[l].rows() != d || u[l].cols() != d) {
        r.bookkeeping_ok = false;
        r.violation = Violation{"multiplicity", "sum of n times the stratum sizes differs from the dimension",
                                {ix.name(l)}, 0.0};
        return r;
      }
      Matrix m = Matrix::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
      const Matrix id = Matrix::Identity(d, d);
      const double un = std::max(spectral_norm(u[l] * u[l].adjoint() - id), spectral_norm(u[l].adjoint() * u[l] - id));
      const double res = spectral_norm(u[l] * op.value().blocks[l] * u[l].adjoint() - m);
      r.max_unitarity = std::max(r.max_unitarity, un);
      r.max_residual = std::max(r.max_residual, res);
      if (!r.violation && un > tol.unitarity)
        r.violation = Violation{"unitarity", "U is not unitary", {ix.name(l)}, un};
      if (!r.violation && res > tol.model_residual)
        r.violation = Violation{"model-residual", "U N U* differs from the multiplication operator", {ix.name(l)}, res};
    }
    // U_nu J = J' U_lambda with J' the inclusion of point copies.
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b < ix.size(); ++b) {
        if (a == b || !ix.leq(a, b)) continue;
        Matrix jp = Matrix::Zero(sys.dim(b), sys.dim(a));
        for (std::size_t i = 0; i < keys[a].size(); ++i) {
          auto it = std::find(keys[b].begin(), keys[b].end(), keys[a][i]);
          if (it == keys[b].end()) {
            r.violation = Violation{"coherence", "model point missing from a larger node", {ix.name(a), ix.name(b)}, 0.0};
            return r;
          }
          jp(it - keys[b].begin(), static_cast<Eigen::Index>(i)) = 1.0;
        }
        const double c = spectral_norm(u[b] * sys.embedding(a, b) - jp * u[a]);
        r.coherence_residual = std::max(r.coherence_residual, c);
        if (!r.violation && c > 1e-9)
          r.violation = Violation{"coherence", "model unitaries do not intertwine the inclusions", {ix.name(a), ix.name(b)}, c};
      }
    return r;
  });
}

std::string spectrum_csv(const SpectrumSet& s, const DirectedSet& ix) {
  std::ostringstream out;
  out << "re,im,nodes\n";
  char buf[80];
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.points[i].real(), s.points[i].imag());
    out << buf;
    std::vector<std::string> names;
    for (std::size_t l : s.nodes_of_point[i]) names.push_back(ix.name(l));
    std::sort(names.begin(), names.end());
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? ";" : "") << names[k];
    out << '\n';
  }
  return out.str();
}

}  // namespace loch::io
