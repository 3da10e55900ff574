#include "loch/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "loch/hilbert.hpp"

namespace loch {

double MeasureSpaceNode::total() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  for (const auto& g : segments) s += g.length();
  return s;
}

namespace {

bool labelled(const MeasureSpaceNode& n) { return !n.segments.empty() && n.segment_labels.size() == n.segments.size(); }

std::string cell_name(const MeasureSpaceNode& n, std::size_t cell) {
  if (cell < n.atoms.size()) return n.atoms[cell].id;
  std::size_t s = cell - n.atoms.size();
  if (labelled(n)) return n.segment_labels[s];
  return "segment " + std::to_string(s);
}

std::size_t require_top(const InductiveMeasureSystem& sys) {
  auto t = sys.index->top();
  if (!t) throw PreconditionError("index has no top element");
  return *t;
}

}  // namespace

std::vector<std::size_t> inclusion_witness(const InductiveMeasureSystem& sys, std::size_t lambda, std::size_t nu,
                                           double tol) {
  const auto& a = sys.node(lambda);
  const auto& b = sys.node(nu);
  if (auto it = sys.witnesses.find({lambda, nu}); it != sys.witnesses.end()) return it->second;
  std::vector<std::size_t> w(a.cell_count(), kNoCell);
  if (lambda == nu) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = i;
    return w;
  }
  std::unordered_map<std::string, std::size_t> atom_at;
  for (std::size_t i = 0; i < b.atoms.size(); ++i) atom_at.emplace(b.atoms[i].id, i);
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (auto it = atom_at.find(a.atoms[i].id); it != atom_at.end()) w[i] = it->second;
  if (labelled(a) && labelled(b)) {
    std::unordered_map<std::string, std::size_t> seg_at;
    for (std::size_t i = 0; i < b.segments.size(); ++i) seg_at.emplace(b.segment_labels[i], i);
    for (std::size_t i = 0; i < a.segments.size(); ++i)
      if (auto it = seg_at.find(a.segment_labels[i]); it != seg_at.end())
        w[a.atoms.size() + i] = b.atoms.size() + it->second;
  } else {
    for (std::size_t i = 0; i < a.segments.size(); ++i)
      for (std::size_t j = 0; j < b.segments.size(); ++j)
        if (same_segment(a.segments[i], b.segments[j], tol)) {
          w[a.atoms.size() + i] = b.atoms.size() + j;
          break;
        }
  }
  return w;
}

Checked<SystemCertificate> validate_system(const InductiveMeasureSystem& sys, double tol) {
  const DirectedSet& ix = *sys.index;
  if (sys.nodes.size() != ix.size()) throw MalformedInput("node count does not match index size");
  for (std::size_t l = 0; l < ix.size(); ++l) {
    const auto& n = sys.node(l);
    std::unordered_set<std::string> seen;
    for (const auto& a : n.atoms) {
      if (!seen.insert(a.id).second) throw MalformedInput("duplicate atom '" + a.id + "' in node " + ix.name(l));
      bool ok = std::isfinite(a.weight) && (a.weight > 0.0 || (a.weight == 0.0 && n.allow_zero_mass));
      if (!ok) return Violation{"sim1", "atom weight must be positive", {ix.name(l), a.id}, a.weight};
    }
    if (!n.segment_labels.empty() && n.segment_labels.size() != n.segments.size())
      throw MalformedInput("segment labels do not match segments in node " + ix.name(l));
    for (std::size_t i = 0; i < n.segments.size(); ++i) {
      if (n.segments[i].length() <= tol)
        return Violation{"sim1", "degenerate segment", {ix.name(l), cell_name(n, n.atoms.size() + i)}, 0.0};
      for (std::size_t j = i + 1; j < n.segments.size(); ++j)
        if (collinear_overlap(n.segments[i], n.segments[j], tol))
          return Violation{"sim1",
                           "segments overlap in positive length",
                           {ix.name(l), cell_name(n, n.atoms.size() + i), cell_name(n, n.atoms.size() + j)},
                           0.0};
    }
  }

  SystemCertificate cert;
  cert.equivalent_pairs = ix.equivalent_pairs();
  for (std::size_t l = 0; l < ix.size(); ++l) {
    const auto& a = sys.node(l);
    for (std::size_t v : ix.up_set(l)) {
      if (v == l) continue;
      const auto& b = sys.node(v);
      const bool explicit_map = sys.witnesses.count({l, v}) != 0;
      auto w = inclusion_witness(sys, l, v, tol);
      if (w.size() != a.cell_count())
        throw MalformedWitness("witness " + ix.name(l) + "<=" + ix.name(v) + " has wrong length");
      std::vector<bool> hit(b.cell_count(), false);
      for (std::size_t c = 0; c < w.size(); ++c) {
        if (w[c] == kNoCell) {
          if (explicit_map) throw MalformedWitness("witness " + ix.name(l) + "<=" + ix.name(v) + " leaves a cell unmapped");
          return Violation{"sim2", "cell is not contained in the larger node", {ix.name(l), ix.name(v), cell_name(a, c)}, 0.0};
        }
        if (w[c] >= b.cell_count() || ((c < a.atoms.size()) != (w[c] < b.atoms.size())))
          throw MalformedWitness("witness " + ix.name(l) + "<=" + ix.name(v) + " maps outside the matching cell kind");
        if (hit[w[c]]) throw MalformedWitness("witness " + ix.name(l) + "<=" + ix.name(v) + " is not injective");
        hit[w[c]] = true;
        if (c < a.atoms.size()) {
          const auto& x = a.atoms[c];
          const auto& y = b.atoms[w[c]];
          if (x.id != y.id)
            return Violation{"sim2", "witness pairs different atoms", {ix.name(l), ix.name(v), x.id, y.id}, 0.0};
          if (std::abs(x.weight - y.weight) > tol * std::max(1.0, std::abs(x.weight)))
            return Violation{"sim3", "atom weight differs across nodes", {ix.name(l), ix.name(v), x.id},
                             std::abs(x.weight - y.weight)};
        } else {
          const auto& x = a.segments[c - a.atoms.size()];
          const auto& y = b.segments[w[c] - b.atoms.size()];
          if (!same_segment(x, y, tol))
            return Violation{"sim2", "segment cells must coincide", {ix.name(l), ix.name(v), cell_name(a, c)},
                             std::max(std::abs(x.start - y.start), std::abs(x.end - y.end))};
        }
      }
      ++cert.pairs_checked;
    }
  }

  if (!sys.witnesses.empty()) {
    for (std::size_t l = 0; l < ix.size(); ++l)
      for (std::size_t v : ix.up_set(l))
        for (std::size_t e : ix.up_set(v)) {
          if (!sys.witnesses.count({l, v}) && !sys.witnesses.count({v, e}) && !sys.witnesses.count({l, e})) continue;
          auto a = inclusion_witness(sys, l, v, tol), b = inclusion_witness(sys, v, e, tol),
               c = inclusion_witness(sys, l, e, tol);
          for (std::size_t i = 0; i < a.size(); ++i)
            if (b.at(a[i]) != c.at(i))
              return Violation{"witness-transitivity", "composed witness differs from direct witness",
                               {ix.name(l), ix.name(v), ix.name(e)}, 0.0};
        }
  }
  return cert;
}

// ---- set expressions ----

SetExpr SetExpr::empty() { return SetExpr(std::make_shared<Data>(Data{Kind::empty, {}, {}, {}})); }
SetExpr SetExpr::full() { return SetExpr(std::make_shared<Data>(Data{Kind::full, {}, {}, {}})); }
SetExpr SetExpr::atoms(std::vector<std::string> ids) {
  return SetExpr(std::make_shared<Data>(Data{Kind::atoms, {ids.begin(), ids.end()}, {}, {}}));
}
SetExpr SetExpr::piece(Segment s) { return SetExpr(std::make_shared<Data>(Data{Kind::piece, {}, s, {}})); }
SetExpr SetExpr::branches(std::vector<std::string> labels) {
  return SetExpr(std::make_shared<Data>(Data{Kind::branches, {labels.begin(), labels.end()}, {}, {}}));
}
SetExpr SetExpr::carrier(std::string node) {
  return SetExpr(std::make_shared<Data>(Data{Kind::carrier, {std::move(node)}, {}, {}}));
}
SetExpr SetExpr::unite(std::vector<SetExpr> parts) {
  return SetExpr(std::make_shared<Data>(Data{Kind::unite, {}, {}, std::move(parts)}));
}
SetExpr SetExpr::intersect(SetExpr a, SetExpr b) {
  return SetExpr(std::make_shared<Data>(Data{Kind::intersect, {}, {}, {std::move(a), std::move(b)}}));
}
SetExpr SetExpr::subtract(SetExpr a, SetExpr b) {
  return SetExpr(std::make_shared<Data>(Data{Kind::subtract, {}, {}, {std::move(a), std::move(b)}}));
}

std::string SetExpr::describe() const {
  std::ostringstream os;
  auto names = [&](const char* tag) {
    os << tag << "{";
    bool first = true;
    for (const auto& n : data_->names) {
      os << (first ? "" : ",") << n;
      first = false;
    }
    os << "}";
  };
  switch (data_->kind) {
    case Kind::empty: os << "empty"; break;
    case Kind::full: os << "X"; break;
    case Kind::atoms: names("atoms"); break;
    case Kind::branches: names("branches"); break;
    case Kind::carrier: names("carrier"); break;
    case Kind::piece: os << "piece[" << format_complex(data_->seg.start) << "," << format_complex(data_->seg.end) << "]"; break;
    case Kind::unite:
    case Kind::intersect:
    case Kind::subtract: {
      const char* op = data_->kind == Kind::unite ? "union" : data_->kind == Kind::intersect ? "meet" : "minus";
      os << op << "(";
      for (std::size_t i = 0; i < data_->children.size(); ++i) os << (i ? "," : "") << data_->children[i].describe();
      os << ")";
      break;
    }
  }
  return os.str();
}

NodeSet evaluate(const InductiveMeasureSystem& sys, std::size_t node, const SetExpr& e, double tol) {
  const auto& n = sys.node(node);
  NodeSet out{std::vector<bool>(n.atoms.size(), false), std::vector<IntervalSet>(n.segments.size())};
  const auto& d = e.data();
  switch (d.kind) {
    case SetExpr::Kind::empty:
      break;
    case SetExpr::Kind::full:
      out.atoms.assign(n.atoms.size(), true);
      for (auto& s : out.segments) s = IntervalSet::full();
      break;
    case SetExpr::Kind::atoms:
      for (std::size_t i = 0; i < n.atoms.size(); ++i) out.atoms[i] = d.names.count(n.atoms[i].id) != 0;
      break;
    case SetExpr::Kind::piece:
      for (std::size_t i = 0; i < n.segments.size(); ++i)
        if (auto ov = collinear_overlap(n.segments[i], d.seg, tol)) out.segments[i] = IntervalSet({*ov});
      break;
    case SetExpr::Kind::branches:
      if (labelled(n))
        for (std::size_t i = 0; i < n.segments.size(); ++i)
          if (d.names.count(n.segment_labels[i])) out.segments[i] = IntervalSet::full();
      break;
    case SetExpr::Kind::carrier: {
      const auto& other = sys.node(sys.index->index_of(*d.names.begin()));
      std::unordered_set<std::string> ids;
      for (const auto& a : other.atoms) ids.insert(a.id);
      for (std::size_t i = 0; i < n.atoms.size(); ++i) out.atoms[i] = ids.count(n.atoms[i].id) != 0;
      if (labelled(n) && labelled(other)) {
        std::unordered_map<std::string, const Segment*> by_label;
        for (std::size_t j = 0; j < other.segments.size(); ++j) by_label.emplace(other.segment_labels[j], &other.segments[j]);
        for (std::size_t i = 0; i < n.segments.size(); ++i)
          if (auto it = by_label.find(n.segment_labels[i]); it != by_label.end() && same_segment(n.segments[i], *it->second, tol))
            out.segments[i] = IntervalSet::full();
      } else {
        for (std::size_t i = 0; i < n.segments.size(); ++i) {
          std::vector<std::pair<double, double>> parts;
          for (const auto& t : other.segments)
            if (auto ov = collinear_overlap(n.segments[i], t, tol)) parts.push_back(*ov);
          out.segments[i] = IntervalSet(std::move(parts));
        }
      }
      break;
    }
    case SetExpr::Kind::unite:
      for (const auto& c : d.children) {
        NodeSet part = evaluate(sys, node, c, tol);
        for (std::size_t i = 0; i < out.atoms.size(); ++i) out.atoms[i] = out.atoms[i] || part.atoms[i];
        for (std::size_t i = 0; i < out.segments.size(); ++i) out.segments[i] = out.segments[i].unite(part.segments[i]);
      }
      break;
    case SetExpr::Kind::intersect:
    case SetExpr::Kind::subtract: {
      NodeSet a = evaluate(sys, node, d.children[0], tol);
      NodeSet b = evaluate(sys, node, d.children[1], tol);
      const bool meet = d.kind == SetExpr::Kind::intersect;
      for (std::size_t i = 0; i < out.atoms.size(); ++i) out.atoms[i] = meet ? (a.atoms[i] && b.atoms[i]) : (a.atoms[i] && !b.atoms[i]);
      for (std::size_t i = 0; i < out.segments.size(); ++i)
        out.segments[i] = meet ? a.segments[i].intersect(b.segments[i]) : a.segments[i].subtract(b.segments[i]);
      break;
    }
  }
  return out;
}

double node_measure(const MeasureSpaceNode& n, const NodeSet& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < n.atoms.size(); ++i)
    if (s.atoms[i]) m += n.atoms[i].weight;
  for (std::size_t i = 0; i < n.segments.size(); ++i) m += n.segments[i].length() * s.segments[i].length();
  return m;
}

namespace {

// Empty string when every generator leaf names a subset of X.
std::string leaf_problem(const InductiveMeasureSystem& sys, std::size_t top, const SetExpr& e, double tol) {
  const auto& d = e.data();
  const auto& t = sys.node(top);
  switch (d.kind) {
    case SetExpr::Kind::atoms: {
      std::unordered_set<std::string> ids;
      for (const auto& a : t.atoms) ids.insert(a.id);
      for (const auto& id : d.names)
        if (!ids.count(id)) return "atom '" + id + "' is not a point of X";
      return {};
    }
    case SetExpr::Kind::branches: {
      std::unordered_set<std::string> labels(t.segment_labels.begin(), t.segment_labels.end());
      for (const auto& l : d.names)
        if (!labels.count(l)) return "branch '" + l + "' is not part of X";
      return {};
    }
    case SetExpr::Kind::piece: {
      double covered = 0.0;
      for (const auto& s : t.segments)
        if (auto ov = collinear_overlap(d.seg, s, tol)) covered += (ov->second - ov->first);
      if (std::abs(1.0 - covered) * d.seg.length() > tol * (1.0 + d.seg.length()))
        return "piece " + e.describe() + " leaves X";
      return {};
    }
    case SetExpr::Kind::carrier:
      if (!sys.index->contains(*d.names.begin())) throw LookupError("unknown node '" + *d.names.begin() + "'");
      return {};
    default:
      for (const auto& c : d.children)
        if (auto p = leaf_problem(sys, top, c, tol); !p.empty()) return p;
      return {};
  }
}

bool is_null(const MeasureSpaceNode& n, const NodeSet& s, double tol) {
  if (std::any_of(s.atoms.begin(), s.atoms.end(), [](bool b) { return b; })) return false;
  return node_measure(n, s) <= tol;
}

}  // namespace

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::in_omega: return "in-omega";
    case Membership::in_omega_tilde_only: return "in-omega-tilde-only";
    default: return "not-measurable";
  }
}

namespace {

NodeSet minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out{a.atoms, std::vector<IntervalSet>(a.segments.size())};
  for (std::size_t i = 0; i < a.atoms.size(); ++i) out.atoms[i] = a.atoms[i] && !b.atoms[i];
  for (std::size_t i = 0; i < a.segments.size(); ++i) out.segments[i] = a.segments[i].subtract(b.segments[i]);
  return out;
}

// Membership without locating a containing node: below a top element every
// subset of X measurable at the top is already a member.
std::optional<Classification> classify_leaves(const InductiveMeasureSystem& sys, const LimitSet& a, double tol) {
  const std::size_t top = require_top(sys);
  if (auto p = leaf_problem(sys, top, a.expr, tol); !p.empty()) return Classification{Membership::not_measurable, std::nullopt, p};
  if (a.tail) return Classification{Membership::in_omega_tilde_only, std::nullopt, a.tail->description};
  return std::nullopt;
}

}  // namespace

Classification is_in_omega_tilde(const InductiveMeasureSystem& sys, const LimitSet& a, double tol) {
  if (auto c = classify_leaves(sys, a, tol)) return *c;
  const std::size_t top = require_top(sys);
  const auto& tn = sys.node(top);
  const NodeSet at_top = evaluate(sys, top, a.expr, tol);
  for (std::size_t l = 0; l < sys.index->size(); ++l) {
    NodeSet rest = minus(at_top, evaluate(sys, top, SetExpr::carrier(sys.index->name(l)), tol));
    if (is_null(tn, rest, tol)) return {Membership::in_omega, l, "contained in " + sys.index->name(l)};
  }
  throw ConsistencyAlarm("set not contained in the top node");
}

double limit_measure(const InductiveMeasureSystem& sys, const LimitSet& delta, double tol) {
  Classification c = is_in_omega_tilde(sys, delta, tol);
  if (c.membership != Membership::in_omega)
    throw ClassificationError(std::string("wrong-classification: set is ") + membership_name(c.membership));
  const std::size_t l = *c.containing_node;
  const std::size_t top = require_top(sys);
  const double at_l = node_measure(sys.node(l), evaluate(sys, l, delta.expr, tol));
  const double at_top = node_measure(sys.node(top), evaluate(sys, top, delta.expr, tol));
  if (std::abs(at_l - at_top) > tol * (1.0 + at_top))
    throw ConsistencyAlarm("measure of a set depends on the containing node");
  return at_l;
}

std::vector<double> trace_net(const InductiveMeasureSystem& sys, const SetExpr& a, double tol) {
  std::vector<double> out(sys.index->size());
  parallel_for(out.size(), [&](std::size_t l) { out[l] = node_measure(sys.node(l), evaluate(sys, l, a, tol)); });
  return out;
}

ExtendedValue extended_measure(const InductiveMeasureSystem& sys, const LimitSet& a, double tol) {
  if (auto c = classify_leaves(sys, a, tol); c && c->membership == Membership::not_measurable)
    throw ClassificationError("set is not in the extended sigma-algebra: " + c->reason);
  // The net lambda -> mu_lambda(A cap X_lambda) is nondecreasing, so its supremum is the top value.
  const std::size_t top = require_top(sys);
  ExtendedValue v;
  v.value = node_measure(sys.node(top), evaluate(sys, top, a.expr, tol));
  if (a.tail) {
    v.growth_ratio = a.tail->ratio;
    if (a.tail->ratio >= 1.0 && a.tail->next_increment > 0.0) {
      v.infinite = true;
      v.value = std::numeric_limits<double>::infinity();
      v.justification = "per-level increment grows geometrically with ratio " + std::to_string(a.tail->ratio);
    } else if (a.tail->ratio < 1.0) {
      v.value += a.tail->next_increment / (1.0 - a.tail->ratio);
      v.justification = "geometric tail with ratio " + std::to_string(a.tail->ratio);
    }
  }
  return v;
}

Checked<AdditivityCertificate> check_local_sigma_additivity(const InductiveMeasureSystem& sys, std::size_t node,
                                                            const std::vector<SetExpr>& family, double tol) {
  const std::size_t top = require_top(sys);
  const auto& n = sys.node(node);
  std::vector<NodeSet> parts;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (auto p = leaf_problem(sys, top, family[i], tol); !p.empty()) throw PreconditionError("set " + std::to_string(i) + ": " + p);
    NodeSet outside = evaluate(sys, top, SetExpr::subtract(family[i], SetExpr::carrier(sys.index->name(node))), tol);
    if (!is_null(sys.node(top), outside, tol))
      throw PreconditionError("set " + std::to_string(i) + " is not inside node " + sys.index->name(node));
    parts.push_back(evaluate(sys, node, family[i], tol));
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      NodeSet meet{std::vector<bool>(n.atoms.size()), std::vector<IntervalSet>(n.segments.size())};
      for (std::size_t k = 0; k < n.atoms.size(); ++k) meet.atoms[k] = parts[i].atoms[k] && parts[j].atoms[k];
      for (std::size_t k = 0; k < n.segments.size(); ++k) meet.segments[k] = parts[i].segments[k].intersect(parts[j].segments[k]);
      if (!is_null(n, meet, tol))
        throw PreconditionError("family members " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  AdditivityCertificate cert{0.0, 0.0};
  for (const auto& p : parts) cert.sum += node_measure(n, p);
  cert.union_measure = node_measure(n, evaluate(sys, node, SetExpr::unite(family), tol));
  if (std::abs(cert.union_measure - cert.sum) > 1e-12 * (1.0 + cert.sum))
    return Violation{"sigma-additivity", "measure of the union differs from the sum", {sys.index->name(node)},
                     std::abs(cert.union_measure - cert.sum)};
  return cert;
}

// ---- discretized L^2 ----

Eigen::VectorXd L2Carrier::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) w(static_cast<Eigen::Index>(i)) = basis[i].weight;
  return w;
}

L2Carrier discretize_l2(const MeasureSpaceNode& node, int s) {
  if (!node.segments.empty() && s < 1) throw MalformedInput("samples per segment must be at least 1");
  L2Carrier c;
  for (std::size_t i = 0; i < node.atoms.size(); ++i) {
    CarrierPoint p{i, -1, Complex{}, node.atoms[i].weight, node.atoms[i].id};
    (p.weight > 0.0 ? c.basis : c.null).push_back(p);
  }
  for (std::size_t i = 0; i < node.segments.size(); ++i) {
    const auto& g = node.segments[i];
    const double len = g.length();
    if (len == 0.0) throw DegenerateCarrier("zero-length segment " + std::to_string(i));
    const std::string base = labelled(node) ? node.segment_labels[i] : "s" + std::to_string(i);
    for (int j = 0; j < s; ++j)
      c.basis.push_back({node.atoms.size() + i, j, g.at((j + 0.5) / s), len / s, base + "#" + std::to_string(j)});
  }
  return c;
}

L2System discretize_l2(std::shared_ptr<const InductiveMeasureSystem> sys, int s, double tol) {
  L2System out;
  out.measure = sys;
  out.samples = s;
  const DirectedSet& ix = *sys->index;
  std::vector<Eigen::Index> dims;
  for (std::size_t l = 0; l < ix.size(); ++l) {
    out.carriers.push_back(discretize_l2(sys->node(l), s));
    dims.push_back(static_cast<Eigen::Index>(out.carriers.back().dim()));
  }
  auto h = std::make_shared<InductiveHilbertSystem>(sys->index, dims);
  for (std::size_t l = 0; l < ix.size(); ++l) {
    for (std::size_t v : ix.up_set(l)) {
      if (v == l) continue;
      auto w = inclusion_witness(*sys, l, v, tol);
      std::map<std::pair<std::size_t, int>, Eigen::Index> slot;
      const auto& cv = out.carriers[v];
      for (std::size_t k = 0; k < cv.basis.size(); ++k) slot[{cv.basis[k].cell, cv.basis[k].sample}] = static_cast<Eigen::Index>(k);
      Matrix j = Matrix::Zero(dims[v], dims[l]);
      const auto& cl = out.carriers[l];
      for (std::size_t k = 0; k < cl.basis.size(); ++k) {
        std::size_t target = w.at(cl.basis[k].cell);
        auto it = slot.find({target, cl.basis[k].sample});
        if (target == kNoCell || it == slot.end())
          throw PreconditionError("no inclusion witness for " + cl.basis[k].key + " from " + ix.name(l) + " into " + ix.name(v));
        j(it->second, static_cast<Eigen::Index>(k)) = 1.0;
      }
      h->set_embedding(l, v, std::move(j));
    }
  }
  out.hilbert = h;
  return out;
}

}  // namespace loch
