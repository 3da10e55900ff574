#include "loch/hata.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "loch/kernels.hpp"

namespace loch {

void IfsParams::validate() const {
  const double a = std::abs(c), b = std::abs(1.0 - c);
  if (!std::isfinite(a) || !(a > 0.0 && a < 1.0)) throw InvalidParams("need 0 < |c| < 1, got c = " + format_complex(c));
  if (!(b > 0.0 && b < 1.0)) throw InvalidParams("need 0 < |1-c| < 1, got c = " + format_complex(c));
  if (c.imag() == 0.0) throw InvalidParams("c must not be real");
}

void validate_word(const Word& w) {
  for (char ch : w)
    if (ch != '1' && ch != '2') throw MalformedInput("word letters must be 1 or 2, got '" + w + "'");
}

std::vector<Word> words_of_length(int m) {
  if (m < 0 || m > 24) throw MalformedInput("word length out of range");
  std::vector<Word> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
    Word w(static_cast<std::size_t>(m), '1');
    for (int i = 0; i < m; ++i)
      if ((code >> (m - 1 - i)) & 1u) w[static_cast<std::size_t>(i)] = '2';
    out.push_back(std::move(w));
  }
  return out;
}

Complex apply_map(int j, Complex z, const IfsParams& p) {
  const double r2 = p.abs2();
  if (j == 1) return p.c * std::conj(z);
  if (j == 2) return (1.0 - r2) * std::conj(z) + r2;
  throw MalformedInput("map index must be 1 or 2");
}

Complex compose_word(const Word& w, Complex z, const IfsParams& p) {
  validate_word(w);
  for (auto it = w.rbegin(); it != w.rend(); ++it) z = apply_map(*it - '0', z, p);
  return z;
}

WordAffine word_affine(const Word& w, const IfsParams& p) {
  validate_word(w);
  const double r2 = p.abs2();
  WordAffine g{1.0, 0.0, false};
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const Complex a = *it == '1' ? p.c : Complex(1.0 - r2);
    const Complex b = *it == '1' ? Complex(0.0) : Complex(r2);
    g = {a * std::conj(g.a), a * std::conj(g.b) + b, !g.conjugates};
  }
  return g;
}

std::vector<Complex> Approximation::sample(std::size_t i, int s) const {
  if (s < 2) throw MalformedInput("need at least 2 samples per segment");
  const auto& g = segments.at(i);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) pts.push_back(g.at(static_cast<double>(j) / (s - 1)));
  return pts;
}

namespace {

struct SoA {
  std::vector<double> sr, si, er, ei;
};

SoA to_soa(const std::vector<Segment>& segs) {
  SoA a;
  for (const auto& g : segs) {
    a.sr.push_back(g.start.real());
    a.si.push_back(g.start.imag());
    a.er.push_back(g.end.real());
    a.ei.push_back(g.end.imag());
  }
  return a;
}

// Appends f(segs) for f(z) = a conj(z) + b.
void push_image(const SoA& in, Complex a, Complex b, std::vector<Segment>& out) {
  const std::size_t n = in.sr.size();
  SoA o{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  kernels::conj_affine(in.sr.data(), in.si.data(), n, a, b, o.sr.data(), o.si.data());
  kernels::conj_affine(in.er.data(), in.ei.data(), n, a, b, o.er.data(), o.ei.data());
  for (std::size_t i = 0; i < n; ++i) out.push_back({{o.sr[i], o.si[i]}, {o.er[i], o.ei[i]}});
}

}  // namespace

std::vector<Segment> apply_ifs(const std::vector<Segment>& segs, const IfsParams& p) {
  const double r2 = p.abs2();
  SoA in = to_soa(segs);
  std::vector<Segment> out;
  out.reserve(2 * segs.size());
  push_image(in, p.c, 0.0, out);
  push_image(in, 1.0 - r2, r2, out);
  return out;
}

Approximation generate_approximation(const IfsParams& p, int n, int samples_per_segment) {
  p.validate();
  if (n < 0 || n > 24) throw MalformedInput("level must be in [0, 24]");
  if (samples_per_segment < 2) throw MalformedInput("need at least 2 samples per segment");
  Approximation a;
  a.params = p;
  a.samples = samples_per_segment;
  a.segments = {{0.0, p.c}, {0.0, 1.0}};
  a.words = {"", ""};
  a.seeds = {Seed::x01, Seed::x00};
  for (int m = 1; m <= n; ++m) {
    auto next = apply_ifs(a.segments, p);
    std::vector<Word> words;
    std::vector<Seed> seeds;
    for (char letter : {'1', '2'})
      for (std::size_t i = 0; i < a.segments.size(); ++i) {
        words.push_back(letter + a.words[i]);
        seeds.push_back(a.seeds[i]);
      }
    a.segments = std::move(next);
    a.words = std::move(words);
    a.seeds = std::move(seeds);
  }
  a.level = n;
  return a;
}

double total_length(const Approximation& a) {
  double s = 0.0;
  for (const auto& g : a.segments) s += g.length();
  return s;
}

std::vector<Branch> enumerate_branches(const IfsParams& p, int n) {
  p.validate();
  if (n < 0 || n > 20) throw MalformedInput("level must be in [0, 20]");
  std::vector<Branch> out;
  out.push_back({{0.0, 1.0}, "X00", "", 0.0});
  out.push_back({{0.0, p.c}, "X01", "", 0.0});
  for (int k = 0; k < n; ++k)
    for (const auto& w : words_of_length(k)) {
      Word w2 = w + "2";
      WordAffine f = word_affine(w2, p);
      auto apply = [&](Complex z) { return f.a * (f.conjugates ? std::conj(z) : z) + f.b; };
      Complex s = apply(0.0);
      out.push_back({{s, apply(p.c)}, w2, w2, s});
    }
  return out;
}

double branch_measure(const std::vector<Branch>& branches) {
  double s = 0.0;
  for (const auto& b : branches) s += b.segment.length();
  return s;
}

double growth_ratio(const IfsParams& p) { return std::abs(p.c) + 1.0 - p.abs2(); }

double level_increment(const IfsParams& p, int k) {
  return std::abs(p.c) * (1.0 - p.abs2()) * std::pow(growth_ratio(p), k);
}

Checked<ConnectivityCertificate> check_connectivity(const Approximation& a, double tol) {
  const std::size_t n = a.segments.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  struct End {
    Complex z;
    std::size_t seg;
  };
  std::vector<End> ends;
  for (std::size_t i = 0; i < n; ++i) {
    ends.push_back({a.segments[i].start, i});
    ends.push_back({a.segments[i].end, i});
  }
  std::sort(ends.begin(), ends.end(), [](const End& x, const End& y) { return x.z.real() < y.z.real(); });
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i + 1; j < ends.size() && ends[j].z.real() - ends[i].z.real() <= tol; ++j)
      if (std::abs(ends[i].z - ends[j].z) <= tol) parent[find(ends[i].seg)] = find(ends[j].seg);
  ConnectivityCertificate cert;
  cert.segments = n;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++cert.components;
  if (cert.components != 1) {
    std::size_t stray = 0;
    while (find(stray) == find(0)) ++stray;
    return Violation{"connectivity", "segment graph has " + std::to_string(cert.components) + " components",
                     {"segment 0", "segment " + std::to_string(stray)}, 0.0};
  }
  const Complex junction = a.params.abs2();
  auto images = apply_ifs(a.segments, a.params);
  auto touches = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (point_segment_distance(junction, images[i]) <= tol) return true;
    return false;
  };
  if (!touches(0, n) || !touches(n, 2 * n))
    return Violation{"junction", "|c|^2 is not common to f_1(X) and f_2(X)", {format_complex(junction)}, 0.0};
  cert.junction = junction;
  return cert;
}

double max_inclusion_gap(const std::vector<Segment>& inner, const std::vector<Segment>& outer, int samples) {
  if (samples < 2) throw MalformedInput("need at least 2 samples per segment");
  std::vector<double> px, py;
  for (const auto& g : inner)
    for (int j = 0; j < samples; ++j) {
      Complex z = g.at(static_cast<double>(j) / (samples - 1));
      px.push_back(z.real());
      py.push_back(z.imag());
    }
  std::vector<double> ax, ay, dx, dy, inv;
  for (const auto& g : outer) {
    ax.push_back(g.start.real());
    ay.push_back(g.start.imag());
    dx.push_back(g.end.real() - g.start.real());
    dy.push_back(g.end.imag() - g.start.imag());
    inv.push_back(1.0 / (dx.back() * dx.back() + dy.back() * dy.back()));
  }
  kernels::SegmentSoA soa{ax.data(), ay.data(), dx.data(), dy.data(), inv.data(), outer.size()};
  std::vector<double> d(px.size());
  kernels::min_dist2(px.data(), py.data(), px.size(), soa, d.data());
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, v);
  return std::sqrt(worst);
}

std::vector<std::optional<std::size_t>> branch_parents(const std::vector<Branch>& b, double tol) {
  std::vector<std::optional<std::size_t>> out(b.size());
  for (std::size_t i = 1; i < b.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (point_segment_distance(b[i].start_node, b[j].segment) <= tol) {
        out[i] = j;
        break;
      }
  return out;
}

namespace {

// Branches other than [0,1] exclude their start node.
bool touching(const std::vector<Branch>& b, std::size_t i, std::size_t j, double tol) {
  auto attaches = [&](std::size_t x, std::size_t y) {
    if (point_segment_distance(b[x].start_node, b[y].segment) > tol) return false;
    return b[y].label == "X00" || std::abs(b[x].start_node - b[y].start_node) > tol;
  };
  return attaches(i, j) || attaches(j, i);
}

std::vector<std::uint32_t> adjacency_masks(const std::vector<Branch>& b, double tol) {
  std::vector<std::uint32_t> adj(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (i != j && touching(b, i, j, tol)) adj[i] |= std::uint32_t{1} << j;
  return adj;
}

bool mask_connected(std::uint32_t mask, const std::vector<std::uint32_t>& adj) {
  if (mask == 0) return false;
  std::uint32_t seen = mask & (~mask + 1), frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
    next &= mask & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

std::string union_name(std::uint32_t mask, const std::vector<Branch>& b) {
  std::string s;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (mask >> i & 1u) s += (s.empty() ? "" : "+") + b[i].label;
  return s;
}

MeasureSpaceNode node_from(const std::vector<Branch>& b, std::uint32_t mask) {
  MeasureSpaceNode n;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (mask >> i & 1u) {
      n.segments.push_back(b[i].segment);
      n.segment_labels.push_back(b[i].label);
    }
  return n;
}

std::uint32_t prefix_mask(int level) { return (std::uint32_t{1} << ((1u << level) + 1)) - 1; }

}  // namespace

bool branches_connected(const std::vector<Branch>& branches, const std::vector<std::size_t>& subset, double tol) {
  if (subset.empty()) return false;
  std::vector<bool> in(branches.size(), false), seen(branches.size(), false);
  for (auto i : subset) in.at(i) = true;
  std::vector<std::size_t> stack{subset.front()};
  seen[subset.front()] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    ++count;
    for (std::size_t y = 0; y < branches.size(); ++y)
      if (in[y] && !seen[y] && touching(branches, x, y, tol)) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  return count == subset.size();
}

HataVariant parse_variant(const std::string& s) {
  if (s == "linear") return HataVariant::linear;
  if (s == "branch-indexed") return HataVariant::branch_indexed;
  if (s == "branch-union") return HataVariant::branch_union;
  throw MalformedInput("unknown variant '" + s + "' (linear, branch-indexed, branch-union)");
}

const char* variant_name(HataVariant v) {
  switch (v) {
    case HataVariant::linear: return "linear";
    case HataVariant::branch_indexed: return "branch-indexed";
    default: return "branch-union";
  }
}

MeasureSpaceNode branch_union_node(const IfsParams& p, int depth, const std::vector<std::string>& labels) {
  if (depth < 0 || depth > 4) throw InvalidIndex("branch-union depth must be in [0, 4]");
  auto b = enumerate_branches(p, depth);
  std::uint32_t mask = 0;
  for (const auto& l : labels) {
    auto it = std::find_if(b.begin(), b.end(), [&](const Branch& x) { return x.label == l; });
    if (it == b.end()) throw InvalidIndex("no branch '" + l + "' at depth " + std::to_string(depth));
    mask |= std::uint32_t{1} << (it - b.begin());
  }
  if (!(mask & 1u)) throw InvalidIndex("a branch union must contain [0,1]");
  if (!mask_connected(mask, adjacency_masks(b, 1e-12))) throw InvalidIndex("branch union is not connected");
  return node_from(b, mask);
}

HataSystem build_inductive_system(HataVariant v, const IfsParams& p, int depth) {
  p.validate();
  if (depth < 0) throw InvalidIndex("depth must be nonnegative");
  HataSystem h{v, depth, depth, p, {}, {}};
  auto& sys = h.system;
  switch (v) {
    case HataVariant::linear: {
      if (depth > 16) throw InvalidIndex("linear depth capped at 16");
      std::vector<std::string> names;
      for (int m = 0; m <= depth; ++m) names.push_back(std::to_string(m));
      sys.index = std::make_shared<DirectedSet>(
          check_directed(names, [](std::size_t a, std::size_t b) { return a <= b; }).value());
      auto b = enumerate_branches(p, depth);
      for (int m = 0; m <= depth; ++m) sys.nodes.push_back(node_from(b, prefix_mask(m)));
      h.chain.chain = names;
      break;
    }
    case HataVariant::branch_indexed: {
      if (depth > 10) throw InvalidIndex("branch-indexed depth capped at 10");
      sys.index = std::make_shared<DirectedSet>(branch_index_order(depth, true).value());
      auto b = enumerate_branches(p, depth + 1);
      for (auto [n, k] : branch_index_pairs(depth, true)) {
        MeasureSpaceNode node;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < (std::size_t{1} << n) + 1; ++i) members.push_back(i);
        if (k > 0) members.push_back((std::size_t{1} << n) + static_cast<std::size_t>(k));
        for (auto i : members) {
          node.segments.push_back(b[i].segment);
          node.segment_labels.push_back(b[i].label);
        }
        sys.nodes.push_back(std::move(node));
      }
      for (int m = 0; m <= depth + 1; ++m) h.chain.chain.push_back(branch_index_name(m, 0));
      h.top_level = depth + 1;
      break;
    }
    case HataVariant::branch_union: {
      if (depth > 4) throw InvalidIndex("branch-union depth capped at 4");
      auto b = enumerate_branches(p, depth);
      auto adj = adjacency_masks(b, 1e-12);
      std::vector<std::uint32_t> masks;
      const std::uint32_t rest = static_cast<std::uint32_t>(b.size() - 1);
      for (std::uint32_t r = 0; r < (std::uint32_t{1} << rest); ++r) {
        std::uint32_t m = (r << 1) | 1u;
        if (mask_connected(m, adj)) masks.push_back(m);
      }
      std::stable_sort(masks.begin(), masks.end(),
                       [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) < std::popcount(y); });
      std::vector<std::string> names;
      for (auto m : masks) {
        names.push_back(union_name(m, b));
        sys.nodes.push_back(node_from(b, m));
      }
      auto leq = [&](std::size_t x, std::size_t y) { return (masks[x] & ~masks[y]) == 0; };
      sys.index = std::make_shared<DirectedSet>(DirectedSet::trusted(names, leq));
      for (int m = 0; m <= depth; ++m) h.chain.chain.push_back(union_name(prefix_mask(m), b));
      break;
    }
  }
  return h;
}

std::string render_svg(const Approximation& a, int samples, double stroke_width) {
  std::vector<std::vector<Complex>> lines;
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    auto pts = a.sample(i, samples);
    for (auto& z : pts) {
      z = {z.real(), -z.imag()};
      minx = std::min(minx, z.real());
      maxx = std::max(maxx, z.real());
      miny = std::min(miny, z.imag());
      maxy = std::max(maxy, z.imag());
    }
    lines.push_back(std::move(pts));
  }
  double w = maxx - minx, h = maxy - miny;
  const double padx = 0.05 * (w > 0 ? w : 1.0), pady = 0.05 * (h > 0 ? h : 1.0);
  minx -= padx;
  miny -= pady;
  w += 2 * padx;
  h += 2 * pady;
  std::ostringstream os;
  char buf[160];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.9g %.9g %.9g %.9g\" width=\"800\" height=\"%.0f\">\n",
                minx, miny, w, h, 800.0 * h / w);
  os << buf;
  std::snprintf(buf, sizeof buf, "<g fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"%.9g\" stroke-linecap=\"round\">\n",
                stroke_width);
  os << buf;
  for (const auto& pts : lines) {
    os << "<polyline points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s%.9g,%.9g", k ? " " : "", pts[k].real(), pts[k].imag());
      os << buf;
    }
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string branch_csv(const std::vector<Branch>& branches) {
  std::ostringstream os;
  os << "word,start_re,start_im,end_re,end_im,length\n";
  char buf[256];
  for (const auto& b : branches) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", b.label.c_str(), b.segment.start.real(),
                  b.segment.start.imag(), b.segment.end.real(), b.segment.end.imag(), b.segment.length());
    os << buf;
  }
  return os.str();
}

LimitSet hata_full_set(const HataSystem& h) {
  return {SetExpr::full(),
          AnalyticTail{level_increment(h.params, h.top_level), growth_ratio(h.params),
                       "all levels: total length grows by the factor |c| + 1 - |c|^2 per level"}};
}

LimitSet hata_branch_ray(const HataSystem& h, char letter, bool unbounded) {
  if (letter != '1' && letter != '2') throw MalformedInput("ray letter must be 1 or 2");
  std::vector<std::string> labels;
  for (int k = 0; k < h.top_level; ++k) labels.push_back(std::string(static_cast<std::size_t>(k), letter) + "2");
  LimitSet s{SetExpr::branches(labels), std::nullopt};
  if (unbounded) {
    const double r = letter == '1' ? std::abs(h.params.c) : 1.0 - h.params.abs2();
    s.tail = AnalyticTail{std::abs(h.params.c) * (1.0 - h.params.abs2()) * std::pow(r, h.top_level), r,
                          "one new branch per level along the ray"};
  }
  return s;
}

}  // namespace loch
