#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loch/common.hpp"
#include "loch/measure.hpp"
#include "loch/order.hpp"

namespace loch {

struct IfsParams {
  Complex c{0.3, 0.4};
  // Throws InvalidParams unless 0 < |c| < 1, 0 < |1 - c| < 1 and Im c != 0.
  void validate() const;
  double abs2() const { return std::norm(c); }
};

// Word over {1,2}, stored as characters; f_w = f_{w_1} o ... o f_{w_m}.
using Word = std::string;
void validate_word(const Word& w);
std::vector<Word> words_of_length(int m);  // lexicographic

Complex apply_map(int j, Complex z, const IfsParams& p);
Complex compose_word(const Word& w, Complex z, const IfsParams& p);
// Affine-conjugate coefficients: f_w(z) = a * (|w| odd ? conj(z) : z) + b.
struct WordAffine {
  Complex a;
  Complex b;
  bool conjugates;
};
WordAffine word_affine(const Word& w, const IfsParams& p);

enum class Seed { x00, x01 };  // [0,1] and c[0,1]

struct Approximation {
  int level = 0;
  IfsParams params;
  std::vector<Segment> segments;  // row order of the level recursion
  std::vector<Word> words;        // segment i = f_{words[i]}(seed i)
  std::vector<Seed> seeds;
  int samples = 2;
  // s points per segment, endpoints included.
  std::vector<Complex> sample(std::size_t i, int s) const;
  std::vector<Complex> sample(std::size_t i) const { return sample(i, samples); }
};

Approximation generate_approximation(const IfsParams& p, int n, int samples_per_segment = 2);
// F(X) = f_1(X) followed by f_2(X), segment by segment.
std::vector<Segment> apply_ifs(const std::vector<Segment>& segs, const IfsParams& p);
double total_length(const Approximation& a);

struct Branch {
  Segment segment;
  std::string label;  // "X00", "X01", or the word w2
  Word word;          // w2 for generated branches, empty for seeds
  Complex start_node;
};

std::vector<Branch> enumerate_branches(const IfsParams& p, int n);
double branch_measure(const std::vector<Branch>& branches);
// |c|(1-|c|^2)(|c|+1-|c|^2)^k, the length added when passing from level k to k+1.
double level_increment(const IfsParams& p, int k);
double growth_ratio(const IfsParams& p);

struct ConnectivityCertificate {
  std::size_t segments = 0;
  std::size_t components = 0;
  Complex junction;
};
Checked<ConnectivityCertificate> check_connectivity(const Approximation& a, double tol = 1e-12);

// Largest distance from sampled points of `inner` to the segments of `outer`.
double max_inclusion_gap(const std::vector<Segment>& inner, const std::vector<Segment>& outer, int samples);

// Parent of each branch: the first earlier branch passing through its start node.
std::vector<std::optional<std::size_t>> branch_parents(const std::vector<Branch>& branches, double tol = 1e-12);
// Connectivity of a branch subset by graph search over touching branches.
bool branches_connected(const std::vector<Branch>& branches, const std::vector<std::size_t>& subset,
                        double tol = 1e-12);

enum class HataVariant { linear, branch_indexed, branch_union };
HataVariant parse_variant(const std::string& s);
const char* variant_name(HataVariant v);

struct HataSystem {
  HataVariant variant;
  int depth;
  int top_level;  // the top node carries the level-top_level branches
  IfsParams params;
  InductiveMeasureSystem system;
  ChainWitness chain;
};

// Depth caps: linear any, branch-indexed <= 10, branch-union <= 4.
HataSystem build_inductive_system(HataVariant v, const IfsParams& p, int depth);
// Measure node for a union of depth-`depth` branches given by label; throws InvalidIndex
// unless the union is connected and contains [0,1].
MeasureSpaceNode branch_union_node(const IfsParams& p, int depth, const std::vector<std::string>& labels);

std::string render_svg(const Approximation& a, int samples_per_segment = 2, double stroke_width = 0.002);
std::string branch_csv(const std::vector<Branch>& branches);

// Limit-set families used to exercise the extended measure.
LimitSet hata_full_set(const HataSystem& h);
// One new branch per level along the words 1^k 2 (first = 1) or 2^k 2 (first = 2).
LimitSet hata_branch_ray(const HataSystem& h, char letter, bool unbounded);

}  // namespace loch
