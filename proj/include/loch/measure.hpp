#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loch/common.hpp"
#include "loch/geometry.hpp"
#include "loch/linalg.hpp"
#include "loch/order.hpp"

namespace loch {

struct Atom {
  std::string id;
  double weight;
};

// Carrier of one node: atoms with weights and/or segments with length measure.
struct MeasureSpaceNode {
  std::vector<Atom> atoms;
  std::vector<Segment> segments;
  std::vector<std::string> segment_labels;  // empty or one per segment
  bool allow_zero_mass = false;

  std::size_t cell_count() const { return atoms.size() + segments.size(); }
  double total() const;
  bool atomic() const { return segments.empty(); }
};

struct InductiveMeasureSystem {
  std::shared_ptr<const DirectedSet> index;
  std::vector<MeasureSpaceNode> nodes;  // aligned with index->elements()
  // Optional explicit witnesses: cell i of lambda maps to cell w[i] of nu
  // (atoms first, then segments). Missing pairs are derived by id, label or geometry.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> witnesses;

  const MeasureSpaceNode& node(std::size_t i) const { return nodes.at(i); }
};

inline constexpr std::size_t kNoCell = static_cast<std::size_t>(-1);

// Cell map for lambda <= nu; unmatched cells are kNoCell.
std::vector<std::size_t> inclusion_witness(const InductiveMeasureSystem& sys, std::size_t lambda, std::size_t nu,
                                           double tol = 1e-12);

struct SystemCertificate {
  std::size_t pairs_checked = 0;
  std::vector<std::pair<std::size_t, std::size_t>> equivalent_pairs;
};
Checked<SystemCertificate> validate_system(const InductiveMeasureSystem& sys, double tol = 1e-12);

// Intensional set description: a boolean tree over generator sets, evaluated per node.
class SetExpr {
 public:
  enum class Kind { empty, full, atoms, piece, branches, carrier, unite, intersect, subtract };

  static SetExpr empty();
  static SetExpr full();
  static SetExpr atoms(std::vector<std::string> ids);
  static SetExpr piece(Segment s);
  static SetExpr branches(std::vector<std::string> labels);
  static SetExpr carrier(std::string node);
  static SetExpr unite(std::vector<SetExpr> parts);
  static SetExpr intersect(SetExpr a, SetExpr b);
  static SetExpr subtract(SetExpr a, SetExpr b);

  Kind kind() const { return data_->kind; }
  std::string describe() const;

  struct Data {
    Kind kind;
    std::set<std::string> names;
    Segment seg{};
    std::vector<SetExpr> children;
  };
  const Data& data() const { return *data_; }

 private:
  explicit SetExpr(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

// Trace of a set on one node's carrier.
struct NodeSet {
  std::vector<bool> atoms;
  std::vector<IntervalSet> segments;
};
NodeSet evaluate(const InductiveMeasureSystem& sys, std::size_t node, const SetExpr& e, double tol = 1e-12);
double node_measure(const MeasureSpaceNode& n, const NodeSet& s);

// Tail for sets that are only limits: the increment beyond the truncation and its geometric ratio.
struct AnalyticTail {
  double next_increment;
  double ratio;
  std::string description;
};

struct LimitSet {
  SetExpr expr;
  std::optional<AnalyticTail> tail;
};

enum class Membership { in_omega, in_omega_tilde_only, not_measurable };
struct Classification {
  Membership membership;
  std::optional<std::size_t> containing_node;
  std::string reason;
};
const char* membership_name(Membership m);

Classification is_in_omega_tilde(const InductiveMeasureSystem& sys, const LimitSet& a, double tol = 1e-12);
double limit_measure(const InductiveMeasureSystem& sys, const LimitSet& delta, double tol = 1e-12);

struct ExtendedValue {
  double value = 0.0;
  bool infinite = false;
  std::optional<double> growth_ratio;
  std::string justification;
};
ExtendedValue extended_measure(const InductiveMeasureSystem& sys, const LimitSet& a, double tol = 1e-12);
// mu_lambda(A cap X_lambda) for every node, in index order.
std::vector<double> trace_net(const InductiveMeasureSystem& sys, const SetExpr& a, double tol = 1e-12);

struct AdditivityCertificate {
  double union_measure;
  double sum;
};
Checked<AdditivityCertificate> check_local_sigma_additivity(const InductiveMeasureSystem& sys, std::size_t node,
                                                            const std::vector<SetExpr>& family,
                                                            double tol = 1e-12);

// Orthonormal coordinates of a discretized L^2 carrier.
struct CarrierPoint {
  std::size_t cell;    // atom index, or atoms.size() + segment index
  int sample;          // -1 for atoms
  Complex location;    // midpoint for segment samples, 0 for atoms
  double weight;
  std::string key;     // atom id, or "<segment label or index>#<sample>"
};

struct L2Carrier {
  std::vector<CarrierPoint> basis;  // positive weight
  std::vector<CarrierPoint> null;   // zero-mass atoms
  std::size_t dim() const { return basis.size(); }
  Eigen::VectorXd weights() const;
};

L2Carrier discretize_l2(const MeasureSpaceNode& node, int s);

class InductiveHilbertSystem;
struct L2System {
  std::shared_ptr<const InductiveMeasureSystem> measure;
  int samples;
  std::vector<L2Carrier> carriers;
  std::shared_ptr<const InductiveHilbertSystem> hilbert;
};
// Zero-extension embeddings along the inclusion witnesses.
L2System discretize_l2(std::shared_ptr<const InductiveMeasureSystem> sys, int s, double tol = 1e-12);

}  // namespace loch
