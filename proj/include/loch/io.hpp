#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "loch/common.hpp"
#include "loch/hata.hpp"
#include "loch/hilbert.hpp"
#include "loch/measure.hpp"
#include "loch/operator.hpp"
#include "loch/order.hpp"
#include "loch/spectral.hpp"

namespace loch::io {

using Json = nlohmann::ordered_json;

// Serializes with every double printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);
Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json violation_to_json(const Violation& v);

struct IndexData {
  std::shared_ptr<const DirectedSet> index;
  ChainWitness chain;  // empty when absent
};
Json index_to_json(const DirectedSet& ds, const ChainWitness& chain = {});
// Validates the order; a Violation is returned for non-directed input.
Checked<IndexData> index_from_json(const Json& j);

Json measure_to_json(const InductiveMeasureSystem& sys, const ChainWitness& chain = {});
struct MeasureData {
  std::shared_ptr<InductiveMeasureSystem> system;
  ChainWitness chain;
};
Checked<MeasureData> measure_from_json(const Json& j);

Json hilbert_to_json(const InductiveHilbertSystem& sys, const ChainWitness& chain = {});
struct HilbertData {
  SystemPtr system;
  ChainWitness chain;
};
// Builds the system without validating isometries (see validate_hilbert_system).
Checked<HilbertData> hilbert_from_json(const Json& j);

struct OperatorData {
  SystemPtr domain;
  SystemPtr codomain;
  ChainWitness chain;
  std::vector<Matrix> blocks;
};
Json operator_to_json(const CoherentOperator& t, const ChainWitness& chain = {});
// "system" (and "codomain") may be inline objects or paths relative to base_dir;
// `system_override` replaces the domain when given.
Checked<OperatorData> operator_from_json(const Json& j, const std::filesystem::path& base_dir,
                                         const Json* system_override = nullptr);

Json model_to_json(const MultiplicityModel& m, const CoherentOperator& n, const ChainWitness& chain);
struct ModelVerification {
  double max_residual = 0.0;
  double max_unitarity = 0.0;
  double coherence_residual = 0.0;
  bool bookkeeping_ok = true;
  std::optional<Violation> violation;
};
ModelVerification verify_model(const Json& model, const Tolerances& tol);

std::string spectrum_csv(const SpectrumSet& s, const DirectedSet& ix);

}  // namespace loch::io
