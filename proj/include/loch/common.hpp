#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace loch {

using Complex = std::complex<double>;

struct Tolerances {
  double endpoint = 1e-12;
  double representing = 1e-10;
  double coherence = 1e-10;
  double cluster = 1e-8;
  double fuglede_putnam = 1e-9;
  double model_residual = 1e-9;
  double unitarity = 1e-12;
};

// Defaults, with LOCH_TOLERANCE overriding the representing/coherence value.
Tolerances default_tolerances();

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct MalformedInput : Error {
  explicit MalformedInput(const std::string& w) : Error("malformed-input", w) {}
};
struct MalformedWitness : Error {
  explicit MalformedWitness(const std::string& w) : Error("malformed-witness", w) {}
};
struct LookupError : Error {
  explicit LookupError(const std::string& w) : Error("lookup", w) {}
};
struct OrderError : Error {
  explicit OrderError(const std::string& w) : Error("order", w) {}
};
struct InvalidParams : Error {
  explicit InvalidParams(const std::string& w) : Error("invalid-params", w) {}
};
struct InvalidIndex : Error {
  explicit InvalidIndex(const std::string& w) : Error("invalid-index", w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error("precondition", w) {}
};
struct ClassificationError : Error {
  explicit ClassificationError(const std::string& w) : Error("classification", w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};
struct IncompatibleError : Error {
  explicit IncompatibleError(const std::string& w) : Error("incompatible", w) {}
};
struct DegenerateCarrier : Error {
  explicit DegenerateCarrier(const std::string& w) : Error("degenerate-carrier", w) {}
};
struct ConsistencyAlarm : Error {
  explicit ConsistencyAlarm(const std::string& w) : Error("internal-consistency", w) {}
};

// A failed check: which axiom, a message, the identifiers involved and a residual if numeric.
struct Violation {
  std::string axiom;
  std::string message;
  std::vector<std::string> witness;
  double residual = 0.0;
};

template <class T>
class Checked {
 public:
  Checked(T value) : v_(std::move(value)) {}
  Checked(Violation v) : v_(std::move(v)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }
  const T& value() const {
    if (!ok()) throw PreconditionError("no value: " + violation().axiom + " " + violation().message);
    return std::get<0>(v_);
  }
  T& value() {
    if (!ok()) throw PreconditionError("no value: " + violation().axiom + " " + violation().message);
    return std::get<0>(v_);
  }
  const Violation& violation() const { return std::get<1>(v_); }

 private:
  std::variant<T, Violation> v_;
};

// Parses "0.3+0.4i", "-1-2i", "2", "3i".
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

}  // namespace loch
