#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace loch::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  std::string detail;
};

// Runs the acceptance criteria (all of them when `only` is empty), reporting each result as it finishes.
std::vector<CriterionResult> run(std::uint64_t seed, const std::vector<int>& only = {},
                                 const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);

}  // namespace loch::suite
