#include <cstdlib>
#include <iostream>
#include <string>

#include "loch/kernels.hpp"
#include "loch/suite.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 42;
  std::cout << "acceptance suite, seed " << seed << ", isa " << loch::kernels::isa_name(loch::kernels::active_isa())
            << "\n";
  int failed = 0;
  loch::suite::run(seed, {}, [&](const loch::suite::CriterionResult& r) {
    if (!r.pass) ++failed;
    std::cout << loch::suite::format_line(r) << std::endl;
  });
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
