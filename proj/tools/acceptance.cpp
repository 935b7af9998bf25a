#include <iostream>

#include "checks.hpp"

int main() {
  int failed = 0;
  for (const auto& o : acceptance::run_all(false)) {
    std::cout << acceptance::format(o) << "\n";
    failed += !o.pass;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
