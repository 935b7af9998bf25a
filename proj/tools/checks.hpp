#pragma once

#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;
};

/// Runs the ten acceptance criteria at desk scale. With `parallel` the
/// criteria run concurrently; outcomes are returned in criterion order.
std::vector<Outcome> run_all(bool parallel);

std::string format(const Outcome& o);

}  // namespace acceptance
