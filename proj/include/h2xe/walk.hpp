#pragma once

// Walk scripts: one frame per line, "dx dy dz" in camera-local metres,
// optionally followed by the 9 row-major entries of the new orientation.
// '#' starts a comment; blank lines are skipped.

#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2xe/linalg.hpp"

namespace h2xe {

struct WalkStep {
  Vec3 d{0.0, 0.0, 0.0};
  std::optional<Mat3> frame;  // unset: keep the current orientation
};

inline std::vector<WalkStep> parse_walk(std::istream& is) {
  std::vector<WalkStep> steps;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> vals;
    double v = 0.0;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof()) throw std::runtime_error("walk script line " + std::to_string(lineno) + ": not a number");
    if (vals.empty()) continue;
    if (vals.size() != 3 && vals.size() != 12)
      throw std::runtime_error("walk script line " + std::to_string(lineno) + ": expected 3 or 12 numbers, got " +
                               std::to_string(vals.size()));
    WalkStep s;
    s.d = {vals[0], vals[1], vals[2]};
    if (vals.size() == 12) {
      Mat3 f;
      for (std::size_t i = 0; i < 9; ++i) f.a[i] = vals[3 + i];
      s.frame = f;
    }
    steps.push_back(s);
  }
  return steps;
}

}  // namespace h2xe
