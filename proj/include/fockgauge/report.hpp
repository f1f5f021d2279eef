#pragma once

// Misprints in the source formulas, each with evidence computed by the library.

#include <string>
#include <vector>

namespace fockgauge::report {

struct Discrepancy {
  std::string id;        // stable key, e.g. "single-splitter-operator-subscript"
  std::string location;  // where the printed form appears, in plain words
  std::string printed;
  std::string adopted;
  std::string evidence;  // numbers computed at report time
  bool confirmed = false;
};

/// Every entry recomputes its evidence; confirmed is true when the numbers back the adopted form.
std::vector<Discrepancy> build_report();

/// The five entries that must always be present.
std::vector<std::string> required_ids();

std::string render_markdown(const std::vector<Discrepancy>& entries);

} // namespace fockgauge::report
