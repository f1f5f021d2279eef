#include "fockgauge/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace fockgauge::report;

TEST_SUITE("report") {

TEST_CASE("required entries are present and backed by the numbers") {
  const auto entries = build_report();
  std::set<std::string> ids;
  for (const auto& e : entries) {
    CHECK(ids.insert(e.id).second);
    CHECK(!e.printed.empty());
    CHECK(!e.adopted.empty());
    CHECK(!e.evidence.empty());
  }
  for (const auto& id : required_ids()) {
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const Discrepancy& e) { return e.id == id; });
    REQUIRE_MESSAGE(it != entries.end(), id);
    CHECK_MESSAGE(it->confirmed, id);
  }
  CHECK(required_ids().size() == 5);
}

TEST_CASE("markdown lists every entry") {
  const auto entries = build_report();
  const auto md = render_markdown(entries);
  for (const auto& e : entries) CHECK(md.find(e.id) != std::string::npos);
}

}
