#include "fockgauge/cli/commands.hpp"
#include "fockgauge/cli/csv.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fockgauge;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> v;
  for (std::string w; in >> w;) v.push_back(w);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fockgauge_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("single dist for one particle per source") {
  const auto r = call(split("single dist --nalpha 1 --nbeta 1"));
  CHECK(r.code == 0);
  CHECK(r.out == "m1,m2,prob\n0,2,0.5\n1,1,0\n2,0,0.5\n");
  const auto manifest = nlohmann::json::parse(r.err);
  CHECK(manifest["config"]["command"] == "single dist");
  CHECK(manifest.contains("version"));
  CHECK(manifest.contains("runtime_ms"));
  CHECK(manifest["notes"].is_array());
}

TEST_CASE("bell qmax for two particles") {
  const auto r = call(split("bell qmax --n 2"));
  REQUIRE(r.code == 0);
  const auto m = nlohmann::json::parse(r.err);
  CHECK(std::abs(m["summary"]["xi_star"].get<double>() - 0.39) <= 0.01);
  CHECK(std::abs(m["summary"]["q_star"].get<double>() - 2.41) <= 0.01);
}

TEST_CASE("po slice with odd m2 has a central dip") {
  const auto r = call(split("po slice --nalpha 100 --nbeta 100 --m1 17 --m2 83"));
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::vector<double> p;
  while (std::getline(in, line)) p.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  REQUIRE(p.size() == 101);
  CHECK(p[50] < p[49]);
  CHECK(p[50] < p[51]);
}

TEST_CASE("exit codes") {
  CHECK(call(split("single dist --nalpha 1")).code == 2);
  CHECK(call(split("single nonsense")).code == 2);
  CHECK(call(split("single dist --nalpha 1 --nbeta x")).code == 2);
  const auto bad = call(split("single dist --nalpha -1 --nbeta 1"));
  CHECK(bad.code == 1);
  CHECK(bad.err.find("negative source population") != std::string::npos);
  CHECK(call(split("po slice --nalpha 2 --nbeta 2 --m1 3 --m2 3")).code == 1);
  CHECK(call(split("--help")).code == 0);
}

TEST_CASE("json output") {
  const auto r = call(split("single dist --nalpha 1 --nbeta 0 --format json"));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["columns"] == nlohmann::json::array({"m1", "m2", "prob"}));
  CHECK(j["rows"].size() == 2);
}

TEST_CASE("csv formatting") {
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(cli::format_double(-0.0) == "0");
  CHECK(cli::format_double(1e-300) == "1e-300");
  cli::Table t({"a", "b"});
  t.add({std::int64_t{1}, std::string("x,y")});
  std::ostringstream s;
  cli::write_csv(s, t);
  CHECK(s.str() == "a,b\n1,\"x,y\"\n");
}

TEST_CASE("replaying a manifest reproduces the artifact byte for byte") {
  for (const std::string args : {"po field --m1 17 --m2 23 --grid 16", "emergence run --m 40 --seed 9",
                                 "ext losses --n 40 --m1 3 --m2 7 --transmission 0.95"}) {
    const auto first = scratch("first.csv");
    const auto second = scratch("second.csv");
    auto a = split(args);
    a.push_back("--out");
    a.push_back(first.string());
    REQUIRE(call(a).code == 0);
    const auto manifest = first.string() + ".manifest.json";
    REQUIRE(std::filesystem::exists(manifest));
    REQUIRE(call({"replay", manifest, "--out", second.string()}).code == 0);
    CHECK(slurp(first) == slurp(second));
    CHECK(!slurp(first).empty());
  }
}

TEST_CASE("golden artifacts") {
  const char* dir = std::getenv("FOCKGAUGE_GOLDEN_DIR");
  if (!dir) {
    MESSAGE("FOCKGAUGE_GOLDEN_DIR not set; golden comparison skipped");
    return;
  }
  const std::filesystem::path root(dir);
  std::ifstream recipes(root / "recipes.txt");
  REQUIRE(recipes.good());
  int checked = 0;
  for (std::string line; std::getline(recipes, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    REQUIRE(colon != std::string::npos);
    const std::string name = line.substr(0, colon);
    CAPTURE(name);
    const auto r = call(split(line.substr(colon + 1)));
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(root / (name + ".csv")));
    ++checked;
  }
  CHECK(checked > 0);
}

}
