#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/rational.hpp"

using rotkit::Rational;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = rotkit::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

bool round_trips(const std::string& s) { return Rational::parse(s).str() == s; }

}  // namespace

TEST_CASE("rho tree examples") {
  const Run r = run({"rho", "--lambda", "1/2", "--delta", "3/4"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["rho"] == "1/2");
  CHECK(j["plateau"] == Json::array({"2/3", "5/6"}));
  CHECK(j["command"] == "rho");
  CHECK(j["input"]["lambda"] == "1/2");
  CHECK(j["config"]["float_precision_bits"] == 128);

  const Json z = Json::parse(run({"rho", "--lambda", "1/2", "--delta", "1/4"}).out);
  CHECK(z["rho"] == "0/1");
}

TEST_CASE("rho orbit and auto methods") {
  const Run r = run({"rho", "--lambda", "1/2", "--delta", "3/4", "--method", "orbit"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK_FALSE(j.contains("rho"));
  const double est = std::stod(j["orbit"]["estimate"].get<std::string>());
  CHECK(est >= 0.499);
  CHECK(est <= 0.501);
  CHECK(j["orbit"]["error_bound"] == "1/1000");

  const Json a = Json::parse(run({"rho", "--lambda", "2/3", "--delta", "1/5", "--method", "auto"}).out);
  CHECK(a["orbit"]["cross_check"] == "consistent");
  CHECK(a.contains("rho"));
}

TEST_CASE("exit codes") {
  CHECK(run({"rho", "--lambda", "1/2"}).code == 2);
  CHECK(run({"rho", "--lambda", "x", "--delta", "1/2"}).code == 2);
  CHECK(run({"rho", "--lambda", "2/4", "--delta", "1/2"}).code == 2);
  CHECK(run({"rho", "--lambda", "3/2", "--delta", "1/2"}).code == 2);
  CHECK(run({"rho", "--lambda", "1/2", "--delta", "1/2", "--method", "magic"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"rho", "--lambda", "1/2", "--delta", "3/4", "--steps", "5000000"}).code == 0);
  CHECK(run({"rho", "--lambda", "1/2", "--delta", "3/4", "--method", "orbit", "--steps", "5000000"}).code == 3);
  CHECK(run({"tree", "--lambda", "1/2", "--depth", "40"}).code == 3);
  CHECK(run({"verify", "--suite", "gap-identity"}).code == 0);
  CHECK(run({"verify", "--suite", "no-such"}).code == 2);
  CHECK(run({"staircase", "--lambda", "1/2", "--grid", "3", "--out", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("depth exceeded emits the partial bracket") {
  const Run r = run({"rho", "--lambda", "49/50", "--delta", "1/49", "--max-depth", "64"});
  CHECK(r.code == 3);
  const Json j = Json::parse(r.out);
  CHECK(j["error"] == "depth-exceeded");
  CHECK(j["bracket"]["depth"] == 64);
  const Rational lo = Rational::parse(j["bracket"]["left_value"].get<std::string>());
  const Rational hi = Rational::parse(j["bracket"]["right_value"].get<std::string>());
  CHECK(lo < Rational::parse("1/49"));
  CHECK(Rational::parse("1/49") < hi);
}

TEST_CASE("staircase dataset") {
  const Run r = run({"staircase", "--lambda", "1/2", "--grid", "4"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "delta_num,delta_den,rho_num,rho_den,plateau_lo,plateau_hi,depth");
  // delta = 1/2 = 1 - lambda is the closed right end of the 0/1 plateau.
  CHECK(ls[3] == "1,2,0,1,0/1,1/2,1");
  CHECK(ls[4] == "3,4,1,2,2/3,5/6,2");

  const Run big = run({"staircase", "--lambda", "1/2", "--grid", "1000", "--jobs", "3"});
  REQUIRE(big.code == 0);
  const auto rows = lines(big.out);
  REQUIRE(rows.size() == 1001);
  Rational prev(-1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 7);
    const Rational rho = Rational::parse(f[2] + "/" + f[3]);
    const Rational d = Rational::parse(f[0] + "/" + f[1]);
    CHECK(prev <= rho);
    CHECK(Rational::parse(f[4]) <= d);
    CHECK(d <= Rational::parse(f[5]));
    prev = rho;
  }
  CHECK(run({"staircase", "--lambda", "1/2", "--grid", "1000"}).out == big.out);
}

TEST_CASE("staircase writes to a file") {
  const auto path = std::filesystem::temp_directory_path() / "rotkit_staircase_test.csv";
  const Run r = run({"staircase", "--lambda", "1/3", "--grid", "10", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "delta_num,delta_den,rho_num,rho_den,plateau_lo,plateau_hi,depth");
  std::filesystem::remove(path);
}

TEST_CASE("tree output") {
  const Run r = run({"tree", "--lambda", "1/2", "--depth", "3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  std::vector<std::string> values;
  for (const auto& n : j["nodes"]) values.push_back(n["value"]);
  CHECK(values == std::vector<std::string>{"0/1", "4/7", "2/3", "6/7", "1/1"});

  const auto csv = lines(run({"tree", "--lambda", "1/2", "--depth", "3", "--format", "csv"}).out);
  REQUIRE(csv.size() == 6);
  CHECK(csv[0] == "p,q,value_num,value_den,plateau_lo,plateau_hi");
  CHECK(csv[2] == "1,3,4,7,4/7,9/14");
}

TEST_CASE("orbit output") {
  const Run r = run({"orbit", "--lambda", "1/2", "--delta", "3/4", "--steps", "3", "--x0", "0"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["cycle"]["points"] == Json::array({"1/6", "5/6"}));
  CHECK(j["cycle"]["wrap_word"] == Json::array({0, 1}));
  CHECK(j["lift_orbit"] == Json::array({"0/1", "3/4", "9/8", "29/16"}));
}

TEST_CASE("delta output carries its tail bound") {
  const Run r = run({"delta", "--lambda", "1/2", "--rho", "golden", "--eps", "1e-18"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const Rational tail = Rational::parse(j["tail_bound"].get<std::string>());
  CHECK(tail <= Rational::parse_decimal("1e-18"));
  CHECK(j["delta"].get<std::string>().rfind("0.8549", 0) == 0);
  const Rational lo = Rational::parse_decimal(j["enclosure"][0].get<std::string>());
  const Rational hi = Rational::parse_decimal(j["enclosure"][1].get<std::string>());
  const Rational ps = Rational::parse(j["partial_sum"].get<std::string>());
  CHECK(lo <= ps - tail);
  CHECK(ps + tail <= hi);
  CHECK(run({"delta", "--lambda", "1/2", "--rho", "golden", "--eps", "2"}).code == 2);
  CHECK(run({"delta", "--lambda", "1/2", "--rho", "sqrt:5:-1/2+", "--eps", "2^-40"}).code == 0);
}

TEST_CASE("cantor output") {
  const auto csv = lines(run({"cantor", "--lambda", "1/3", "--k", "2", "--format", "csv"}).out);
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "k,j,lo,hi,length_num,length_den");
  CHECK(csv[1] == "1,0,2/3,1/1,1,3");
  const Run r = run({"cantor", "--lambda", "1/2", "--k", "5", "--sigma", "1/2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["rows"].size() == 5);
  CHECK(j["rows"][4]["gaps"].size() == 16);
  CHECK(j["lemma9"]["sum_ok"] == true);
}

TEST_CASE("every exact value re-parses to itself") {
  const std::vector<std::vector<std::string>> cmds{
      {"rho", "--lambda", "3/7", "--delta", "5/11"},
      {"tree", "--lambda", "2/5", "--depth", "4"},
      {"orbit", "--lambda", "3/4", "--delta", "1/3"},
      {"cantor", "--lambda", "1/2", "--k", "3"},
  };
  for (const auto& c : cmds) {
    const Json j = Json::parse(run(c).out);
    std::vector<const Json*> stack{&j};
    int seen = 0;
    while (!stack.empty()) {
      const Json* n = stack.back();
      stack.pop_back();
      if (n->is_string()) {
        const std::string s = *n;
        if (s.find('/') != std::string::npos && s.find_first_not_of("-0123456789/") == std::string::npos) {
          CHECK(round_trips(s));
          ++seen;
        }
      }
      if (n->is_structured()) {
        for (const auto& child : *n) stack.push_back(&child);
      }
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> c{"delta", "--lambda", "2/3", "--rho", "cf:[1,2,3,4]", "--eps", "2^-50"};
  CHECK(run(c).out == run(c).out);
  const std::vector<std::string> v{"verify", "--suite", "unimodularity", "--criterion", "2"};
  CHECK(run(v).out == run(v).out);
}

TEST_CASE("configuration file and environment") {
  const auto path = std::filesystem::temp_directory_path() / "rotkit_cli_test.conf";
  {
    std::ofstream f(path);
    f << "# test config\nfloat_precision_bits = 96\nmax_depth = 64\noutput_format = csv\n";
  }
  const Run r = run({"--config", path.string(), "rho", "--lambda", "1/2", "--delta", "3/4"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["config"]["float_precision_bits"] == 96);
  CHECK(j["config"]["max_depth"] == 64);
  CHECK(lines(run({"--config", path.string(), "tree", "--lambda", "1/2", "--depth", "2"}).out)[0] ==
        "p,q,value_num,value_den,plateau_lo,plateau_hi");
  CHECK(run({"--config", path.string(), "--precision", "200", "rho", "--lambda", "1/2", "--delta", "3/4"})
            .out.find("\"float_precision_bits\": 200") != std::string::npos);
  {
    std::ofstream f(path);
    f << "colour = blue\n";
  }
  CHECK(run({"--config", path.string(), "rho", "--lambda", "1/2", "--delta", "3/4"}).code == 2);
  std::filesystem::remove(path);

  rotkit::cli::RunConfig cfg;
  CHECK_THROWS_AS(rotkit::cli::apply_config_text(cfg, "float_precision_bits = 32", "t"), rotkit::ParseError);
  CHECK_THROWS_AS(rotkit::cli::apply_config_text(cfg, "no equals sign", "t"), rotkit::ParseError);

  setenv("ROTKIT_PRECISION_BITS", "80", 1);
  CHECK(Json::parse(run({"rho", "--lambda", "1/2", "--delta", "3/4"}).out)["config"]["float_precision_bits"] == 80);
  setenv("ROTKIT_PRECISION_BITS", "12", 1);
  CHECK(run({"rho", "--lambda", "1/2", "--delta", "3/4"}).code == 2);
  unsetenv("ROTKIT_PRECISION_BITS");
}
