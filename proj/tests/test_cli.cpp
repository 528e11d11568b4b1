#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcms/cli.hpp"

using namespace qcms;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"qcms"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("bootstrap command") {
  auto r = cli({"bootstrap", "--n", "200", "--r", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "R001021, L=7\n");
  CHECK(cli({"bootstrap", "--n", "200", "--r", "200"}).out == "R004030, L=7\n");
  auto bad = cli({"bootstrap", "--n", "200", "--r", "0"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("outside") != std::string::npos);
  CHECK(cli({"bootstrap", "--n", "200"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--version"}).code == kExitOk);
}

TEST_CASE("subseq command") {
  auto r = cli({"subseq", "--n", "200", "--channels", "1-6", "--r", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("R-type (K=10): 5,5,5,5,5,*,*,*,*,5") != std::string::npos);
  CHECK(r.out.find("0-type (K=7): 1,2,3,4,5,6,*") != std::string::npos);
  CHECK(r.out.find("4-type (K=13): 1,2,3,4,5,6,*,*,*,*,*,*,*") != std::string::npos);
  CHECK(cli({"subseq", "--n", "200", "--channels", "1-6", "--r", "9"}).code == kExitUsage);
}

TEST_CASE("sequence command") {
  auto r = cli({"sequence", "--n", "200", "--channels", "1-6", "--r", "5", "--slots", "49"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("row 1: 5 1 1 1 1 1 1\n") != std::string::npos);
  CHECK(r.out.find("row 6: * 6 6 6 6 6 6\n") != std::string::npos);
  CHECK(r.out.find("row 7: * * * * * * *") != std::string::npos);

  auto csv = cli({"sequence", "--n", "200", "--channels", "1-6", "--r", "5", "--slots", "3", "--format", "csv"});
  CHECK(csv.out.find("slot,channel\n1,5\n2,1\n3,1\n") != std::string::npos);

  auto filled = cli({"sequence", "--n", "200", "--channels", "1-6", "--r", "5", "--wildcard", "random", "--seed", "4"});
  CHECK(filled.code == kExitOk);
  CHECK(filled.out.find('*') == std::string::npos);

  CHECK(cli({"sequence", "--n", "200", "--channels", "1-6", "--r", "7"}).code == kExitUsage);
  CHECK(cli({"sequence", "--n", "200", "--channels", "x", "--r", "1"}).code == kExitUsage);
}

TEST_CASE("verify command") {
  auto r = cli({"verify", "--n", "200", "--ca", "1-6", "--cb", "1,7,8,9"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("PASS: max TTR ", 0) == 0);
  CHECK(r.out.find(" <= 847 ") != std::string::npos);

  auto toy = cli({"verify", "--n", "4", "--ca", "1-2", "--cb", "1-2"});
  CHECK(toy.code == kExitOk);
  CHECK(toy.out.find("<= 495") != std::string::npos);

  CHECK(cli({"verify", "--n", "200", "--ca", "1-3", "--cb", "4-6"}).code == kExitUsage);

  auto js = cli({"verify", "--n", "200", "--ca", "1-6", "--cb", "1,7,8,9", "--format", "json"});
  auto doc = nlohmann::json::parse(js.out.substr(js.out.find('{')));
  CHECK(doc["pass"] == true);
  CHECK(doc["bound"] == 847);
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["params"]["ca"] == "1,2,3,4,5,6");
}

TEST_CASE("simulate command") {
  auto r = cli({"simulate", "--n", "60", "--theta-a", "0.2", "--theta-b", "0.2", "--g", "2", "--trials", "200", "--seed", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("trials=200") != std::string::npos);
  CHECK(r.out.find("perm=shuffled") != std::string::npos);
  CHECK(cli({"simulate", "--trials", "10"}).code == kExitUsage);
  CHECK(cli({"simulate", "--g", "0", "--trials", "10"}).code == kExitUsage);
  CHECK(cli({"simulate", "--g", "1", "--wildcard", "sometimes"}).code == kExitUsage);
}

TEST_CASE("sweep command usage errors") {
  CHECK(cli({"sweep", "--scene", "2", "--trials", "10"}).code == kExitUsage);
  CHECK(cli({"sweep", "--scene", "1", "--g", "3", "--trials", "10"}).code == kExitUsage);
  CHECK(cli({"sweep", "--scene", "4"}).code == kExitUsage);
  CHECK(cli({"sweep", "--scene", "3", "--theta-b", "0.2"}).code == kExitUsage);
  CHECK(cli({"sweep", "--scene", "1", "--format", "xml"}).code == kExitUsage);
}

TEST_CASE("sweep CSV is bit-exact in its header and reproducible") {
  auto a = cli({"sweep", "--scene", "2", "--g", "2", "--trials", "60", "--seed", "7", "--format", "csv"});
  auto b = cli({"sweep", "--scene", "2", "--g", "2", "--trials", "60", "--seed", "7", "--format", "csv", "--threads", "3"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("scene,param,trials,ettr,mttr_observed,ci95,seed\n", 0) == 0);
  CHECK(a.out.find("\n2,40,60,") != std::string::npos);
  CHECK(a.out.find("\n2,220,60,") != std::string::npos);
  CHECK(a.out.find("# tool=qcms version=") != std::string::npos);
  CHECK(a.out.find("\"seed\":7") != std::string::npos);
  CHECK(a.out.find("\"perm\":\"shuffled\"") != std::string::npos);

  std::size_t data_rows = 0;
  std::istringstream lines(a.out);
  for (std::string line; std::getline(lines, line);)
    if (!line.empty() && line[0] == '2') ++data_rows;
  CHECK(data_rows == 10);

  auto c = cli({"sweep", "--scene", "2", "--g", "2", "--trials", "60", "--seed", "8", "--format", "csv"});
  CHECK(c.out != a.out);
}

TEST_CASE("sweep writes JSON to a file") {
  auto path = std::filesystem::temp_directory_path() / "qcms_sweep_test.json";
  auto r = cli({"sweep", "--scene", "3", "--trials", "40", "--seed", "3", "--format", "json", "--out", path.c_str()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("scene 3") != std::string::npos);
  auto doc = nlohmann::json::parse(read_file(path));
  CHECK(doc["tool"] == "qcms");
  CHECK(doc["seed"] == 3);
  CHECK(doc["params"]["theta_a"] == 0.1);
  REQUIRE(doc["rows"].size() == 10);
  CHECK(doc["rows"][0]["param"] == 0.1);
  CHECK(doc["rows"][9]["param"] == 0.55);
  CHECK(doc["rows"][0]["trials"] == 40);
  std::filesystem::remove(path);
}

TEST_CASE("properties command") {
  auto none = cli({"properties", "--pairs", "0", "--ns", "", "--roundtrip-max-n", "0", "--drift-max", "-1",
                   "--prime-max", "0", "--length-max-n", "0", "--coverage-sizes", "", "--no-engine"});
  CHECK(none.code == kExitOk);
  CHECK(none.out.find("(0 checks)") != std::string::npos);

  auto pow4 = cli({"properties", "--pairs", "2", "--ns", "4,16", "--roundtrip-max-n", "16", "--drift-max", "10",
                   "--prime-max", "50", "--length-max-n", "8", "--coverage-sizes", "4"});
  CHECK(pow4.out.find("PASS rotation_overlap_either") != std::string::npos);
  CHECK(pow4.out.find("PASS pair_coverage") != std::string::npos);
  // the two-sided rotation statement has counterexamples at N=4 and N=16
  CHECK(pow4.out.find("FAIL rotation_overlap ") != std::string::npos);
  CHECK(pow4.code == kExitFailure);

  CHECK(cli({"properties", "--coverage-sizes", "0"}).code == kExitUsage);
}
