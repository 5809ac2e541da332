#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_app.hpp"
#include "doctest.h"
#include "horolab/experiments.hpp"

using namespace horolab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("weyl row for the s = sqrt 5 shift") {
  const Run r = cli({"weyl", "--q", "1009", "--b", "505", "--test", "eisenstein"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == "q,b,s,value_re,value_im,target,abs_error,seconds\r");
  CHECK(row.rfind("1009,505,2.23606797749979,", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({"weyl", "--q", "0"}).code == 2);
  CHECK(cli({"weyl", "--q", "1000"}).code == 2);
  CHECK(cli({"weyl", "--q", "1009", "--b", "1009"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"nosuch"}).code == 2);
  CHECK(cli({"weyl", "--bogus", "1"}).code == 2);
  CHECK(cli({"weyl", "--out", "xml", "--format", "yaml"}).code == 2);
  CHECK(cli({"satotate", "--N", "1000", "--zs", "5000"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cmaudit is all green") {
  const Run r = cli({"cmaudit", "--out", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("config"));
  CHECK(j.contains("runtime_seconds"));
  REQUIRE(j["results"].size() == 6);
  for (const auto& it : j["results"]) {
    CHECK(it["result"] == true);
    CHECK(it.contains("claim"));
    CHECK(it.contains("paper_location"));
    CHECK(it.contains("witness"));
  }
}

TEST_CASE("falsified claims exit with 1") {
  // trivial class character of Q(sqrt -23): lambda(3) = 2, so the partial sum
  // jumps by 2/3 between z = 2 and z = 3, above (3/4) loglog-growth + 0.2
  const Run r = cli({"satotate", "--form", "cm", "--char", "0", "--N", "100", "--zs", "2,3"});
  CHECK(r.code == 1);
  CHECK(r.err.find("slope bound") != std::string::npos);
  CHECK(r.out.rfind("z,value,loglog_z,slope_term", 0) == 0);
}

TEST_CASE("config file and precedence") {
  const std::string path = "/tmp/horolab_test_config.ini";
  {
    std::ofstream f(path);
    f << "q = 101\nb = 7\ntest = constant\n";
  }
  const Run a = cli({"weyl", "--config", path});
  CHECK(a.code == 0);
  CHECK(a.out.find("\n101,7,") != std::string::npos);
  const Run b = cli({"weyl", "--config", path, "--q", "103"});
  CHECK(b.code == 0);
  CHECK(b.out.find("\n103,7,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("threads from the environment") {
  ::setenv("HOROLAB_THREADS", "3", 1);
  const Run r = cli({"lattice", "--q", "101", "--b", "10", "--out", "json"});
  ::unsetenv("HOROLAB_THREADS");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["config"]["threads"] == "3");
  const Run bad = cli({"lattice", "--threads", "0"});
  CHECK(bad.code == 2);
}

TEST_CASE("reports are reproducible") {
  const std::vector<std::string> args = {"weyl", "--q", "2003", "--samples", "4", "--seed", "5", "--test", "delta", "--out", "json"};
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("runtime_seconds");
    for (auto& row : j["results"]) row.erase("seconds");
    j["config"].erase("threads");
    return j;
  };
  auto a = args, b = args;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "4"});
  CHECK(strip(cli(a).out) == strip(cli(b).out));
}

TEST_CASE("CSV escaping and number format") {
  CHECK(format_cell(0.1) == "0.1");
  CHECK(format_cell(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_cell(true) == "true");
  ExperimentReport r;
  r.columns = {"a", "b"};
  r.rows = {{std::string("x,y"), std::string("say \"hi\"")}};
  std::ostringstream os;
  write_csv(r, os);
  CHECK(os.str() == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n");
}

}
