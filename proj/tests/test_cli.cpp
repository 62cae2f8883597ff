#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"
#include "tforge/util.hpp"

using Json = nlohmann::ordered_json;

namespace {

std::string run_cli(const std::string& args, int& exit_code) {
  std::string cmd = std::string(TFORGE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int rc = pclose(pipe);
  exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

}  // namespace

TEST_CASE("envelope schema and the worked count") {
  int rc = -1;
  auto out = run_cli("count --p 3 --m 1 --s 2", rc);
  CHECK(rc == 0);
  Json j = Json::parse(out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "params", "results", "diagnostics", "timings", "seed", "version"});
  CHECK(j["results"]["count"] == "16");
}

TEST_CASE("reports are byte-identical apart from timings") {
  for (std::string args : {"rank --p 5 --ell 3 --m 2", "mult --p 3 --m 2 --mode cross-check",
                           "traces --p 5 --m 10", "charpoly --p 3 --m 2 --ell 5"}) {
    int rc1 = -1, rc2 = -1;
    Json a = Json::parse(run_cli(args, rc1));
    Json b = Json::parse(run_cli(args, rc2));
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    a.erase("timings");
    b.erase("timings");
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("round trip of integer fields") {
  int rc = -1;
  Json j = Json::parse(run_cli("rank --p 5 --ell 3 --m 10", rc));
  CHECK(rc == 0);
  // decimal-string integers parse back exactly
  mpz_class q(j["results"]["q"].get<std::string>());
  CHECK(q == tforge::pow_ui(5, 20));
  mpz_class rank(j["results"]["rank"].get<std::string>());
  CHECK(rank == mpz_class(j["results"]["unity_multiplicity"].get<std::string>()));
}

TEST_CASE("exit codes") {
  int rc = -1;
  run_cli("count --p 4 --m 1 --s 1", rc);
  CHECK(rc == 2);  // usage: not a prime
  run_cli("rank --p 5 --ell 3 --m 3", rc);
  CHECK(rc == 2);  // inadmissible
  run_cli("rank --p 37 --ell 3 --m 10 --budget 1000000 --exact-only", rc);
  CHECK(rc == 3);  // budget exhaustion without fallback
  run_cli("rank --p 5 --ell 3", rc);
  CHECK(rc != 0);  // missing --m
  run_cli("verify --suite cyclo", rc);
  CHECK(rc == 0);
  run_cli("count --p 3 --m 1 --s 1 --budget 512", rc);
  CHECK(rc == 2);  // budget below the floor
}

TEST_CASE("csv table schema") {
  int rc = -1;
  auto out = run_cli("table --p 5 --ell 3 --m-list 2 --format csv", rc);
  CHECK(rc == 0);
  CHECK(out.rfind("p,ell,m,q,genus,d,rank_mode,rank_lo,rank,rank_hi,order_valuation,thm_main_ref,ratio_main,"
                  "ratio_realmain1,seconds\n",
                  0) == 0);
  CHECK(out.find("\n5,3,2,625,312,2,exact,137,156,175,156,") != std::string::npos);
}

TEST_CASE("atomic file output") {
  std::string path = "/tmp/tforge_cli_test_out.json";
  std::remove(path.c_str());
  int rc = -1;
  run_cli("mult --p 3 --m 1 --out " + path, rc);
  CHECK(rc == 0);
  FILE* f = fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string content;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), f)) > 0) content.append(buf.data(), got);
  fclose(f);
  Json j = Json::parse(content);
  CHECK(j["results"]["multiplicities"][0]["a"] == "4");
  std::remove(path.c_str());
}
