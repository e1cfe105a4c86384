#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int status;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(WICKLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) out += buf;
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("enumerate reports the regular couple count") {
  auto r = run("--out /tmp/wkcli1 enumerate --order 3 --regular");
  CHECK_EQ(r.status, 0);
  CHECK(r.output.find("96") != std::string::npos);
}

TEST_CASE("malformed alpha fails validation naming the (0,2) constraint") {
  std::ofstream cfg("/tmp/wkcli_bad.json");
  cfg << "{\"alpha\": 2.5}";
  cfg.close();
  auto r = run("--config /tmp/wkcli_bad.json enumerate --order 1");
  CHECK_EQ(r.status, 1);
  CHECK(r.output.find("(0,2)") != std::string::npos);
}

TEST_CASE("invalid JSON is a validation error") {
  std::ofstream cfg("/tmp/wkcli_bad2.json");
  cfg << "{nope";
  cfg.close();
  auto r = run("--config /tmp/wkcli_bad2.json enumerate");
  CHECK_EQ(r.status, 1);
}

TEST_CASE("oversized enumeration exits with the budget code") {
  std::ofstream cfg("/tmp/wkcli_cap.json");
  cfg << "{\"enumeration_cap\": 10}";
  cfg.close();
  auto r = run("--config /tmp/wkcli_cap.json enumerate --order 3");
  CHECK_EQ(r.status, 2);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  std::ofstream cfg("/tmp/wkcli_det.json");
  cfg << "{\"L_sweep\": [2, 4], \"mc_samples\": 200}";
  cfg.close();
  auto r1 = run("--config /tmp/wkcli_det.json --out /tmp/wkdet1 --seed 99 mc-validate --L 2 --radius 1");
  auto r2 = run("--config /tmp/wkcli_det.json --out /tmp/wkdet2 --seed 99 mc-validate --L 2 --radius 1");
  CHECK_EQ(r1.status, 0);
  CHECK_EQ(r2.status, 0);
  CHECK_EQ(slurp("/tmp/wkdet1/mc_validate.json"), slurp("/tmp/wkdet2/mc_validate.json"));
  CHECK(slurp("/tmp/wkdet1/mc_validate.json").size() > 100);
  // and a different seed changes them
  auto r3 = run("--config /tmp/wkcli_det.json --out /tmp/wkdet3 --seed 100 mc-validate --L 2 --radius 1");
  CHECK_EQ(r3.status, 0);
  CHECK(slurp("/tmp/wkdet3/mc_validate.json") != slurp("/tmp/wkdet1/mc_validate.json"));
}

TEST_CASE("count-lattice and osc-converge emit CSV with headers and hash") {
  std::ofstream cfg("/tmp/wkcli_sweep.json");
  cfg << "{\"L_sweep\": [2, 4]}";
  cfg.close();
  auto r = run("--config /tmp/wkcli_sweep.json --out /tmp/wksweep count-lattice --order 1");
  CHECK_EQ(r.status, 0);
  auto csv = slurp("/tmp/wksweep/count_lattice.csv");
  CHECK(csv.find("L,alpha,couple,order,count,normalized,config_hash") != std::string::npos);

  auto r2 = run("--config /tmp/wkcli_sweep.json --out /tmp/wksweep osc-converge --alphas 1.0");
  CHECK_EQ(r2.status, 0);
  CHECK(slurp("/tmp/wksweep/osc_converge.csv").find("abs_error") != std::string::npos);
}

TEST_CASE("theta subcommand writes a kernel table") {
  auto r = run("--out /tmp/wktheta theta --parents -1 0 --omega 0.5 -0.25 --rows 8");
  CHECK_EQ(r.status, 0);
  auto csv = slurp("/tmp/wktheta/theta.csv");
  CHECK(csv.find("t,re,im,decay_bound,config_hash") != std::string::npos);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK_EQ(lines, 9);
}

TEST_CASE("kinetic-solve writes the binary container with its sidecar") {
  std::ofstream cfg("/tmp/wkcli_solve.json");
  cfg << "{\"T\": 0.1, \"dt\": 0.05, \"w_grid\": {\"mk\": 7}, "
         "\"solver_quadrature\": {\"n_radial\": 4, \"n_costheta\": 4, \"n_phi\": 6, "
         "\"n_b_radial\": 3, \"n_b_angle\": 5}}";
  cfg.close();
  auto r = run("--config /tmp/wkcli_solve.json --out /tmp/wksolve kinetic-solve --equation wk");
  CHECK_EQ(r.status, 0);
  auto bin = slurp("/tmp/wksolve/wk_rk4.bin");
  REQUIRE(bin.size() > 24);
  CHECK_EQ(bin.substr(0, 8), "WKTRAJ01");
  auto side = slurp("/tmp/wksolve/wk_rk4.json");
  CHECK(side.find("config_hash") != std::string::npos);
  CHECK(slurp("/tmp/wksolve/wk_rk4_slice.csv").find("k1,value") != std::string::npos);
}
