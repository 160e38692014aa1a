#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "mixnorm/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mixnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mixnorm::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "mixnorm_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const auto p = scratch() / name;
  std::ofstream(p) << content;
  return p;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("feasible") {
  auto r = cli({"feasible", "--m", "2", "--q", "4/3,4/3"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == "feasible slack=0 lambda=1 rho=1.33333333333333\n");

  r = cli({"feasible", "--m", "3", "--q", "1.5,1.5,1.5"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("feasible slack=0 ", 0) == 0);

  r = cli({"feasible", "--m", "2", "--q", "1,1"});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("infeasible slack=-0.5 ", 0) == 0);
  CHECK(r.err.empty());

  CHECK(cli({"feasible", "--m", "2"}).code == 2);
  CHECK(cli({"feasible", "--m", "2", "--q", "4/3,x"}).code == 2);
  CHECK(cli({"feasible", "--m", "2", "--q", "3,3"}).code == 2);
  CHECK(cli({"feasible", "--m", "2", "--q", "2,2", "--s", "1.5", "--qcod", "1.2"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("exponents") {
  const auto r = cli({"exponents", "--m", "2", "--q", "4/3,4/3", "--interpolate", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda=1\n") != std::string::npos);
  CHECK(r.out.find("hull_weights=0.5,0.5\n") != std::string::npos);
  CHECK(r.out.find("interpolated=1.14285714285714,1.6\n") != std::string::npos);
}

TEST_CASE("generate feeds mixed-norm and opnorm") {
  const auto ext = scratch() / "ext.txt";
  auto r = cli({"generate", "--kind", "extremizer", "--out", ext.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  r = cli({"mixed-norm", "--tensor", ext.string(), "--q", "4/3,4/3"});
  CHECK(r.out == "2.82842712474619\n");
  r = cli({"mixed-norm", "--tensor", ext.string(), "--q", "2,2"});
  CHECK(r.out == "2\n");
  r = cli({"mixed-norm", "--tensor", ext.string(), "--q", "1,2", "--sigma", "2,1"});
  CHECK(r.out == "2.82842712474619\n");

  r = cli({"opnorm", "--tensor", ext.string(), "--p", "inf,inf", "--method", "oracle"});
  CHECK(r.code == 0);
  const auto t = tokens(r.out);
  REQUIRE(t.size() >= 3);
  CHECK(t[0] == "2");
  CHECK(t[1] == "exact");

  const auto ksz = scratch() / "ksz.txt";
  CHECK(cli({"generate", "--kind", "ksz-vector", "--m", "2", "--n", "3", "--seed", "4", "--out",
             ksz.string()})
            .code == 0);
  r = cli({"mixed-norm", "--tensor", ksz.string(), "--q", "1,1"});
  CHECK(std::stod(r.out) == doctest::Approx(std::pow(3.0, 2.5)));
  r = cli({"opnorm", "--tensor", ksz.string()});
  CHECK(r.code == 0);
  CHECK(tokens(r.out)[1] == "exact");
}

TEST_CASE("opnorm details") {
  const auto rank1 = write_file("rank1.txt", "shape: 2 3\n3\n6\n-6\n4\n8\n-8\n");
  auto r = cli({"opnorm", "--tensor", rank1.string(), "--p", "2,2", "--method", "ascent", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(tokens(r.out)[0]) - 15.0) <= 1e-8 * 15.0);
  CHECK(tokens(r.out)[1] == "lower_bound");
  CHECK(r.out == cli({"opnorm", "--tensor", rank1.string(), "--p", "2,2", "--method", "ascent",
                      "--seed", "3"})
                     .out);

  const auto zero = write_file("zero.txt", "shape: 2 2\n0\n0\n0\n0\n");
  r = cli({"opnorm", "--tensor", zero.string()});
  CHECK(tokens(r.out)[0] == "0");
  CHECK(cli({"mixed-norm", "--tensor", zero.string(), "--q", "1,1"}).out == "0\n");

  r = cli({"opnorm", "--tensor", rank1.string(), "--p", "2,2", "--method", "oracle"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  const auto big = scratch() / "big.txt";
  cli({"generate", "--kind", "sign", "--n", "30", "--out", big.string()});
  CHECK(cli({"opnorm", "--tensor", big.string(), "--method", "oracle", "--budget", "1000"}).code == 2);

  const auto bad = write_file("bad.txt", "shape: 2 2\n1\n2\n");
  CHECK(cli({"opnorm", "--tensor", bad.string()}).code == 2);
  CHECK(cli({"mixed-norm", "--tensor", bad.string(), "--q", "1,1"}).code == 2);
  CHECK(cli({"mixed-norm", "--tensor", "/nonexistent", "--q", "1,1"}).code == 2);
}

TEST_CASE("experiment") {
  const auto cfg = write_file("bilinear.cfg",
                              "kind = bilinear_sharp\nq = 4/3, 4/3\nn_values = 2,3,4\ntrials = 5\n");
  const auto out = scratch() / "out";
  auto r = cli({"experiment", "--config", cfg.string(), "--out-dir", out.string()});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.rfind("PASS bilinear_sharp extremizer_ratio=1.4142135623731", 0) == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    const auto ext = e.path().extension();
    CHECK((ext == ".csv" || ext == ".json"));
    ++files;
  }
  CHECK(files == 2);

  const auto growth = write_file("growth.cfg",
                                 "kind = sharpness_growth\nq = 1,1\nn_values = 4,8,16,32,64\n");
  r = cli({"experiment", "--config", growth.string(), "--out-dir", out.string()});
  CHECK(r.out.find("predicted=0.5") != std::string::npos);
  CHECK((r.code == 0) == (r.out.rfind("PASS", 0) == 0));

  const auto refused = write_file("refused.cfg", "kind = bilinear_sharp\nq = 1,1\n");
  r = cli({"experiment", "--config", refused.string(), "--out-dir", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("refused") != std::string::npos);
  CHECK(cli({"experiment", "--config", (scratch() / "missing.cfg").string()}).code == 2);
}

TEST_CASE("binary exit codes and streams") {
  const std::string bin = MIXNORM_CLI_PATH;
  auto run = [&](const std::string& args, std::string& out_text) {
    const auto err_path = scratch() / "stderr.txt";
    const std::string cmd = bin + " " + args + " 2>" + err_path.string();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    out_text.clear();
    while (fgets(buf, sizeof buf, pipe)) out_text += buf;
    const int status = pclose(pipe);
    std::ifstream e(err_path);
    std::stringstream ss;
    ss << e.rdbuf();
    return std::pair{WEXITSTATUS(status), ss.str()};
  };
  std::string out;
  auto [code, err] = run("feasible --m 2 --q 4/3,4/3", out);
  CHECK(code == 0);
  CHECK(err.empty());
  std::tie(code, err) = run("feasible --m 2 --q 1,1", out);
  CHECK(code == 1);
  CHECK(err.empty());
  std::tie(code, err) = run("feasible --q 1,1", out);
  CHECK(code == 2);
  CHECK_FALSE(err.empty());
}
