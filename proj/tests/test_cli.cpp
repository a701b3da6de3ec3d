#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "steercert/cli/cli.hpp"
#include "steercert/io.hpp"
#include "steercert/measurements.hpp"
#include "steercert/povm.hpp"
#include "steercert/states.hpp"

using namespace steercert;
using namespace steercert::cli;
namespace fs = std::filesystem;
using io::json;

namespace {

RunResult run_args(const std::vector<std::string>& args) { return run(parse_args(args)); }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("steercert_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Proc {
  int code = -1;
  std::string out;
  std::string err;
};

Proc run_binary(const std::string& args, const TempDir& tmp) {
  std::string err_path = tmp.file("stderr.txt");
  std::string cmd = std::string(STEERCERT_BINARY) + " " + args + " 2>" + err_path;
  Proc p;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  int status = ::pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  p.err = read_file(err_path);
  return p;
}

std::string realization_file(const TempDir& tmp, const std::string& name, const Realization& r,
                             const SchmidtVector& sv) {
  std::string path = tmp.file(name);
  write_file(path, io::realization_to_json(r, sv).dump());
  return path;
}

}  // namespace

TEST_SUITE("parse") {
  TEST_CASE("defaults and named flags") {
    auto c = parse_args({"bounds", "--d", "2", "--alpha", "[0.7071,0.7071]"});
    CHECK(c.subcommand == Subcommand::Bounds);
    CHECK(c.d == std::size_t{2});
    REQUIRE(c.alpha.has_value());
    CHECK(c.alpha->size() == 2);
    CHECK(c.tolerance == 1e-7);
    CHECK(c.seed == 42);
    CHECK(c.restarts == 32);
    CHECK_FALSE(c.format.has_value());
  }

  TEST_CASE("builtin POVM selection") {
    auto c = parse_args({"randomness", "--d", "3", "--povm", "builtin:partial"});
    CHECK(c.subcommand == Subcommand::Randomness);
    CHECK(c.povm_source == "builtin:partial");
    CHECK_THROWS_AS(parse_args({"randomness", "--d", "3", "--povm", "builtin:nope"}), UsageError);
  }

  TEST_CASE("usage errors name the flag") {
    auto message = [](const std::vector<std::string>& a) {
      try {
        parse_args(a);
      } catch (const UsageError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message({"bounds", "--d", "3", "--alpha", "[1,0,0]"}).find("alpha_1 must be positive") != std::string::npos);
    CHECK(message({"bounds", "--d", "3", "--alpha", "[1,2"}).find("--alpha") != std::string::npos);
    CHECK(message({"bounds", "--d", "3", "--alpha", "[0.6,0.8]"}).find("does not match --d") != std::string::npos);
    CHECK(message({"bounds", "--bogus"}).find("--bogus") != std::string::npos);
    CHECK(message({"bounds", "--d", "1"}).find("--d") != std::string::npos);
    CHECK(message({"bounds", "--format", "csv"}).find("--format") != std::string::npos);
    CHECK(message({"bounds", "--format", "xml"}).find("--format") != std::string::npos);
    CHECK(message({"bounds", "--tol", "-1"}).find("--tol") != std::string::npos);
    CHECK(message({}).size() > 0);
    CHECK(message({"certify"}).find("--realization") != std::string::npos);
  }

  TEST_CASE("help is not an error") { CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested); }
}

TEST_SUITE("run") {
  TEST_CASE("bounds for the qubit maximally entangled state") {
    auto r = run_args({"bounds", "--d", "2"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["beta_q"].get<double>() == 2.0);
    CHECK(j["beta_l_exact"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
    CHECK(j["beta_l_paper_upper"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(j["gap"].get<double>() == doctest::Approx(2.0 - std::sqrt(2.0)));
    CHECK(j["tool_version"] == kToolVersion);
    CHECK(j["seed"] == 42);
    CHECK(j["tolerance"].get<double>() == 1e-7);
    CHECK(j["argmax_strategy"]["b0"] == 0);
    CHECK(j["delta"].size() == 2);
  }

  TEST_CASE("alpha normalization policy") {
    CHECK(run_args({"bounds", "--d", "2", "--alpha", "[0.7071,0.7071]"}).exit_code == 2);
    auto ok = run_args({"bounds", "--d", "2", "--alpha", "[0.7071,0.7071]", "--normalize-alpha"});
    CHECK(ok.exit_code == 0);
    CHECK(run_args({"bounds", "--alpha", "[0.70710678,0.70710678]"}).exit_code == 0);
  }

  TEST_CASE("sweep emits plot-ready CSV") {
    auto r = run_args({"sweep", "--d", "2", "--theta-grid", "90"});
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.output);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# tool_version=", 0) == 0);
    CHECK(line.find("seed=42") != std::string::npos);
    std::getline(in, line);
    CHECK(line == "theta,beta_l,gap");
    int rows = 0;
    double prev_theta = 0;
    while (std::getline(in, line)) {
      double th, bl, gap;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &th, &bl, &gap) == 3);
      CHECK(th > prev_theta);
      CHECK(gap > 0);
      CHECK(bl + gap == doctest::Approx(2.0));
      prev_theta = th;
      ++rows;
    }
    CHECK(rows == 90);
    auto js = run_args({"sweep", "--d", "3", "--theta-grid", "5", "--format", "json"});
    REQUIRE(js.exit_code == 0);
    CHECK(json::parse(js.output)["points"].size() == 5);
  }

  TEST_CASE("randomness with builtin measurements") {
    auto r = run_args({"randomness", "--d", "3", "--povm", "builtin:partial"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["outcome_probs"].size() == 9);
    CHECK(j["uniform"] == true);
    CHECK(j["min_entropy_bits"].get<double>() == doctest::Approx(2 * std::log2(3.0)));
    auto c = run_args({"randomness", "--d", "2"});
    REQUIRE(c.exit_code == 0);
    CHECK(json::parse(c.output)["min_entropy_bits"].get<double>() == doctest::Approx(2.0));
    auto skew = run_args({"randomness", "--alpha", "[0.8,0.6]"});
    REQUIRE(skew.exit_code == 0);
    CHECK(json::parse(skew.output)["uniform"] == false);
  }

  TEST_CASE("POVM build and check") {
    TempDir tmp;
    auto b = run_args({"povm", "build", "--kind", "covariant", "--d", "3"});
    REQUIRE(b.exit_code == 0);
    json j = json::parse(b.output);
    CHECK(j["extremality"]["extremal"] == true);
    CHECK(j["validation"]["pass"] == true);
    std::string path = tmp.file("povm.json");
    write_file(path, b.output);
    auto chk = run_args({"povm", "check", path});
    CHECK(chk.exit_code == 0);
    CHECK(json::parse(chk.output)["outcomes"] == 9);

    auto p = run_args({"povm", "build", "--kind", "partial", "--alpha", "[0.6,0.64,0.4792]", "--normalize-alpha"});
    CHECK(p.exit_code == 0);
    auto ns = run_args({"povm", "build", "--kind", "partial", "--d", "3", "--xi", "[0,1,2]"});
    REQUIRE(ns.exit_code == 0);
    CHECK(json::parse(ns.output)["sidon"] == false);
    CHECK(json::parse(ns.output)["extremality"]["extremal"] == false);

    auto real = run_args({"povm", "build", "--kind", "covariant", "--d", "2", "--fiducial", "[0.9238795325112867,0.3826834323650898]"});
    CHECK(real.exit_code == 1);
    CHECK(real.message.find("rank 3") != std::string::npos);

    std::vector<ComplexMatrix> scaled{ComplexMatrix{{1.01, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, 1.01}}};
    std::string bad = tmp.file("bad.json");
    write_file(bad, io::to_json(Povm(scaled)).dump());
    auto bc = run_args({"povm", "check", bad});
    CHECK(bc.exit_code == 1);
    CHECK(run_args({"povm", "check", tmp.file("missing.json")}).exit_code == 3);
    write_file(tmp.file("junk.json"), "not json");
    CHECK(run_args({"povm", "check", tmp.file("junk.json")}).exit_code == 2);
  }

  TEST_CASE("certify verdicts") {
    TempDir tmp;
    SchmidtVector sv({0.6, 0.64, std::sqrt(1 - 0.36 - 0.4096)});
    auto good = dress_realization(ideal_realization(sv), 2, 2, 3);
    auto ok = run_args({"certify", "--realization", realization_file(tmp, "good.json", good, sv)});
    CHECK(ok.exit_code == 0);
    json j = json::parse(ok.output);
    CHECK(j["verdict"] == "certified");
    CHECK(j["extraction"]["available"] == true);

    auto bad = ideal_realization(sv);
    std::vector<ComplexMatrix> ops = bad.bob[1].operators();
    for (std::size_t k = 1; k < 3; ++k) ops[k] *= 0.99;
    bad.bob[1] = GeneralizedObservable(ops);
    auto fail = run_args({"certify", "--realization", realization_file(tmp, "bad.json", bad, sv)});
    CHECK(fail.exit_code == 1);
    CHECK(fail.message.find("projectivity_b1") != std::string::npos);
    CHECK(json::parse(fail.output)["verdict"] == "failed");

    CHECK(run_args({"certify", "--realization", tmp.file("nope.json")}).exit_code == 3);
  }

  TEST_CASE("bell3 report") {
    auto r = run_args({"bell3", "--restarts", "4", "--seed", "5"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["value"].get<double>() >= j["threshold"].get<double>() - 1e-6);
    CHECK(j["state_schmidt"].size() == 3);
    CHECK(j["restart_values"].size() == 4);
  }
}

TEST_SUITE("schema") {
  TEST_CASE("every JSON report round-trips through its validator") {
    TempDir tmp;
    SchmidtVector sv = SchmidtVector::uniform(2);
    std::string real = realization_file(tmp, "r.json", ideal_realization(sv), sv);
    auto built = run_args({"povm", "build", "--kind", "covariant", "--d", "2"});
    REQUIRE(built.exit_code == 0);
    write_file(tmp.file("p.json"), built.output);
    std::vector<std::vector<std::string>> cases{
        {"bounds", "--d", "3"},
        {"certify", "--realization", real},
        {"povm", "build", "--kind", "partial", "--d", "4"},
        {"povm", "check", tmp.file("p.json")},
        {"randomness", "--d", "2"},
        {"bell3", "--restarts", "2"},
        {"sweep", "--d", "2", "--theta-grid", "4", "--format", "json"},
    };
    for (const auto& args : cases) {
      auto c = parse_args(args);
      auto r = run(c);
      REQUIRE(r.exit_code == 0);
      json j = json::parse(r.output);
      CHECK(validate_report(c.subcommand, j).empty());
      CHECK(j.dump(2) + "\n" == r.output);
      CHECK(run(c).output == r.output);
    }
  }

  TEST_CASE("validator catches missing and mistyped fields") {
    auto c = parse_args({"bounds", "--d", "2"});
    json j = json::parse(run(c).output);
    CHECK(validate_report(Subcommand::Bounds, j).empty());
    json missing = j;
    missing.erase("beta_l_exact");
    CHECK_FALSE(validate_report(Subcommand::Bounds, missing).empty());
    json wrong = j;
    wrong["gap"] = "large";
    CHECK_FALSE(validate_report(Subcommand::Bounds, wrong).empty());
    CHECK_FALSE(validate_report(Subcommand::Certify, j).empty());
    CHECK_FALSE(validate_report(Subcommand::Bounds, json::array()).empty());
  }

  TEST_CASE("realization files round-trip") {
    SchmidtVector sv({0.6, 0.8});
    auto r = dress_realization(ideal_realization(sv), 2, 1, 4);
    auto back = io::realization_from_json(json::parse(io::realization_to_json(r, sv).dump()));
    CHECK(back.alpha.alpha() == sv.alpha());
    CHECK(back.realization.state.vec() == r.state.vec());
    CHECK(back.realization.state.factor_dims() == r.state.factor_dims());
    CHECK(back.realization.bob[1].operators() == r.bob[1].operators());
    CHECK(back.realization.alice[0] == r.alice[0]);
  }

  TEST_CASE("correlation tables round-trip") {
    CorrelationTable t(2, 1, 2, {0.5, 0, 0, 0.5, 0.25, 0.25, 0.25, 0.25});
    json j = io::to_json(t);
    CHECK(j["d"] == 2);
    CHECK(j["nx"] == 1);
    CHECK(j["ny"] == 2);
    CHECK(io::table_from_json(j).flat() == t.flat());
  }
}

TEST_SUITE("binary") {
  TEST_CASE("exit codes and streams") {
    TempDir tmp;
    auto ok = run_binary("bounds --d 2", tmp);
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out)["beta_q"] == 2.0);
    CHECK(ok.err.empty());

    auto usage = run_binary("bounds --d 3 --alpha '[1,0,0]'", tmp);
    CHECK(usage.code == 2);
    CHECK(usage.out.empty());
    CHECK(usage.err.find("alpha_1 must be positive") != std::string::npos);

    CHECK(run_binary("bounds --nope", tmp).code == 2);
    CHECK(run_binary("", tmp).code == 2);
    CHECK(run_binary("povm check " + tmp.file("absent.json"), tmp).code == 3);
    CHECK(run_binary("bounds --d 2 -o " + tmp.file("no/such/dir/out.json"), tmp).code == 3);

    auto help = run_binary("--help", tmp);
    CHECK(help.code == 0);
    CHECK(help.out.find("bounds") != std::string::npos);
  }

  TEST_CASE("output file and byte-identical reruns") {
    TempDir tmp;
    std::string out = tmp.file("sweep.csv");
    REQUIRE(run_binary("sweep --d 3 --theta-grid 12 -o " + out, tmp).code == 0);
    std::string first = read_file(out);
    CHECK(first.find("theta,beta_l,gap") != std::string::npos);
    auto again = run_binary("sweep --d 3 --theta-grid 12", tmp);
    CHECK(again.out == first);
    auto b1 = run_binary("bell3 --restarts 3 --seed 11", tmp);
    auto b2 = run_binary("bell3 --restarts 3 --seed 11", tmp);
    CHECK(b1.out == b2.out);
  }

  TEST_CASE("thread count does not change results") {
    TempDir tmp;
    auto one = run_binary("sweep --d 2 --theta-grid 30", tmp);
    ::setenv("STEERCERT_THREADS", "4", 1);
    auto four = run_binary("sweep --d 2 --theta-grid 30", tmp);
    auto bell = run_binary("bell3 --restarts 6 --seed 3", tmp);
    ::setenv("STEERCERT_THREADS", "1", 1);
    auto bell1 = run_binary("bell3 --restarts 6 --seed 3", tmp);
    ::unsetenv("STEERCERT_THREADS");
    CHECK(one.out == four.out);
    CHECK(bell.out == bell1.out);
  }
}
