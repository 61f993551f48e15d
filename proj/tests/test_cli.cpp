#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fracpow/cli.hpp"
#include "fracpow/io.hpp"
#include "fracpow/rational.hpp"
#include "helpers.hpp"

using namespace fracpow;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fracpow_cli_" + name)).string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l))
    if (!l.empty()) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("solve reports errors against the oracle") {
  auto r = run({"solve", "--assemble", "laplace2d", "--n", "63", "--alpha", "0.5", "--method", "sinc",
                "--kprime", "0.5", "--rhs", "checkerboard", "--oracle"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["oracle"] == "uniform-spectral");
  CHECK(j["report"]["method"] == "sinc");
  CHECK(j["report"]["shiftedSolves"] == 41);
  CHECK(j["report"]["parameters"]["kprime"] == "0.5");
  const double l2 = j["report"]["errors"]["l2_rel_f"];
  CHECK(l2 > 0.0);
  CHECK(l2 < 2e-2);
  CHECK(j["report"]["errors"].contains("linf_rel_uref"));
  CHECK(j["solver"]["relTol"] == 1e-10);
}

TEST_CASE("solve writes the solution vector") {
  const auto out = temp_path("u.txt");
  auto r = run({"solve", "--assemble", "laplace1d", "--n", "31", "--alpha", "0.25", "--method", "bura",
                "--k", "6", "--out", out, "--report", temp_path("rep.json")});
  REQUIRE(r.code == 0);
  CHECK(read_vector(out).size() == 31);
  std::ifstream rep(temp_path("rep.json"));
  json j = json::parse(rep);
  CHECK(j["report"]["shiftedSolves"] == 6);
}

TEST_CASE("diffusion-reaction and pseudo-parabolic via solve") {
  auto dr = run({"solve", "--assemble", "variable1d", "--coef", "linear:1,2", "--n", "100", "--alpha",
                 "0.75", "--q", "400", "--oracle"});
  REQUIRE(dr.code == 0);
  CHECK(json::parse(dr.out)["oracle"] == "dense-spectral");
  CHECK(json::parse(dr.out)["report"]["errors"]["l2_rel_uref"].get<double>() < 1e-3);

  auto pp = run({"solve", "--assemble", "laplace1d", "--n", "63", "--method", "pseudo-parabolic",
                 "--pp-m", "2", "--pp-n", "4", "--pp-L", "3"});
  REQUIRE(pp.code == 0);
  CHECK(json::parse(pp.out)["report"]["shiftedSolves"] == 4 * 2 * 4);
}

TEST_CASE("error exits") {
  auto bad = run({"solve", "--assemble", "laplace1d", "--alpha", "1.5"});
  CHECK(bad.code == 2);
  json e = json::parse(bad.err);
  CHECK(e["error"] == "alpha out of (0,1)");

  const auto table = temp_path("bad_table.txt");
  std::ofstream(table) << "format trg\n0.5 1 1 1 1\n-1 -1\n";
  auto rej = run({"solve", "--assemble", "laplace1d", "--method", "bura", "--table", table});
  CHECK(rej.code == 3);
  CHECK(json::parse(rej.err)["kind"] == "table-rejected");

  CHECK(run({"solve"}).code == 2);
  CHECK(run({"solve", "--assemble", "laplace1d", "--matrix", "x.mtx"}).code == 2);
  CHECK(run({"solve", "--assemble", "laplace1d", "--method", "quantum"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"compare", "--assemble", "laplace1d", "--methods", ""}).code == 2);

  auto capped = run({"solve", "--assemble", "laplace2d", "--n", "31", "--method", "gauss-jacobi",
                     "--max-iter", "2"});
  CHECK(capped.code == 4);
}

TEST_CASE("compare produces a table and long form") {
  const auto longPath = temp_path("long.csv");
  auto r = run({"compare", "--assemble", "laplace1d", "--n", "127", "--alpha", "0.5", "--methods",
                "sinc,gauss-jacobi,aaa", "--counts", "9", "--long", longPath});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "method,parameter,solves,l2_rel,linf_rel,wall_s,status");
  for (int i = 1; i <= 3; ++i) {
    CHECK(rows[i].find(",9,") != std::string::npos);
    CHECK(rows[i].substr(rows[i].size() - 2) == "ok");
  }
  std::ifstream lf(longPath);
  std::stringstream ss;
  ss << lf.rdbuf();
  auto longRows = lines(ss.str());
  CHECK(longRows.size() == 4);
  CHECK(longRows[0] == "method,solves,error");
}

TEST_CASE("matched counts") {
  for (int c : {4, 9, 17, 30}) {
    auto s = cli::matched_method("sinc", 0.5, c);
    CHECK(s.sincM + s.sincN + 1 == c);
    CHECK(cli::matched_method("gauss-jacobi", 0.5, c).k == c);
    CHECK(cli::matched_method("sigma", 0.5, c).Msub - 1 == c);
    auto m = cli::matched_march(c);
    CHECK(m.n * m.m * (m.L + 1) == c);
  }
}

TEST_CASE("approx export") {
  auto r = run({"approx", "--alpha", "0.5", "--method", "sinc", "--kprime", "1"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  CHECK(ls.size() == 12);
  auto back = parse_rational(r.out);
  CHECK(back.size() == 11);
  CHECK(format_rational(back) == r.out);

  const auto path = temp_path("aaa6.txt");
  auto a = run({"approx", "--alpha", "0.5", "--method", "aaa", "--k", "6", "--lambda-min", "1",
                "--lambda-max", "1e6", "--out", path});
  REQUIRE(a.code == 0);
  auto loaded = read_rational(path);
  CHECK(loaded.size() == 6);
  // rescaled to [1, 1e6] this is the unit-interval best-approximation comparison
  CHECK(uniform_error(loaded, 0.5, 1.0, 1e6, 100000) <= 2 * 1.0747e-4);

  auto pade = run({"approx", "--alpha", "0.5", "--method", "pade", "--pp-m", "3"});
  REQUIRE(pade.code == 0);
  CHECK(parse_rational(pade.out).size() == 3);
}

TEST_CASE("assemble and spectrum round trip") {
  const auto mtx = temp_path("op.mtx");
  auto a = run({"assemble", "--assemble", "nonuniform1d", "--n", "30", "--grading", "1.7", "--out", mtx});
  REQUIRE(a.code == 0);
  CHECK(std::filesystem::exists(mtx + ".meta"));
  auto s = run({"spectrum", "--matrix", mtx});
  REQUIRE(s.code == 0);
  json j = json::parse(s.out);
  CHECK(j["boundsHold"] == true);
  auto sol = run({"solve", "--matrix", mtx, "--alpha", "0.3", "--method", "aaa", "--oracle"});
  REQUIRE(sol.code == 0);
  CHECK(json::parse(sol.out)["report"]["errors"]["l2_rel_uref"].get<double>() < 1e-6);
}

TEST_CASE("config file with flag override") {
  const auto cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"assemble": "laplace1d", "n": 15, "alpha": 0.25, "method": "gauss-jacobi", "k": 3})";
  auto r = run({"solve", "--config", cfg, "--k", "5"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["alpha"] == 0.25);
  CHECK(j["problem"]["n"] == 15);
  CHECK(j["report"]["shiftedSolves"] == 5);
}

TEST_CASE("deterministic output") {
  std::vector<std::string> args{"compare", "--assemble", "laplace1d", "--n", "63", "--methods",
                                "sinc,bura", "--counts", "5"};
  auto strip = [](const std::string& csv) {
    // wall time is the only nondeterministic column
    std::string out;
    for (const auto& l : lines(csv)) {
      std::vector<std::string> cells;
      std::stringstream ss(l);
      std::string c;
      while (std::getline(ss, c, ',')) cells.push_back(c);
      cells[5] = "";
      for (const auto& x : cells) out += x + ",";
      out += "\n";
    }
    return out;
  };
  CHECK(strip(run(args).out) == strip(run(args).out));
}
