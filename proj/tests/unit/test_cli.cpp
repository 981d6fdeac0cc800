#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "skewdepth/depth.hpp"
#include "skewdepth/errors.hpp"

using namespace skewdepth;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "skewdepth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("skewdepth_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

struct Row {
  double alpha;
  int index;
  double x1, x2;
};

std::vector<Row> parse_contour(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha,index,x1,x2");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    Row r{};
    char c;
    std::istringstream ls(line);
    ls >> r.alpha >> c >> r.index >> c >> r.x1 >> c >> r.x2;
    rows.push_back(r);
  }
  return rows;
}

const std::string kSC3 = R"({"family":"sc","dimension":2,"skewness":[3,0]})";

}  // namespace

TEST_CASE("skew-Cauchy contour job traces the exact circles") {
  const fs::path dir = scratch("sc");
  const Run r = run({"contour", "--law", kSC3, "--alpha", "0.1,0.2,0.3", "--out", dir.string()});
  REQUIRE(r.status == 0);
  const auto rows = parse_contour(slurp(dir / "contour.csv"));
  REQUIRE(rows.size() == 3 * 360);
  const STParams law = STParams::canonical(2, 3.0, 1.0);
  for (const Row& row : rows) {
    const Ellipsoid e = sc_contour_exact(law, row.alpha);
    Vector x(2);
    x << row.x1, row.x2;
    const Vector d = x - e.center;
    // On the circle the quadratic form is one; radial error 1e-3 moves it by 2e-3.
    CHECK(std::abs(d.dot(e.shape * d) - 1.0) < 2e-3);
  }
  CHECK(rows[0].index == 0);
  CHECK(rows[359].index == 359);
  CHECK(rows[360].alpha == 0.2);
  fs::remove_all(dir);
}

TEST_CASE("misclassification job for a strongly skewed skew-normal law") {
  const fs::path dir = scratch("misclass");
  const Run r = run({"misclass", "--law", R"({"family":"sn","dimension":2,"skewness":[50,0]})", "--alpha", "0.05",
                     "--out", dir.string()});
  REQUIRE(r.status == 0);
  auto kv = parse_report(slurp(dir / "misclass.txt"));
  CHECK(std::abs(std::stod(kv["p_false_negative"]) - 0.036) < 0.005);
  CHECK(std::abs(std::stod(kv["p_false_positive"]) - 0.010) < 0.005);
  CHECK(kv["alpha"] == "0.05");
  CHECK(kv["grid_resolution"] == "600");
  CHECK(kv["refinement_stable"] == "1");
  for (const char* key : {"d2", "grid_x_min", "grid_x_max", "grid_y_min", "grid_y_max", "grid_cell_area"})
    CHECK(kv.count(key) == 1);
  CHECK(r.out == slurp(dir / "misclass.txt") + "wrote " + (dir / "misclass.txt").string() + "\n");
  fs::remove_all(dir);
}

TEST_CASE("sweep job columns are monotone") {
  const fs::path dir = scratch("sweep");
  const Run r = run({"sweep", "--family", "st", "--skew", "2,10", "--shape", "1,2,5,20,inf", "--out", dir.string()});
  REQUIRE(r.status == 0);
  std::istringstream in(slurp(dir / "sweep.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "family,skew,shape,d2");
  std::vector<double> d2;
  while (std::getline(in, line)) d2.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  REQUIRE(d2.size() == 10);
  for (int base : {0, 5}) {
    CHECK(d2[base] < 1e-6);
    for (int k = 1; k < 5; ++k) CHECK(d2[base + k] >= d2[base + k - 1] - 1e-9);
  }
  fs::remove_all(dir);
}

TEST_CASE("law documents") {
  SUBCASE("non positive-definite dispersion names the field") {
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"st","dimension":2,"dispersion":[1,2,1],"shape":{"nu":5}})"),
                         "dispersion: matrix is not positive-definite", DomainError);
  }
  SUBCASE("unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"st","dimension":2,"shape":{"nu":5},"scale":1})"),
                         "scale: unknown key", DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"st","dimension":2,"shape":{"nu":5,"df":3}})"),
                         "shape.df: unknown key", DomainError);
  }
  SUBCASE("range and shape errors") {
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"st","dimension":2,"shape":{"nu":-1}})"),
                         "shape.nu: degrees of freedom must be positive", DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"sn","dimension":2,"location":[0,"a"]})"),
                         "location[1]: expected a number", DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"sn","dimension":2,"skewness":[1]})"),
                         "skewness: expected 2 elements, got 1", DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"sn","dimension":0})"),
                         "dimension: expected a positive integer", DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_law_text(R"({"family":"laplace","dimension":2})"),
                         "family: expected st, sn, sc, gh, nig or gh-skew-t, got \"laplace\"", DomainError);
    CHECK_THROWS_AS(cli::parse_law_text("{\"family\":"), DomainError);
  }
  SUBCASE("NIG with unequal chi and psi is rescaled with a warning") {
    const cli::LawSpec s = cli::parse_law_text(
        R"({"family":"nig","dimension":2,"skewness":[1,0],"shape":{"chi":2,"psi":0.5}})");
    REQUIRE(s.warnings.size() == 1);
    const auto& g = std::get<GHParams>(s.law);
    CHECK(g.chi == doctest::Approx(1.0));
    CHECK(g.psi == doctest::Approx(1.0));
    CHECK(g.sigma(0, 0) == doctest::Approx(2.0));
    CHECK(g.kappa(0) == doctest::Approx(2.0));
    CHECK(cli::parse_law_text(R"({"family":"nig","dimension":2,"shape":{"chi":1,"psi":1}})").warnings.empty());
  }
  SUBCASE("families map to parameter bundles") {
    CHECK(std::isinf(std::get<STParams>(cli::parse_law_text(R"({"family":"sn","dimension":1})").law).nu));
    CHECK(std::get<STParams>(cli::parse_law_text(R"({"family":"sc","dimension":1})").law).nu == 1.0);
    CHECK(std::isinf(
        std::get<STParams>(cli::parse_law_text(R"({"family":"st","dimension":1,"shape":{"nu":"inf"}})").law).nu));
    const auto t = std::get<GHParams>(
        cli::parse_law_text(R"({"family":"gh-skew-t","dimension":2,"shape":{"nu":4}})").law);
    CHECK(t.lambda == -2.0);
    CHECK(t.chi == 4.0);
    CHECK(t.psi == 0.0);
    const auto g = std::get<GHParams>(
        cli::parse_law_text(R"({"family":"gh","dimension":2,"dispersion":[2,0.5,1],"shape":{"lambda":1,"chi":0.5,"psi":2}})")
            .law);
    CHECK(g.sigma(1, 0) == 0.5);
    CHECK(g.sigma(0, 1) == 0.5);
    CHECK(g.sigma(1, 1) == 1.0);
  }
}

TEST_CASE("linear-form law reports its canonical skewness") {
  const std::string base = R"({"family":"st","dimension":2,"location":[-2,1],"dispersion":[2.5,0.25,0.25],)";
  const std::string tail = R"(,"shape":{"nu":5}})";
  const Run exact = run({"skewness", "--law", base + R"("skewness":[-2.2360679775,2.82842712475])" + tail, "--out",
                         scratch("ex1").string()});
  REQUIRE(exact.status == 0);
  CHECK(std::stod(parse_report(exact.out)["canonical_skew"]) == doctest::Approx(3.0).epsilon(1e-9));
  // The three-decimal d is rounded, so the recovered skewness moves in the fourth digit.
  const Run rounded = run({"ellipsoid", "--law", base + R"("skewness":[-2.236,2.828])" + tail, "--out",
                           scratch("ex1r").string()});
  REQUIRE(rounded.status == 0);
  CHECK(std::abs(std::stod(parse_report(rounded.out)["canonical_skew"]) - 3.0) < 1e-3);
  fs::remove_all(scratch("ex1"));
  fs::remove_all(scratch("ex1r"));
}

TEST_CASE("outputs are deterministic") {
  const std::string law = R"({"family":"nig","dimension":2,"skewness":[2,1],"shape":{"chi":1,"psi":1}})";
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  REQUIRE(run({"sample", "--law", law, "--seed", "11", "--n", "50", "--out", a.string()}).status == 0);
  REQUIRE(run({"sample", "--law", law, "--seed", "11", "--n", "50", "--out", b.string()}).status == 0);
  CHECK(slurp(a / "sample.csv") == slurp(b / "sample.csv"));
  REQUIRE(run({"sample", "--law", law, "--seed", "12", "--n", "50", "--out", b.string()}).status == 0);
  CHECK(slurp(a / "sample.csv") != slurp(b / "sample.csv"));
  REQUIRE(run({"ed-contour", "--law", law, "--alpha", "0.2", "--vertices", "64", "--out", a.string()}).status == 0);
  REQUIRE(run({"ed-contour", "--law", law, "--alpha", "0.2", "--vertices", "64", "--out", b.string()}).status == 0);
  CHECK(slurp(a / "ed_contour.csv") == slurp(b / "ed_contour.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failures exit nonzero and leave no outputs") {
  const fs::path dir = scratch("fail");
  const Run pd = run({"depth", "--law", R"({"family":"st","dimension":2,"dispersion":[1,2,1],"shape":{"nu":5}})",
                      "--point", "0,0", "--out", dir.string()});
  CHECK(pd.status == 1);
  CHECK(pd.err.find("dispersion") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));

  const Run dim = run({"contour", "--law", R"({"family":"sn","dimension":3})", "--out", dir.string()});
  CHECK(dim.status == 1);
  CHECK(dim.err == "error: contour: requires a bivariate law\n");
  CHECK_FALSE(fs::exists(dir));

  CHECK(run({"depth", "--law", kSC3, "--point", "0,0,0", "--out", dir.string()}).status == 1);
  CHECK(run({"contour", "--law", kSC3, "--alpha", "0.1,1.5", "--out", dir.string()}).status == 1);
  CHECK(run({"sweep", "--family", "cauchy", "--skew", "1", "--shape", "1", "--out", dir.string()}).status == 1);
  CHECK_FALSE(fs::exists(dir));
  CHECK(run({"bogus"}).status != 0);
}

TEST_CASE("an unstable refinement check exits nonzero") {
  const fs::path dir = scratch("unstable");
  const Run r = run({"misclass", "--law",
                     R"({"family":"nig","dimension":2,"skewness":[15,0],"shape":{"chi":0.1,"psi":0.1}})", "--grid",
                     "10", "--out", dir.string()});
  CHECK(r.status == 2);
  CHECK(parse_report(slurp(dir / "misclass.txt"))["refinement_stable"] == "0");
  fs::remove_all(dir);
}

TEST_CASE("job parameters in the spec document") {
  const fs::path dir = scratch("job");
  fs::create_directories(dir);
  {
    std::ofstream spec(dir / "job.json");
    spec << R"({"family":"sn","dimension":2,"points":[[0,0],[1,1]],"tolerance":1e-8})";
  }
  const Run r = run({"depth", "--spec", (dir / "job.json").string(), "--out", (dir / "o").string()});
  REQUIRE(r.status == 0);
  auto kv = parse_report(slurp(dir / "o" / "depth.txt"));
  CHECK(kv["points"] == "2");
  CHECK(std::stod(kv["depth_0"]) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(kv["point_1"] == "1,1");
  // Flags override document values.
  const Run o = run({"depth", "--spec", (dir / "job.json").string(), "--point", "0.5,0", "--out", (dir / "o").string()});
  CHECK(parse_report(o.out)["points"] == "1");
  fs::remove_all(dir);
}

TEST_CASE("reverse stress and ellipsoid reports") {
  const fs::path dir = scratch("reports");
  const Run s = run({"reverse-stress", "--law", kSC3, "--weights", "1,1", "--threshold", "3", "--out", dir.string()});
  REQUIRE(s.status == 0);
  auto kv = parse_report(s.out);
  CHECK(kv["converged"] == "1");
  CHECK(kv["median_in_ruin_set"] == "0");
  const Run e = run({"ellipsoid", "--law", kSC3, "--alpha", "0.1,0.2", "--out", dir.string()});
  REQUIRE(e.status == 0);
  kv = parse_report(e.out);
  CHECK(kv["levels"] == "2");
  CHECK(kv.count("shape_1") == 1);
  CHECK(kv["canonical_skew"] == "3");
  fs::remove_all(dir);
}
