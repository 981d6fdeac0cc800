#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "skewdepth/approx.hpp"
#include "skewdepth/errors.hpp"
#include "skewdepth/expectile_depth.hpp"

namespace skewdepth::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string> kLawKeys = {"family", "dimension", "location", "dispersion", "skewness", "shape"};
const std::set<std::string> kJobKeys = {"alpha",     "points", "grid", "vertices", "seed", "tolerance",
                                        "n",         "weights", "threshold"};

[[noreturn]] void fail(const std::string& path, const std::string& why) { throw DomainError(path + ": " + why); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v(i));
  return s;
}

// A number, or the strings "inf" / "+inf" where infinity is admissible.
double number(const json& j, const std::string& path, bool allow_inf = false) {
  if (j.is_number()) return j.get<double>();
  if (allow_inf && j.is_string() && (j == "inf" || j == "+inf")) return kInf;
  fail(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

Vector number_array(const json& j, const std::string& path, int expected) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<int>(j.size()) != expected)
    fail(path, "expected " + std::to_string(expected) + " elements, got " + std::to_string(j.size()));
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    v(static_cast<Eigen::Index>(i)) = number(j[i], p);
    if (!std::isfinite(v(static_cast<Eigen::Index>(i)))) fail(p, "must be finite");
  }
  return v;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(prefix + key, "unknown key");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("spec: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("spec: malformed document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Jobs

struct Job {
  std::string command;
  std::optional<LawSpec> law;
  std::vector<double> alpha;
  std::vector<Vector> points;
  int grid = 600;
  int vertices = 360;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  DepthOptions depth;
  double contour_tolerance = 1e-4;
  Vector weights;
  std::optional<double> threshold;
  std::string family;
  std::vector<double> skews;
  std::vector<double> shapes;
  ContourMethod method = ContourMethod::Envelope;
  fs::path out_dir = ".";
};

// Output files are assembled in memory and written only once the job has
// finished, so a failing job leaves nothing behind.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

  void commit() {
    std::vector<fs::path> written;
    try {
      fs::create_directories(dir_);
      for (const auto& [name, content] : files_) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / (name + ".part");
        {
          std::ofstream out(tmp, std::ios::binary);
          out << content;
          if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
        }
        fs::rename(tmp, target);
        written.push_back(target);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& [name, content] : files_) fs::remove(dir_ / (name + ".part"), ec);
      for (const auto& p : written) fs::remove(p, ec);
      throw;
    }
  }

  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

class Report {
 public:
  void add(const std::string& key, const std::string& value) { text_ += key + "=" + value + "\n"; }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, const Vector& value) { add(key, fmt(value)); }
  void add_flag(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void append_polyline(std::string& csv, double alpha, const Matrix& vertices) {
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) {
    csv += fmt(alpha) + "," + std::to_string(i) + "," + fmt(vertices(i, 0)) + "," + fmt(vertices(i, 1)) + "\n";
  }
}

const char* kContourHeader = "alpha,index,x1,x2\n";

const CanonicalForm& need_law(const Job& job, std::optional<CanonicalForm>& cache) {
  if (!job.law) throw DomainError(job.command + ": a law is required (--spec or --law)");
  if (!cache) cache.emplace(job.law->law);
  return *cache;
}

void need_bivariate(const Job& job, const CanonicalForm& law) {
  if (law.dimension() != 2) throw DomainError(job.command + ": requires a bivariate law");
}

std::vector<double> alphas_or(const Job& job, std::vector<double> fallback) {
  return job.alpha.empty() ? fallback : job.alpha;
}

ContourOptions contour_options(const Job& job) {
  ContourOptions o;
  o.n_vertices = job.vertices;
  o.method = job.method;
  o.tolerance = job.contour_tolerance;
  o.depth = job.depth;
  return o;
}

// Boundary of an ellipsoid approximation as a closed polyline.
Matrix ellipse_polyline(const CanonicalForm& law, double alpha, int n) {
  const CanonicalEllipsoid ce = canonical_ellipsoid_approx(law, alpha);
  Matrix out(n, 2);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    Vector star(2);
    star << ce.center(0) + ce.half_axes(0) * std::cos(t), ce.center(1) + ce.half_axes(1) * std::sin(t);
    out.row(i) = law.reduction().from_canonical(star).transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands. Each returns false when a sub-computation did not converge.

bool depth_command(const Job& job, Outputs& outputs, Report& report, bool expectile) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  if (job.points.empty()) throw DomainError(job.command + ": at least one --point is required");
  bool ok = true;
  report.add("command", job.command);
  report.add("points", static_cast<double>(job.points.size()));
  for (std::size_t i = 0; i < job.points.size(); ++i) {
    const std::string k = std::to_string(i);
    const DepthResult r = expectile ? ed(law, job.points[i], job.depth) : hd(law, job.points[i], job.depth);
    report.add("point_" + k, job.points[i]);
    report.add("depth_" + k, r.depth);
    report.add_flag("converged_" + k, r.converged);
    ok = ok && r.converged;
  }
  outputs.add(expectile ? "ed.txt" : "depth.txt", report.text());
  return ok;
}

bool contour_command(const Job& job, Outputs& outputs, std::ostream& err, bool expectile) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  need_bivariate(job, law);
  std::string csv = kContourHeader;
  for (double a : alphas_or(job, {0.1, 0.2, 0.3})) {
    const ContourPolyline c =
        expectile ? ed_contour(law, a, contour_options(job)) : hd_contour(law, a, contour_options(job));
    if (c.empty) {
      err << "warning: " << job.command << ": level " << fmt(a) << " exceeds the maximal depth; set is empty\n";
      continue;
    }
    append_polyline(csv, a, c.vertices);
  }
  outputs.add(expectile ? "ed_contour.csv" : "contour.csv", csv);
  return true;
}

bool ellipsoid_command(const Job& job, Outputs& outputs, Report& report) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  const auto alphas = alphas_or(job, {0.05});
  report.add("command", job.command);
  report.add("canonical_skew", law.skew());
  report.add("levels", static_cast<double>(alphas.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const std::string k = std::to_string(i);
    const CanonicalEllipsoid ce = canonical_ellipsoid_approx(law, alphas[i]);
    const Ellipsoid e = ellipsoid_approx(law, alphas[i]);
    report.add("alpha_" + k, alphas[i]);
    report.add("center_" + k, e.center);
    report.add("shape_" + k, Vector(e.shape.transpose().reshaped()));
    report.add("canonical_center_" + k, ce.center);
    report.add("canonical_half_axes_" + k, ce.half_axes);
  }
  outputs.add("ellipsoid.txt", report.text());
  return true;
}

bool skewness_command(const Job& job, Outputs& outputs, Report& report) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  const MedianResult med = half_space_median(law, job.depth);
  const DepthResult at_cwm = hd_canonical(law, canonical_componentwise_median(law), job.depth);
  report.add("command", job.command);
  report.add("canonical_skew", law.skew());
  report.add("median", med.point);
  report.add("median_depth", med.depth);
  report.add_flag("median_multiple", med.multiple);
  report.add("d1", std::max(0.0, 0.5 - med.depth));
  report.add("d2", std::max(0.0, 0.5 - at_cwm.depth));
  report.add_flag("converged", med.converged && at_cwm.converged);
  outputs.add("skewness.txt", report.text());
  return med.converged && at_cwm.converged;
}

bool misclass_command(const Job& job, Outputs& outputs, Report& report) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  need_bivariate(job, law);
  if (job.alpha.size() > 1) throw DomainError("misclass: takes a single --alpha");
  const double alpha = alphas_or(job, {0.05}).front();
  MisclassOptions o;
  o.grid = job.grid;
  o.n_vertices = std::max(job.vertices, 720);
  o.depth = job.depth;
  const MisclassReport r = misclassification(law, alpha, o);
  const DepthResult at_cwm = hd_canonical(law, canonical_componentwise_median(law), job.depth);
  report.add("command", job.command);
  report.add("alpha", alpha);
  report.add("canonical_skew", law.skew());
  report.add("p_false_negative", r.p_false_negative);
  report.add("p_false_positive", r.p_false_positive);
  report.add("d2", std::max(0.0, 0.5 - at_cwm.depth));
  report.add("grid_resolution", static_cast<double>(r.grid.resolution));
  report.add("grid_x_min", r.grid.x_min);
  report.add("grid_x_max", r.grid.x_max);
  report.add("grid_y_min", r.grid.y_min);
  report.add("grid_y_max", r.grid.y_max);
  report.add("grid_cell_area", r.grid.cell_area);
  report.add("grid_frame", std::string("canonical"));
  report.add_flag("refinement_checked", r.refinement_checked);
  report.add("refinement_change", r.refinement_change);
  report.add_flag("refinement_stable", r.refinement_stable);
  report.add_flag("converged", at_cwm.converged);
  outputs.add("misclass.txt", report.text());
  return r.refinement_stable && at_cwm.converged;
}

SweepFamily sweep_family(const std::string& name) {
  if (name == "st") return SweepFamily::ST;
  if (name == "gh-skew-t") return SweepFamily::GHSkewT;
  if (name == "nig") return SweepFamily::NIG;
  throw DomainError("--family: expected st, gh-skew-t or nig, got \"" + name + "\"");
}

std::string sweep_csv(const std::string& family, const std::vector<SweepRow>& rows) {
  std::string csv = "family,skew,shape,d2\n";
  for (const SweepRow& r : rows) csv += family + "," + fmt(r.skew) + "," + fmt(r.shape) + "," + fmt(r.d2) + "\n";
  return csv;
}

bool sweep_command(const Job& job, Outputs& outputs) {
  if (job.family.empty()) throw DomainError("sweep: --family is required");
  if (job.skews.empty() || job.shapes.empty()) throw DomainError("sweep: --skew and --shape lists are required");
  const auto rows = d2_sweep(sweep_family(job.family), job.skews, job.shapes, job.depth);
  outputs.add("sweep.csv", sweep_csv(job.family, rows));
  return true;
}

bool sample_command(const Job& job, Outputs& outputs) {
  if (!job.law) throw DomainError("sample: a law is required (--spec or --law)");
  const Matrix draws = sample(job.law->law, job.n, job.seed);
  std::string csv;
  for (Eigen::Index j = 0; j < draws.cols(); ++j) csv += (j ? ",x" : "x") + std::to_string(j + 1);
  csv += "\n";
  for (Eigen::Index i = 0; i < draws.rows(); ++i) csv += fmt(Vector(draws.row(i).transpose())) + "\n";
  outputs.add("sample.csv", csv);
  return true;
}

bool stress_command(const Job& job, Outputs& outputs, Report& report) {
  std::optional<CanonicalForm> cache;
  const CanonicalForm& law = need_law(job, cache);
  if (job.weights.size() == 0) throw DomainError("reverse-stress: --weights is required");
  if (!job.threshold) throw DomainError("reverse-stress: --threshold is required");
  const StressResult r = reverse_stress(law, job.weights, *job.threshold, job.depth);
  report.add("command", job.command);
  report.add("weights", job.weights);
  report.add("threshold", *job.threshold);
  report.add("point", r.point);
  report.add("depth", r.depth);
  report.add_flag("median_in_ruin_set", r.median_in_ruin_set);
  report.add_flag("converged", r.converged);
  outputs.add("reverse_stress.txt", report.text());
  return r.converged;
}

std::string label(double v) {
  std::string s = fmt(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

bool figures_command(const Job& job, Outputs& outputs, Report& report, std::ostream& err) {
  const ContourOptions co = contour_options(job);
  const auto alphas = alphas_or(job, {0.1, 0.2, 0.3});
  auto contours = [&](const CanonicalForm& law, bool expectile) {
    std::string csv = kContourHeader;
    for (double a : alphas) {
      const ContourPolyline c = expectile ? ed_contour(law, a, co) : hd_contour(law, a, co);
      if (!c.empty) append_polyline(csv, a, c.vertices);
    }
    return csv;
  };
  auto ellipses = [&](const CanonicalForm& law) {
    std::string csv = kContourHeader;
    for (double a : alphas) append_polyline(csv, a, ellipse_polyline(law, a, job.vertices));
    return csv;
  };

  // The two-dimensional linear form Y = A X + b used alongside the canonical laws.
  Matrix A(2, 2);
  A << -1.0, -2.0, 0.5, -0.5;
  A *= std::sqrt(2.0) / 2.0;
  Vector b(2);
  b << -2.0, 1.0;

  for (double nu : {1.0, 5.0}) {
    const STParams x = STParams::canonical(2, 3.0, nu);
    outputs.add("hd_st_x_nu" + label(nu) + ".csv", contours(CanonicalForm(x), false));
    outputs.add("hd_st_y_nu" + label(nu) + ".csv", contours(CanonicalForm(st_linear_form(x, A, b)), false));
  }
  const STParams sn = STParams::canonical(2, 3.0, kInf);
  outputs.add("ed_sn_x.csv", contours(CanonicalForm(sn), true));
  outputs.add("ed_sn_y.csv", contours(CanonicalForm(st_linear_form(sn, A, b)), true));

  for (double nu : {3.0, 10.0}) {
    const CanonicalForm law(GHParams::canonical(2, 3.0, -0.5 * nu, nu, 0.0));
    outputs.add("hd_gh_skew_t_nu" + label(nu) + ".csv", contours(law, false));
    outputs.add("ellipsoid_gh_skew_t_nu" + label(nu) + ".csv", ellipses(law));
  }
  for (double psi : {0.1, 1.0}) {
    const CanonicalForm law(GHParams::canonical(2, 3.0, -0.5, psi, psi));
    outputs.add("hd_nig_psi" + label(psi) + ".csv", contours(law, false));
    outputs.add("ellipsoid_nig_psi" + label(psi) + ".csv", ellipses(law));
  }
  outputs.add("ed_gh_skew_t_nu10.csv", contours(CanonicalForm(GHParams::canonical(2, 3.0, -5.0, 10.0, 0.0)), true));
  outputs.add("ed_nig_psi1.csv", contours(CanonicalForm(GHParams::canonical(2, 3.0, -0.5, 1.0, 1.0)), true));

  // d2 curves against the reciprocal shape; skewness 1000 stands in for the unbounded case.
  const std::vector<double> skews = {1.0, 2.0, 3.0, 5.0, 10.0, 1000.0};
  const std::vector<double> inv_nu = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::vector<double> inv_psi = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  auto reciprocal = [](const std::vector<double>& v) {
    std::vector<double> out;
    for (double t : v) out.push_back(t > 0.0 ? 1.0 / t : kInf);
    return out;
  };
  std::vector<double> inv_nu_pos(inv_nu.begin() + 1, inv_nu.end());
  outputs.add("d2_st.csv", sweep_csv("st", d2_sweep(SweepFamily::ST, skews, reciprocal(inv_nu), job.depth)));
  outputs.add("d2_gh_skew_t.csv",
              sweep_csv("gh-skew-t", d2_sweep(SweepFamily::GHSkewT, skews, reciprocal(inv_nu_pos), job.depth)));
  outputs.add("d2_nig.csv", sweep_csv("nig", d2_sweep(SweepFamily::NIG, skews, reciprocal(inv_psi), job.depth)));

  err << "note: figures: the bond-yield scatter needs data that is not distributed; skipped\n";
  report.add("command", job.command);
  report.add("datasets", static_cast<double>(outputs.files().size()));
  for (const auto& [name, content] : outputs.files()) report.add("file", name);
  report.add("skipped", std::string("bond_yield_scatter"));
  outputs.add("figures.txt", report.text());
  return true;
}

// ---------------------------------------------------------------------------
// Option plumbing

std::vector<double> parse_list(const std::string& text, const std::string& flag, bool allow_inf = false) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    const std::string t = b == std::string::npos ? "" : item.substr(b, e - b + 1);
    if (allow_inf && (t == "inf" || t == "+inf")) {
      out.push_back(kInf);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) fail(flag, "cannot parse \"" + t + "\" as a number");
    out.push_back(v);
  }
  if (out.empty()) fail(flag, "empty list");
  return out;
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

void check_alpha(const std::vector<double>& alpha, const std::string& path) {
  for (double a : alpha) {
    if (!(a > 0.0 && a < 1.0)) fail(path, "levels must lie in (0, 1), got " + fmt(a));
  }
}

int positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(path, "expected a positive integer");
  return static_cast<int>(j.get<long long>());
}

// Job parameters that may also live in the spec document.
void apply_document_params(const json& doc, Job& job) {
  if (doc.contains("alpha")) {
    const Vector a = number_array(doc["alpha"], "alpha", -1);
    job.alpha.assign(a.data(), a.data() + a.size());
    check_alpha(job.alpha, "alpha");
  }
  if (doc.contains("points")) {
    if (!doc["points"].is_array()) fail("points", "expected an array of points");
    for (std::size_t i = 0; i < doc["points"].size(); ++i)
      job.points.push_back(number_array(doc["points"][i], "points[" + std::to_string(i) + "]", -1));
  }
  if (doc.contains("grid")) job.grid = positive_int(doc["grid"], "grid");
  if (doc.contains("vertices")) job.vertices = positive_int(doc["vertices"], "vertices");
  if (doc.contains("n")) job.n = static_cast<std::size_t>(positive_int(doc["n"], "n"));
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    job.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerance")) {
    const double t = number(doc["tolerance"], "tolerance");
    if (!(t > 0.0 && t < 1.0)) fail("tolerance", "must lie in (0, 1)");
    job.depth.tolerance = t;
  }
  if (doc.contains("weights")) job.weights = number_array(doc["weights"], "weights", -1);
  if (doc.contains("threshold")) job.threshold = number(doc["threshold"], "threshold");
}

}  // namespace

// ---------------------------------------------------------------------------
// Law documents

LawSpec parse_law(const json& doc) {
  if (!doc.is_object()) fail("spec", "expected an object");
  reject_unknown(doc, kLawKeys, "");
  if (!doc.contains("family")) fail("family", "missing");
  if (!doc["family"].is_string()) fail("family", "expected a string");
  const std::string family = doc["family"];
  if (!doc.contains("dimension")) fail("dimension", "missing");
  const int d = positive_int(doc["dimension"], "dimension");

  const Vector location = doc.contains("location") ? number_array(doc["location"], "location", d) : Vector::Zero(d);
  const Vector skewness = doc.contains("skewness") ? number_array(doc["skewness"], "skewness", d) : Vector::Zero(d);
  Matrix dispersion = Matrix::Identity(d, d);
  if (doc.contains("dispersion")) {
    const Vector tri = number_array(doc["dispersion"], "dispersion", d * (d + 1) / 2);
    Eigen::Index k = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j <= i; ++j) dispersion(i, j) = dispersion(j, i) = tri(k++);
    }
  }

  const json shape = doc.contains("shape") ? doc["shape"] : json::object();
  if (!shape.is_object()) fail("shape", "expected an object");
  auto shape_value = [&](const std::string& key, bool allow_inf = false) {
    if (!shape.contains(key)) fail("shape." + key, "missing");
    return number(shape[key], "shape." + key, allow_inf);
  };

  LawSpec spec;
  if (family == "st" || family == "sn" || family == "sc") {
    double nu = family == "sn" ? kInf : 1.0;
    if (family == "st") {
      reject_unknown(shape, {"nu"}, "shape.");
      nu = shape_value("nu", true);
      if (!(nu > 0.0)) fail("shape.nu", "degrees of freedom must be positive");
    } else {
      reject_unknown(shape, {}, "shape.");
    }
    STParams p{location, dispersion, skewness, nu};
    p.validate();
    spec.law = p;
  } else if (family == "gh") {
    reject_unknown(shape, {"lambda", "chi", "psi"}, "shape.");
    GHParams p{location, dispersion, skewness, shape_value("lambda"), shape_value("chi"), shape_value("psi")};
    p.validate();
    spec.law = p;
  } else if (family == "nig") {
    reject_unknown(shape, {"chi", "psi"}, "shape.");
    const double chi = shape_value("chi");
    const double psi = shape_value("psi");
    if (!(chi > 0.0 && std::isfinite(chi))) fail("shape.chi", "must be positive and finite");
    if (!(psi > 0.0 && std::isfinite(psi))) fail("shape.psi", "must be positive and finite");
    GHParams probe{location, dispersion, skewness, -0.5, 1.0, 1.0};
    probe.validate();
    if (chi != psi) {
      spec.warnings.push_back("nig: chi != psi; rescaled to chi = psi = " + fmt(std::sqrt(chi * psi)) +
                              " with dispersion and skewness multiplied by " + fmt(std::sqrt(chi / psi)));
    }
    spec.law = GHParams::nig(location, dispersion, skewness, chi, psi);
  } else if (family == "gh-skew-t") {
    reject_unknown(shape, {"nu"}, "shape.");
    const double nu = shape_value("nu");
    if (!(nu > 0.0 && std::isfinite(nu))) fail("shape.nu", "degrees of freedom must be positive and finite");
    spec.law = GHParams::skew_t(location, dispersion, skewness, nu);
  } else {
    fail("family", "expected st, sn, sc, gh, nig or gh-skew-t, got \"" + family + "\"");
  }
  return spec;
}

LawSpec parse_law_text(const std::string& text) { return parse_law(parse_document(text)); }

// ---------------------------------------------------------------------------
// Entry point

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Half-space and expectile depth for skew-t and generalized hyperbolic laws", "skewdepth"};
  app.require_subcommand(1);

  std::string spec_path, law_text, out_dir = ".", alpha_list, weights_list, skew_list, shape_list, family, method;
  std::vector<std::string> point_texts;
  int grid = 0, vertices = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double tolerance = 0.0, threshold = 0.0;

  struct Registered {
    CLI::App* app;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<Registered> subs;
  auto add = [&](const std::string& name, const std::string& help, std::initializer_list<std::string> extras) {
    Registered r{app.add_subcommand(name, help), {}};
    CLI::App* s = r.app;
    if (name != "sweep" && name != "figures") {
      r.opts["spec"] = s->add_option("--spec", spec_path, "law spec document (JSON)");
      r.opts["law"] = s->add_option("--law", law_text, "inline law spec document");
    }
    r.opts["out"] = s->add_option("--out", out_dir, "output directory")->capture_default_str();
    r.opts["tolerance"] = s->add_option("--tolerance", tolerance, "depth search tolerance");
    for (const std::string& e : extras) {
      if (e == "alpha") r.opts[e] = s->add_option("--alpha", alpha_list, "comma-separated levels");
      if (e == "point") r.opts[e] = s->add_option("--point", point_texts, "comma-separated point; repeatable");
      if (e == "grid") r.opts[e] = s->add_option("--grid", grid, "grid cells per axis");
      if (e == "vertices") r.opts[e] = s->add_option("--vertices", vertices, "contour vertices");
      if (e == "method") r.opts[e] = s->add_option("--method", method, "envelope or radial");
      if (e == "seed") r.opts[e] = s->add_option("--seed", seed, "random seed");
      if (e == "n") r.opts[e] = s->add_option("--n", n, "number of draws");
      if (e == "weights") r.opts[e] = s->add_option("--weights", weights_list, "comma-separated portfolio weights");
      if (e == "threshold") r.opts[e] = s->add_option("--threshold", threshold, "loss threshold");
      if (e == "family") r.opts[e] = s->add_option("--family", family, "st, gh-skew-t or nig");
      if (e == "skew") r.opts[e] = s->add_option("--skew", skew_list, "comma-separated canonical skewness values");
      if (e == "shape") r.opts[e] = s->add_option("--shape", shape_list, "comma-separated shape values");
    }
    subs.push_back(std::move(r));
  };
  add("depth", "half-space depth at points", {"point"});
  add("ed", "expectile depth at points", {"point"});
  add("contour", "half-space depth contours", {"alpha", "vertices", "method"});
  add("ed-contour", "expectile depth contours", {"alpha", "vertices", "method"});
  add("ellipsoid", "ellipsoidal approximation of depth sets", {"alpha"});
  add("skewness", "half-space median and the d1, d2 skewness indices", {});
  add("misclass", "misclassification masses of the ellipsoidal approximation", {"alpha", "grid", "vertices"});
  add("sweep", "d2 over a grid of canonical laws", {"family", "skew", "shape"});
  add("sample", "random draws", {"n", "seed"});
  add("reverse-stress", "deepest point of a ruin set", {"weights", "threshold"});
  add("figures", "datasets for the contour and d2 plots", {"alpha", "vertices"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const Registered* active = nullptr;
  for (const Registered& r : subs) {
    if (r.app->parsed()) active = &r;
  }
  auto given = [&](const std::string& key) {
    const auto it = active->opts.find(key);
    return it != active->opts.end() && it->second->count() > 0;
  };

  Job job;
  job.command = active->app->get_name();
  try {
    if (given("spec") && given("law")) throw DomainError("--spec and --law are mutually exclusive");
    if (given("spec") || given("law")) {
      const json doc = parse_document(given("spec") ? read_file(spec_path) : law_text);
      if (!doc.is_object()) fail("spec", "expected an object");
      std::set<std::string> allowed = kLawKeys;
      allowed.insert(kJobKeys.begin(), kJobKeys.end());
      reject_unknown(doc, allowed, "");
      json law_doc = json::object();
      for (const auto& [key, value] : doc.items()) {
        if (kLawKeys.count(key)) law_doc[key] = value;
      }
      job.law = parse_law(law_doc);
      apply_document_params(doc, job);
    }
    if (given("alpha")) {
      job.alpha = parse_list(alpha_list, "--alpha");
      check_alpha(job.alpha, "--alpha");
    }
    if (given("point")) {
      job.points.clear();
      for (const auto& t : point_texts) job.points.push_back(to_vector(parse_list(t, "--point")));
    }
    if (given("grid")) {
      if (grid < 10) fail("--grid", "must be at least 10");
      job.grid = grid;
    }
    if (given("vertices")) {
      if (vertices < 8) fail("--vertices", "must be at least 8");
      job.vertices = vertices;
    }
    if (given("seed")) job.seed = seed;
    if (given("n")) {
      if (n < 1) fail("--n", "must be positive");
      job.n = n;
    }
    if (given("tolerance")) {
      if (!(tolerance > 0.0 && tolerance < 1.0)) fail("--tolerance", "must lie in (0, 1)");
      job.depth.tolerance = tolerance;
      job.contour_tolerance = std::max(tolerance, 1e-10);
    }
    if (given("weights")) job.weights = to_vector(parse_list(weights_list, "--weights"));
    if (given("threshold")) job.threshold = threshold;
    if (given("family")) job.family = family;
    if (given("skew")) job.skews = parse_list(skew_list, "--skew");
    if (given("shape")) job.shapes = parse_list(shape_list, "--shape", true);
    if (given("method")) {
      if (method == "envelope") job.method = ContourMethod::Envelope;
      else if (method == "radial") job.method = ContourMethod::RadialBisection;
      else fail("--method", "expected envelope or radial");
    }
    job.out_dir = out_dir;
    if (job.law) {
      for (const auto& w : job.law->warnings) err << "warning: " << w << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  Outputs outputs(job.out_dir);
  Report report;
  bool converged = true;
  try {
    const std::string& c = job.command;
    if (c == "depth" || c == "ed") converged = depth_command(job, outputs, report, c == "ed");
    else if (c == "contour" || c == "ed-contour") converged = contour_command(job, outputs, err, c == "ed-contour");
    else if (c == "ellipsoid") converged = ellipsoid_command(job, outputs, report);
    else if (c == "skewness") converged = skewness_command(job, outputs, report);
    else if (c == "misclass") converged = misclass_command(job, outputs, report);
    else if (c == "sweep") converged = sweep_command(job, outputs);
    else if (c == "sample") converged = sample_command(job, outputs);
    else if (c == "reverse-stress") converged = stress_command(job, outputs, report);
    else if (c == "figures") converged = figures_command(job, outputs, report, err);
    outputs.commit();
  } catch (const std::exception& e) {
    const std::string what = e.what();
    const bool has_context = what.rfind(job.command + ":", 0) == 0;
    err << "error: " << (has_context ? "" : job.command + ": ") << what << "\n";
    return 1;
  }

  out << report.text();
  for (const auto& [name, content] : outputs.files()) out << "wrote " << (job.out_dir / name).string() << "\n";
  if (!converged) {
    err << "error: " << job.command << ": a sub-computation did not converge or its refinement check failed\n";
    return 2;
  }
  return 0;
}

}  // namespace skewdepth::cli
