#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewdepth/approx.hpp"
#include "skewdepth/errors.hpp"
#include "skewdepth/expectile_depth.hpp"

namespace py = pybind11;
using namespace skewdepth;

namespace {

void add_laws(py::module_& m) {
  py::class_<STParams>(m, "STParams")
      .def(py::init([](Vector xi, Matrix omega, Vector gamma, double nu) {
             STParams p{std::move(xi), std::move(omega), std::move(gamma), nu};
             p.validate();
             return p;
           }),
           py::arg("location"), py::arg("dispersion"), py::arg("skewness"), py::arg("nu"))
      .def_static("canonical", &STParams::canonical, py::arg("dimension"), py::arg("skew"), py::arg("nu"))
      .def_readonly("location", &STParams::xi)
      .def_readonly("dispersion", &STParams::omega)
      .def_readonly("skewness", &STParams::gamma)
      .def_readonly("nu", &STParams::nu)
      .def_property_readonly("dimension", &STParams::dimension)
      .def("pdf", &st_pdf)
      .def("log_pdf", &st_log_pdf);

  py::class_<GHParams>(m, "GHParams")
      .def(py::init([](Vector mu, Matrix sigma, Vector kappa, double lambda, double chi, double psi) {
             GHParams p{std::move(mu), std::move(sigma), std::move(kappa), lambda, chi, psi};
             p.validate();
             return p;
           }),
           py::arg("location"), py::arg("dispersion"), py::arg("skewness"), py::arg("lambda_"), py::arg("chi"),
           py::arg("psi"))
      .def_static("canonical", &GHParams::canonical, py::arg("dimension"), py::arg("skew"), py::arg("lambda_"),
                  py::arg("chi"), py::arg("psi"))
      .def_static("nig", &GHParams::nig, py::arg("location"), py::arg("dispersion"), py::arg("skewness"),
                  py::arg("chi"), py::arg("psi"))
      .def_static("skew_t", &GHParams::skew_t, py::arg("location"), py::arg("dispersion"), py::arg("skewness"),
                  py::arg("nu"))
      .def_readonly("location", &GHParams::mu)
      .def_readonly("dispersion", &GHParams::sigma)
      .def_readonly("skewness", &GHParams::kappa)
      .def_readonly("lambda_", &GHParams::lambda)
      .def_readonly("chi", &GHParams::chi)
      .def_readonly("psi", &GHParams::psi)
      .def_property_readonly("dimension", &GHParams::dimension)
      .def("pdf", &gh_pdf)
      .def("log_pdf", &gh_log_pdf);

  py::class_<CanonicalForm>(m, "CanonicalForm")
      .def(py::init<const STParams&>())
      .def(py::init<const GHParams&>())
      .def_property_readonly("dimension", &CanonicalForm::dimension)
      .def_property_readonly("skew", &CanonicalForm::skew)
      .def_property_readonly("A", [](const CanonicalForm& c) { return c.reduction().A; })
      .def_property_readonly("b", [](const CanonicalForm& c) { return c.reduction().b; })
      .def("to_canonical", [](const CanonicalForm& c, const Vector& x) { return c.reduction().to_canonical(x); })
      .def("from_canonical", [](const CanonicalForm& c, const Vector& x) { return c.reduction().from_canonical(x); })
      .def("canonical_mean", &CanonicalForm::canonical_mean);
  // Depth functions accept a parameter bundle wherever a canonical form is expected.
  py::implicitly_convertible<STParams, CanonicalForm>();
  py::implicitly_convertible<GHParams, CanonicalForm>();

  m.def("sample", [](const CanonicalForm& law, std::size_t n, std::uint64_t seed) { return sample(law.law(), n, seed); },
        py::arg("law"), py::arg("n"), py::arg("seed"));
  m.def("linear_form", &st_linear_form, py::arg("law"), py::arg("A"), py::arg("b"));
  m.def("linear_form", &gh_linear_form, py::arg("law"), py::arg("A"), py::arg("b"));
}

void add_depth(py::module_& m) {
  py::class_<DepthOptions>(m, "DepthOptions")
      .def(py::init<>())
      .def_readwrite("grid", &DepthOptions::grid)
      .def_readwrite("max_phases", &DepthOptions::max_phases)
      .def_readwrite("tolerance", &DepthOptions::tolerance);

  py::class_<DepthResult>(m, "DepthResult")
      .def_readonly("depth", &DepthResult::depth)
      .def_readonly("converged", &DepthResult::converged)
      .def_readonly("direction", &DepthResult::direction);

  py::class_<MedianResult>(m, "MedianResult")
      .def_readonly("point", &MedianResult::point)
      .def_readonly("depth", &MedianResult::depth)
      .def_readonly("multiple", &MedianResult::multiple)
      .def_readonly("converged", &MedianResult::converged);

  py::class_<StressResult>(m, "StressResult")
      .def_readonly("point", &StressResult::point)
      .def_readonly("depth", &StressResult::depth)
      .def_readonly("median_in_ruin_set", &StressResult::median_in_ruin_set)
      .def_readonly("converged", &StressResult::converged);

  py::class_<ContourPolyline>(m, "Contour")
      .def_readonly("alpha", &ContourPolyline::alpha)
      .def_readonly("empty", &ContourPolyline::empty)
      .def_readonly("vertices", &ContourPolyline::vertices)
      .def_readonly("anchor", &ContourPolyline::anchor)
      .def("contains", &ContourPolyline::contains);

  py::class_<Ellipsoid>(m, "Ellipsoid")
      .def_readonly("center", &Ellipsoid::center)
      .def_readonly("shape", &Ellipsoid::shape)
      .def("contains", &Ellipsoid::contains);

  const auto opts = py::arg("options") = DepthOptions{};
  m.def("hd", &hd, py::arg("law"), py::arg("x"), opts);
  m.def("ed", &ed, py::arg("law"), py::arg("x"), opts);
  m.def("half_space_median", &half_space_median, py::arg("law"), opts);
  m.def("ed_maximizer", &ed_maximizer, py::arg("law"), opts);
  m.def("d1", &d1, py::arg("law"), opts);
  m.def("d2", &d2, py::arg("law"), opts);
  m.def("reverse_stress", &reverse_stress, py::arg("law"), py::arg("weights"), py::arg("threshold"), opts);
  m.def("sc_contour_exact", &sc_contour_exact, py::arg("law"), py::arg("alpha"));
  m.def("expectile_support_value",
        [](const CanonicalForm& law, const Vector& u, double theta) { return expectile_support_value(law.law(), u, theta); },
        py::arg("law"), py::arg("u"), py::arg("theta"));

  auto contour = [](bool expectile) {
    return [expectile](const CanonicalForm& law, double alpha, int n_vertices) {
      ContourOptions o;
      o.n_vertices = n_vertices;
      return expectile ? ed_contour(law, alpha, o) : hd_contour(law, alpha, o);
    };
  };
  m.def("hd_contour", contour(false), py::arg("law"), py::arg("alpha"), py::arg("n_vertices") = 360);
  m.def("ed_contour", contour(true), py::arg("law"), py::arg("alpha"), py::arg("n_vertices") = 360);
}

void add_approx(py::module_& m) {
  py::class_<GridSpec>(m, "GridSpec")
      .def_readonly("resolution", &GridSpec::resolution)
      .def_readonly("x_min", &GridSpec::x_min)
      .def_readonly("x_max", &GridSpec::x_max)
      .def_readonly("y_min", &GridSpec::y_min)
      .def_readonly("y_max", &GridSpec::y_max)
      .def_readonly("cell_area", &GridSpec::cell_area);

  py::class_<MisclassReport>(m, "MisclassReport")
      .def_readonly("alpha", &MisclassReport::alpha)
      .def_readonly("p_false_negative", &MisclassReport::p_false_negative)
      .def_readonly("p_false_positive", &MisclassReport::p_false_positive)
      .def_readonly("grid", &MisclassReport::grid)
      .def_readonly("refinement_stable", &MisclassReport::refinement_stable)
      .def_readonly("refinement_change", &MisclassReport::refinement_change);

  py::enum_<SweepFamily>(m, "SweepFamily")
      .value("ST", SweepFamily::ST)
      .value("GH_SKEW_T", SweepFamily::GHSkewT)
      .value("NIG", SweepFamily::NIG);

  m.def("ellipsoid_approx", &ellipsoid_approx, py::arg("law"), py::arg("alpha"));
  m.def(
      "misclassification",
      [](const CanonicalForm& law, double alpha, int grid, bool refinement_check) {
        MisclassOptions o;
        o.grid = grid;
        o.refinement_check = refinement_check;
        return misclassification(law, alpha, o);
      },
      py::arg("law"), py::arg("alpha"), py::arg("grid") = 600, py::arg("refinement_check") = true);
  m.def(
      "d2_sweep",
      [](SweepFamily family, const std::vector<double>& skews, const std::vector<double>& shapes) {
        std::vector<std::tuple<double, double, double>> rows;
        for (const SweepRow& r : d2_sweep(family, skews, shapes)) rows.emplace_back(r.skew, r.shape, r.d2);
        return rows;
      },
      py::arg("family"), py::arg("skews"), py::arg("shapes"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Half-space and expectile depth for skew-t and generalized hyperbolic laws";
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  add_laws(m);
  add_depth(m);
  add_approx(m);
}
