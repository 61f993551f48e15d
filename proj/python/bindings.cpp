#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracpow/discretize.hpp"
#include "fracpow/io.hpp"
#include "fracpow/rational.hpp"
#include "fracpow/reference.hpp"
#include "fracpow/solve.hpp"
#include "fracpow/stepping.hpp"

namespace py = pybind11;
using namespace fracpow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vec to_vec(const Array& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
  return Vec(a.data(), a.data() + a.size());
}

Array to_array(const Vec& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["method"] = r.method;
  d["parameters"] = r.parameters;
  d["shifted_solves"] = r.shiftedSolves;
  d["iterations"] = r.iterations;
  d["residuals"] = r.residuals;
  d["wall_seconds"] = r.wallSeconds;
  d["failed"] = r.failed;
  d["failure"] = r.failure;
  return d;
}

MethodSpec method_from(const std::string& tag, const py::kwargs& kw) {
  MethodSpec m;
  m.tag = tag;
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    auto v = item.second;
    if (key == "kprime") m.kprime = v.cast<double>();
    else if (key == "sinc_M") m.sincM = v.cast<int>();
    else if (key == "sinc_N") m.sincN = v.cast<int>();
    else if (key == "k") m.k = v.cast<int>();
    else if (key == "tau") m.tau = v.cast<double>();
    else if (key == "kappa") m.kappa = v.cast<int>();
    else if (key == "msub") m.Msub = v.cast<int>();
    else if (key == "table") m.table = v.cast<std::string>();
    else if (key == "ext_M") m.extM = v.cast<int>();
    else if (key == "ext_Y") m.extY = v.cast<double>();
    else if (key == "ext_grading") m.extGrading = v.cast<double>();
    else if (key == "lawson_steps") m.aaa.lawsonSteps = v.cast<int>();
    else if (key == "aaa_samples") m.aaa.sampleCount = v.cast<int>();
    else if (key == "aaa_tol") m.aaa.tol = v.cast<double>();
    else throw DomainError("unknown method parameter '" + key + "'");
  }
  return m;
}

SolverConfig config(double rel_tol, int max_iter, int workers) {
  SolverConfig c;
  c.relTol = rel_tol;
  c.maxIter = max_iter;
  c.workerCount = workers;
  c.check();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fractional powers of sparse SPD operators via rational approximation";

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<TableRejected>(m, "TableRejected", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

  py::class_<DiscreteOperator>(m, "Operator")
      .def(py::init([](const std::vector<int>& rowPtr, const std::vector<int>& cols, const Array& vals,
                       const Array& mass, double lmin, double lmax) {
             const int n = static_cast<int>(rowPtr.size()) - 1;
             return DiscreteOperator(CsrMatrix(n, rowPtr, cols, to_vec(vals)), to_vec(mass), lmin, lmax);
           }),
           py::arg("row_ptr"), py::arg("cols"), py::arg("values"), py::arg("mass"),
           py::arg("lambda_min"), py::arg("lambda_max"))
      .def_property_readonly("dimension", &DiscreteOperator::dimension)
      .def_property_readonly("lambda_min", &DiscreteOperator::lambdaMin)
      .def_property_readonly("lambda_max", &DiscreteOperator::lambdaMax)
      .def_property_readonly("bounds_source",
                             [](const DiscreteOperator& op) { return toString(op.boundsSource()); })
      .def_property_readonly("mass", [](const DiscreteOperator& op) { return to_array(op.massDiag()); })
      .def("matvec", [](const DiscreteOperator& op, const Array& x) { return to_array(matvec(op, to_vec(x))); })
      .def("dense", [](const DiscreteOperator& op) {
        const int n = op.dimension();
        py::array_t<double> out({n, n});
        auto r = out.mutable_unchecked<2>();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) r(i, j) = op.stiffness().at(i, j);
        return out;
      }, "stiffness matrix S as a dense array");

  m.def("laplace1d", [](int n) {
    auto op = assemble_1d_variable(Vec(n + 1, 1.0));
    auto [lo, hi] = extreme_eigs_uniform(n, 1);
    return op.withBounds(lo, hi, BoundsSource::Analytic);
  }, py::arg("n"));
  m.def("laplace2d", &assemble_2d_laplacian, py::arg("n"));
  m.def("variable1d", [](const Array& faces) { return assemble_1d_variable(to_vec(faces)); },
        py::arg("face_coefficients"));
  m.def("nonuniform1d", [](const Array& nodes) { return assemble_1d_nonuniform(Mesh1D(to_vec(nodes))); },
        py::arg("nodes"));
  m.def("extreme_eigs_uniform", &extreme_eigs_uniform, py::arg("n"), py::arg("d"));
  m.def("read_matrix_market", &read_matrix_market, py::arg("path"));
  m.def("write_matrix_market", &write_matrix_market, py::arg("path"), py::arg("op"));

  py::class_<PartialFractionRational>(m, "Rational")
      .def_readonly("alpha", &PartialFractionRational::alpha)
      .def_readonly("c0", &PartialFractionRational::c0)
      .def_readonly("prefactor", &PartialFractionRational::prefactor)
      .def_readonly("matrix_scale", &PartialFractionRational::matrixScale)
      .def_readonly("method", &PartialFractionRational::method)
      .def_property_readonly("residues", [](const PartialFractionRational& r) {
        Vec v;
        for (const auto& t : r.terms) v.push_back(t.residue);
        return to_array(v);
      })
      .def_property_readonly("poles", [](const PartialFractionRational& r) {
        Vec v;
        for (const auto& t : r.terms) v.push_back(t.pole);
        return to_array(v);
      })
      .def("__len__", &PartialFractionRational::size)
      .def("__call__", [](const PartialFractionRational& r, double z) { return eval_rational(r, z); })
      .def("to_text", &format_rational)
      .def_static("from_text", [](const std::string& s) { return parse_rational(s); });

  m.def("build_rational", [](const DiscreteOperator& op, double alpha, const std::string& method,
                             const py::kwargs& kw) { return build_rational(op, alpha, method_from(method, kw)); },
        py::arg("op"), py::arg("alpha"), py::arg("method") = "aaa");
  m.def("sinc_quadrature", [](double alpha, double kprime) {
    return sinc_quadrature(SincSpec::automatic(alpha, kprime));
  }, py::arg("alpha"), py::arg("kprime"));
  m.def("gauss_jacobi", &gauss_jacobi, py::arg("alpha"), py::arg("k"), py::arg("lambda_min"),
        py::arg("lambda_max"), py::arg("tau") = 0.0);
  m.def("sigma_quadrature", &sigma_quadrature, py::arg("alpha"), py::arg("kappa"), py::arg("msub"),
        py::arg("lambda_ref") = 1.0);
  m.def("aaa_rational", [](double alpha, double ratio, int degree, int lawson) {
    AaaOptions opt;
    opt.maxDegree = degree;
    opt.lawsonSteps = lawson;
    return aaa_rational(alpha, ratio, opt);
  }, py::arg("alpha"), py::arg("ratio"), py::arg("degree") = 8, py::arg("lawson_steps") = 20);
  m.def("bura_table", [](double alpha, int k) { return bura_from_table(bura_table_path(alpha, k)).rational; },
        py::arg("alpha"), py::arg("k"));
  m.def("extension_eigen", [](double alpha, int M, double Y, double grading) {
    return extension_eigen({alpha, M, Y, grading});
  }, py::arg("alpha"), py::arg("M") = 40, py::arg("Y") = 7.0, py::arg("grading") = 3.0);
  m.def("pade", [](double alpha, int degree) { return pade_table(alpha, degree).fractions; },
        py::arg("alpha"), py::arg("m"));
  m.def("ura_transform", &ura_transform, py::arg("r"), py::arg("q2"));
  m.def("uniform_error", py::overload_cast<const PartialFractionRational&, double, double, double, int, bool>(
                             &uniform_error),
        py::arg("r"), py::arg("alpha"), py::arg("lo"), py::arg("hi"), py::arg("points") = 20000,
        py::arg("relative") = false);

  m.def("fractional_solve", [](const DiscreteOperator& op, double alpha, const Array& f,
                               const std::string& method, double rel_tol, int max_iter, int workers,
                               const py::kwargs& kw) {
    auto [u, rep] = fractional_solve(op, alpha, method_from(method, kw), to_vec(f),
                                     config(rel_tol, max_iter, workers));
    return py::make_tuple(to_array(u), report_dict(rep));
  }, py::arg("op"), py::arg("alpha"), py::arg("f"), py::arg("method") = "aaa", py::arg("rel_tol") = 1e-10,
        py::arg("max_iter") = 20000, py::arg("workers") = 1);
  m.def("diffusion_reaction_solve", [](const DiscreteOperator& op, double alpha, double q, const Array& f,
                                       double rel_tol) {
    auto [u, rep] = diffusion_reaction_solve(op, alpha, q, to_vec(f), config(rel_tol, 20000, 1));
    return py::make_tuple(to_array(u), report_dict(rep));
  }, py::arg("op"), py::arg("alpha"), py::arg("q"), py::arg("f"), py::arg("rel_tol") = 1e-10);
  m.def("apply_fractional_power", [](const DiscreteOperator& op, double alpha, const Array& f) {
    return to_array(apply_fractional_power(op, alpha, to_vec(f), SolverConfig{}));
  }, py::arg("op"), py::arg("alpha"), py::arg("f"));
  m.def("pseudo_parabolic_solve", [](const DiscreteOperator& op, double alpha, const Array& f, int m_, int n,
                                     int L) {
    const double delta = op.lambdaMin();
    if (L < 0) L = default_levels(op.lambdaMax(), delta);
    auto [u, rep] = pseudo_parabolic_march(op, alpha, delta, m_, graded_time_mesh(L, n), to_vec(f),
                                           SolverConfig{});
    return py::make_tuple(to_array(u), report_dict(rep));
  }, py::arg("op"), py::arg("alpha"), py::arg("f"), py::arg("m") = 2, py::arg("n") = 8, py::arg("L") = -1);

  m.def("dense_spectral_solve", [](const DiscreteOperator& op, double alpha, const Array& f, double q) {
    return to_array(dense_spectral_solve(op, alpha, to_vec(f), q));
  }, py::arg("op"), py::arg("alpha"), py::arg("f"), py::arg("q") = 0.0);
  m.def("uniform_spectral_solve", [](int n, int d, double alpha, const Array& f, double q) {
    return to_array(uniform_spectral_solve(n, d, alpha, to_vec(f), q));
  }, py::arg("n"), py::arg("d"), py::arg("alpha"), py::arg("f"), py::arg("q") = 0.0);
  m.def("checkerboard", [](int n, int d) { return to_array(checkerboard_rhs(n, d)); }, py::arg("n"),
        py::arg("d") = 2);
}
