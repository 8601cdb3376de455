#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartier/checks.hpp"
#include "cartier/parse.hpp"
#include "cartier/testmod.hpp"
#include "cartier/vfilt.hpp"

namespace py = pybind11;
using namespace cartier;

namespace {

// Everything crosses the boundary as strings, same syntax as the CLI.
struct Pair {
  CartierModule module;
  Polynomial f;
  Polynomial c;
};

Pair make_pair(std::uint32_t p, const std::string& vars, const std::string& f, const std::string& twist,
               const std::string& gens, const std::string& rels, const std::string& c) {
  Ring R = parse_ring(p, vars);
  CartierModule M = parse_module(R, twist, gens, rels);
  Polynomial fp = parse_polynomial(R, f);
  Polynomial cp = c.empty() ? suggest_test_element(M, fp) : parse_polynomial(R, c);
  return Pair{std::move(M), std::move(fp), std::move(cp)};
}

py::list gens(const FreeSubmodule& W) {
  py::list out;
  for (const auto& g : W.generators()) {
    if (W.rank() == 1) {
      out.append(g[0].to_string());
    } else {
      py::list row;
      for (const auto& x : g) row.append(x.to_string());
      out.append(row);
    }
  }
  return out;
}

py::dict report(const CheckReport& r) {
  py::list items;
  for (const auto& i : r.items) {
    py::dict d;
    d["name"] = i.name;
    d["status"] = status_name(i.status);
    d["detail"] = i.detail;
    items.append(d);
  }
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed();
  d["items"] = items;
  return d;
}

std::int64_t den_or_default(std::uint32_t p, std::int64_t den) {
  return den > 0 ? den : static_cast<std::int64_t>(p) * p * (p - 1);
}

}  // namespace

PYBIND11_MODULE(_cartier, m) {
  m.doc() = "Test modules and V-filtrations of Cartier modules over F_p[x_1..x_n]";

  static py::exception<Error> exc(m, "CartierError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr ep) {
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const Error& e) {
      py::object inst = py::handle(exc.ptr())(e.what());
      inst.attr("code") = error_code_name(e.code());
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  m.def(
      "tau",
      [](std::uint32_t p, const std::string& vars, const std::string& f, const std::string& t,
         const std::string& twist, const std::string& gens_, const std::string& rels, const std::string& c,
         const std::string& exponent) {
        if (exponent != "pe" && exponent != "pe-1")
          fail(ErrorCode::InvalidInput, "exponent must be 'pe' or 'pe-1'");
        Pair P = make_pair(p, vars, f, twist, gens_, rels, c);
        Convention conv = exponent == "pe" ? Convention::CeilPE : Convention::CeilPEMinus1;
        const Rational tr = parse_rational(t);
        std::optional<TauResult> r;
        {
          py::gil_scoped_release nogil;
          r = tau(PairSpec{P.module, P.f, tr, P.c, conv});
        }
        py::dict d;
        d["generators"] = gens(r->value);
        d["certified"] = r->certified;
        d["stabilized_at_e"] = r->stabilized_at_e;
        d["path"] = r->path;
        return d;
      },
      py::arg("p"), py::arg("vars"), py::arg("f"), py::arg("t"), py::arg("twist") = "",
      py::arg("gens") = "", py::arg("rels") = "", py::arg("c") = "", py::arg("exponent") = "pe");

  m.def(
      "fpt",
      [](std::uint32_t p, const std::string& vars, const std::string& f, std::int64_t max_den) {
        Polynomial fp = parse_polynomial(parse_ring(p, vars), f);
        py::gil_scoped_release nogil;
        return to_string(fpt(fp, max_den).value);
      },
      py::arg("p"), py::arg("vars"), py::arg("f"), py::arg("max_denominator") = 0);

  m.def(
      "jumps",
      [](std::uint32_t p, const std::string& vars, const std::string& f, const std::string& range,
         std::int64_t max_den, const std::string& twist, const std::string& gens_, const std::string& rels,
         const std::string& c) {
        Pair P = make_pair(p, vars, f, twist, gens_, rels, c);
        auto [lo, hi] = parse_range(range);
        std::vector<std::string> out;
        {
          py::gil_scoped_release nogil;
          TauContext ctx(P.module, P.f, P.c);
          for (const auto& j : jumping_numbers(ctx, lo, hi, den_or_default(p, max_den)).jumps)
            out.push_back(to_string(j));
        }
        return out;
      },
      py::arg("p"), py::arg("vars"), py::arg("f"), py::arg("range") = "0..1", py::arg("max_denominator") = 0,
      py::arg("twist") = "", py::arg("gens") = "", py::arg("rels") = "", py::arg("c") = "");

  m.def(
      "vfilt",
      [](std::uint32_t p, const std::string& vars, const std::string& f, const std::string& range,
         std::int64_t max_den, const std::string& twist, const std::string& gens_, const std::string& rels,
         const std::string& c) {
        Pair P = make_pair(p, vars, f, twist, gens_, rels, c);
        auto [lo, hi] = parse_range(range);
        std::optional<FiltrationTable> T;
        std::optional<AxiomReport> ax;
        {
          py::gil_scoped_release nogil;
          T = compute_vfiltration(P.module, P.f, lo, hi, den_or_default(p, max_den), P.c);
          ax = verify_axioms(*T);
        }
        py::list js;
        for (const auto& j : T->jumps) {
          py::dict d;
          d["t"] = to_string(j.t);
          d["value"] = gens(j.value);
          d["left"] = gens(j.left);
          js.append(d);
        }
        py::dict d;
        d["start"] = gens(T->V0);
        d["jumps"] = js;
        d["axioms_ok"] = ax->all_ok();
        return d;
      },
      py::arg("p"), py::arg("vars"), py::arg("f"), py::arg("range") = "0..1", py::arg("max_denominator") = 0,
      py::arg("twist") = "", py::arg("gens") = "", py::arg("rels") = "", py::arg("c") = "");

  m.def("check_suites", &check_suites);
  m.def("repro_targets", &repro_targets);
  m.def(
      "check",
      [](const std::string& suite, std::uint64_t seed, int cases) {
        std::optional<CheckReport> r;
        {
          py::gil_scoped_release nogil;
          r = run_check(suite, seed, cases);
        }
        return report(*r);
      },
      py::arg("suite"), py::arg("seed") = 1, py::arg("cases") = 20);
  m.def(
      "repro",
      [](const std::string& target) {
        std::optional<CheckReport> r;
        {
          py::gil_scoped_release nogil;
          r = run_repro(target);
        }
        return report(*r);
      },
      py::arg("target"));
}
