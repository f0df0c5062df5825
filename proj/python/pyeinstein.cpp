#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "einstein/report.hpp"

namespace py = pybind11;
using namespace einstein;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

SpaceKind space_of(const std::string& s) {
  if (s == "group") return SpaceKind::Group;
  if (s == "stiefel") return SpaceKind::Stiefel;
  throw std::invalid_argument("space must be 'group' or 'stiefel'");
}

MetricParams metric_of(SpaceKind space, const std::vector<double>& coeffs,
                       const std::vector<double>& gauge) {
  if (coeffs.size() != 8)
    throw std::invalid_argument("metric must be [u1,u2,u3,v4,v5,x6,x7,x8]");
  MetricParams m;
  m.space = space;
  m.u1 = coeffs[0]; m.u2 = coeffs[1]; m.u3 = coeffs[2];
  m.v4 = coeffs[3]; m.v5 = coeffs[4];
  m.x6 = coeffs[5]; m.x7 = coeffs[6]; m.x8 = coeffs[7];
  if (!gauge.empty()) {
    if (gauge.size() != 4) throw std::invalid_argument("gauge must be [a,b,c,d]");
    m.gauge = Gauge{gauge[0], gauge[1], gauge[2], gauge[3]};
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(pyeinstein, mod) {
  mod.doc() =
      "Invariant Einstein metrics on SU(l+m+n) and the complex Stiefel "
      "manifolds SU(l+m+n)/SU(n): structure constants, Ricci curvature, "
      "solvers, and classification.";

  mod.def(
      "solve",
      [](const std::string& space, int l, int m, int n, const std::string& pipeline,
         uint64_t seed, int starts) {
        SolveOptions opts;
        opts.pipeline = pipeline;
        opts.newton.seed = seed;
        opts.newton.starts = starts;
        SolveResult r = solve_auto(FlagSpec(l, m, n), space_of(space), opts);
        return json_to_py(nlohmann::json::parse(solve_result_json(r, seed)));
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"),
      py::arg("pipeline") = "auto", py::arg("seed") = 0, py::arg("starts") = 512,
      "Solve the Einstein system; returns the solutions/rejected report.");

  mod.def(
      "ricci",
      [](const std::string& space, int l, int m, int n, const std::vector<double>& metric,
         const std::vector<double>& gauge) {
        FlagSpec spec(l, m, n);
        MetricParams mp = metric_of(space_of(space), metric, gauge);
        auto rc = ricci_closed(spec, mp);
        py::dict out;
        out["r0"] = rc.r0;
        for (int k = 1; k <= 8; ++k)
          if (rc.present[size_t(k)]) out[py::str("r" + std::to_string(k))] = rc.r[size_t(k)];
        if (rc.lambda_candidate) out["lambda_candidate"] = *rc.lambda_candidate;
        return out;
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"), py::arg("metric"),
      py::arg("gauge") = std::vector<double>{},
      "Closed-form Ricci components of one invariant metric.");

  mod.def(
      "einstein_residual",
      [](const std::string& space, int l, int m, int n, const std::vector<double>& metric,
         double lam, const std::vector<double>& gauge) {
        FlagSpec spec(l, m, n);
        MetricParams mp = metric_of(space_of(space), metric, gauge);
        return einstein_residual(spec, mp, lam);
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"), py::arg("metric"),
      py::arg("lam"), py::arg("gauge") = std::vector<double>{},
      "Residual vector (r0, r_k - lambda).");

  mod.def(
      "certify",
      [](const std::string& space, int l, int m, int n, const std::vector<double>& metric,
         double lam, const std::vector<double>& gauge) {
        FlagSpec spec(l, m, n);
        SpaceKind sp = space_of(space);
        MetricParams mp = metric_of(sp, metric, gauge);
        RicciBrute engine(spec, sp);
        return engine.certify(mp, lam);
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"), py::arg("metric"),
      py::arg("lam"), py::arg("gauge") = std::vector<double>{},
      "Max-norm residual of the brute-force Ricci matrix against lambda*id.");

  mod.def(
      "constants",
      [](int l, int m, int n, const std::string& space, const std::vector<double>& gauge,
         bool brute) {
        FlagSpec spec(l, m, n);
        SpaceKind sp = space_of(space);
        GaugeQ g;
        if (!gauge.empty()) {
          if (gauge.size() != 4) throw std::invalid_argument("gauge must be [a,b,c,d]");
          g.a = rat_of_double(gauge[0]);
          g.b = rat_of_double(gauge[1]);
          g.c = rat_of_double(gauge[2]);
          g.d = rat_of_double(gauge[3]);
        }
        py::dict out;
        py::list B, Q;
        auto push = [](py::list& lst, const Triple& k, double v, const std::string& exact) {
          py::dict e;
          e["k"] = k[0];
          e["i"] = k[1];
          e["j"] = k[2];
          e["value"] = v;
          if (!exact.empty()) e["exact"] = exact;
          lst.append(e);
        };
        if (brute) {
          auto st = build_structure_tensor(spec);
          for (const auto& [k, v] : b_constants_brute(st, sp).entries)
            push(B, k, to_double(v), v.get_str());
          for (const auto& [k, v] : q_constants_brute(st, g.approx(), sp).entries)
            push(Q, k, v, "");
        } else {
          for (const auto& [k, v] : b_constants_closed(spec, sp).entries)
            push(B, k, to_double(v), v.get_str());
          for (const auto& [k, v] : q_constants_closed(spec, g, sp).entries)
            push(Q, k, v.value(), v.str());
        }
        out["B"] = B;
        out["Q"] = Q;
        return out;
      },
      py::arg("l"), py::arg("m"), py::arg("n"), py::arg("space") = "group",
      py::arg("gauge") = std::vector<double>{}, py::arg("brute") = false,
      "B- and Q-structure constant tables.");

  mod.def(
      "classify",
      [](const std::string& space, int l, int m, int n, const std::vector<double>& metric,
         const std::vector<double>& gauge, double tol) {
        FlagSpec spec(l, m, n);
        MetricParams mp = metric_of(space_of(space), metric, gauge);
        Classification c = classify_solution(spec, mp, tol);
        py::dict out;
        out["naturally_reductive"] = c.naturally_reductive;
        if (c.nr_case) out["nr_case"] = *c.nr_case;
        if (c.jensen_type) out["jensen_type"] = *c.jensen_type;
        out["tolerance_used"] = c.tolerance_used;
        return out;
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"), py::arg("metric"),
      py::arg("gauge") = std::vector<double>{}, py::arg("tol") = 1e-6,
      "Natural-reductivity / Jensen-type classification of one metric.");

  mod.def(
      "verify",
      [](const std::string& json_text, double tol) {
        RunReport rep = verify_solutions_json(json_text, tol);
        return json_to_py(nlohmann::json::parse(run_report_json(rep)));
      },
      py::arg("json_text"), py::arg("tol") = 1e-9,
      "Re-certify a JSON solution document.");

  mod.def(
      "solve_json",
      [](const std::string& space, int l, int m, int n, const std::string& pipeline,
         uint64_t seed, int starts) {
        SolveOptions opts;
        opts.pipeline = pipeline;
        opts.newton.seed = seed;
        opts.newton.starts = starts;
        SolveResult r = solve_auto(FlagSpec(l, m, n), space_of(space), opts);
        return solve_result_json(r, seed);
      },
      py::arg("space"), py::arg("l"), py::arg("m"), py::arg("n"),
      py::arg("pipeline") = "auto", py::arg("seed") = 0, py::arg("starts") = 512,
      "Like solve(), but returns the raw JSON document.");
}
