#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "v2v/analysis.hpp"
#include "v2v/endogenous.hpp"
#include "v2v/errors.hpp"
#include "v2v/exogenous.hpp"
#include "v2v/montecarlo.hpp"

namespace py = pybind11;
using namespace v2v;

namespace {

py::dict result_dict(const EquilibriumResult& res) {
  py::dict d;
  d["model"] = std::string(to_string(res.model));
  d["mode"] = res.exogenous ? "exogenous" : "endogenous";
  d["p_accident"] = res.p_accident;
  d["p_signal"] = res.p_signal;
  d["social_cost"] = res.social_cost;
  d["residual"] = res.residual;
  d["family"] = res.family ? py::object(py::str(std::string(to_string(*res.family)))) : py::none();
  py::list tied;
  for (AgentType t : res.indifferent) tied.append(std::string(to_string(t)));
  d["indifferent"] = tied;
  py::dict profile;
  for (AgentType t : agent_types(res.model)) {
    for (Strategy s : strategies_for(res.model, t)) {
      profile[py::str(std::string(to_string(t)) + "/" + std::string(to_string(s)))] =
          res.profile.mass(t, s);
    }
  }
  d["profile"] = profile;
  return d;
}

std::vector<AgentModel> models_from(const std::vector<std::string>& names) {
  std::vector<AgentModel> out;
  for (const std::string& n : names) out.push_back(parse_agent_model(n));
  return out;
}

GameInstance make_instance(double beta, double y, double r, const Curve& t, const Curve& f,
                           const Curve& p, std::optional<double> exo_p) {
  GameInstance g;
  g.beta = beta;
  g.y = y;
  g.r = r;
  g.exo_p = exo_p;
  g.curves = ModelCurves{t, f, p};
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Equilibria and social cost of the V2V hazard-warning game";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<StatisticalFailure>(m, "StatisticalFailure", base.ptr());
  (void)validation;

  py::class_<Curve>(m, "Curve")
      .def(py::init([](const std::string& family, std::vector<double> params) {
             return Curve(parse_curve_family(family), std::move(params));
           }),
           py::arg("family"), py::arg("params"))
      .def_static("parse", &Curve::parse)
      .def_static("affine", &Curve::affine, py::arg("intercept"), py::arg("slope"))
      .def_static("constant", &Curve::constant)
      .def_static("power", &Curve::power, py::arg("intercept"), py::arg("scale"), py::arg("exponent"))
      .def_static("piecewise", &Curve::piecewise)
      .def("__call__", &Curve::operator())
      .def("inverse", &Curve::inverse)
      .def_property_readonly("family", [](const Curve& c) { return std::string(to_string(c.family())); })
      .def_property_readonly("params", &Curve::params)
      .def("__repr__", [](const Curve& c) { return "Curve('" + c.to_spec() + "')"; })
      .def("__str__", &Curve::to_spec);

  py::class_<GameInstance>(m, "GameInstance")
      .def(py::init(&make_instance), py::arg("beta"), py::arg("y"), py::arg("r"), py::arg("t"),
           py::arg("f"), py::arg("p"), py::arg("exo_p") = py::none())
      .def_readwrite("beta", &GameInstance::beta)
      .def_readwrite("y", &GameInstance::y)
      .def_readwrite("r", &GameInstance::r)
      .def_readwrite("exo_p", &GameInstance::exo_p)
      .def_property_readonly("t", [](const GameInstance& g) { return g.curves.t_curve; })
      .def_property_readonly("f", [](const GameInstance& g) { return g.curves.f_curve; })
      .def_property_readonly("p", [](const GameInstance& g) { return g.curves.p_curve; })
      .def("validate", [](const GameInstance& g) { validate_instance(g); })
      .def("with_beta", &GameInstance::with_beta);

  m.def("compute_thresholds", [](double beta, double r, double t, double f) {
    const Thresholds th = compute_thresholds(beta, r, t, f);
    return py::make_tuple(th.p_vs, th.p_n, th.p_vu);
  }, py::arg("beta"), py::arg("r"), py::arg("t"), py::arg("f"),
        "Returns (p_vs, p_n, p_vu).");

  m.def("classify_family", [](const GameInstance& g) {
    return std::string(to_string(classify_family(g)));
  });

  m.def("solve", [](const GameInstance& g, const std::string& model) {
    return result_dict(solve(g, parse_agent_model(model)));
  }, py::arg("instance"), py::arg("model") = "nonbayesian");

  m.def("solve_exogenous", [](const GameInstance& g, const std::string& model, bool most_careful) {
    return result_dict(solve_exogenous(g, parse_agent_model(model),
                                       most_careful ? TiePolicy::kMostCareful : TiePolicy::kMostReckless));
  }, py::arg("instance"), py::arg("model") = "nonbayesian", py::arg("most_careful") = true);

  m.def("sweep_beta", [](const GameInstance& g, std::vector<double> grid,
                         const std::vector<std::string>& models) {
    const std::vector<AgentModel> ms = models_from(models);
    const ProbabilityMode mode = g.exogenous() ? ProbabilityMode::kExogenous : ProbabilityMode::kEndogenous;
    const ProbabilityMode modes[] = {mode};
    SweepResult sweep;
    {
      py::gil_scoped_release release;
      sweep = sweep_beta(g, std::move(grid), ms, modes);
    }
    py::list rows;
    for (const SweepRow& row : sweep.rows) {
      py::dict d = result_dict(row.result);
      d["beta"] = row.beta;
      rows.append(d);
    }
    py::dict out;
    out["rows"] = rows;
    if (mode == ProbabilityMode::kExogenous) out["monotone"] = certify_monotonicity(sweep).pass;
    return out;
  }, py::arg("instance"), py::arg("grid"),
        py::arg("models") = std::vector<std::string>{"bayesian", "nonbayesian"});

  m.def("search_paradox", [](std::optional<std::vector<double>> ys,
                             std::optional<std::vector<double>> rs,
                             std::optional<std::vector<double>> p_intercepts,
                             std::optional<std::vector<double>> p_slopes) {
    ParadoxSearchSpace space = default_paradox_space();
    if (ys) space.ys = *ys;
    if (rs) space.rs = *rs;
    if (p_intercepts) space.p_intercepts = *p_intercepts;
    if (p_slopes) space.p_slopes = *p_slopes;
    std::vector<ParadoxCertificate> certs;
    {
      py::gil_scoped_release release;
      certs = search_paradox(space);
    }
    py::list out;
    for (const ParadoxCertificate& c : certs) {
      py::dict d;
      d["y"] = c.instance.y;
      d["r"] = c.instance.r;
      d["p"] = c.instance.curves.p_curve;
      d["beta1"] = c.beta1;
      d["beta2"] = c.beta2;
      d["cost1"] = c.cost1;
      d["cost2"] = c.cost2;
      d["margin"] = c.margin;
      out.append(d);
    }
    return out;
  }, py::arg("ys") = py::none(), py::arg("rs") = py::none(), py::arg("p_intercepts") = py::none(),
        py::arg("p_slopes") = py::none());

  m.def("random_instance", [](std::uint64_t seed, const std::string& mode) {
    std::mt19937_64 rng(seed);
    return random_instance(rng, parse_probability_mode(mode));
  }, py::arg("seed"), py::arg("mode") = "endogenous");

  m.def("certify_equivalence", [](const std::vector<GameInstance>& instances) {
    EquivalenceReport rep;
    {
      py::gil_scoped_release release;
      rep = certify_equivalence(instances);
    }
    py::dict d;
    d["pass"] = rep.pass;
    d["count"] = rep.count;
    d["max_cost_gap"] = rep.max_cost_gap;
    d["max_probability_gap"] = rep.max_probability_gap;
    return d;
  });

  m.def("monte_carlo_estimate", [](const GameInstance& g, double p_accident, std::uint64_t samples,
                                   std::uint64_t seed) {
    MonteCarloReport rep;
    {
      py::gil_scoped_release release;
      rep = monte_carlo_estimate(g, p_accident, samples, seed);
    }
    py::list rows;
    for (const StrategyEstimate& e : rep.estimates) {
      py::dict d;
      d["model"] = std::string(to_string(e.model));
      d["type"] = std::string(to_string(e.type));
      d["strategy"] = std::string(to_string(e.strategy));
      d["analytic"] = e.analytic;
      d["empirical"] = e.empirical;
      d["std_error"] = e.std_error;
      d["z"] = e.z;
      rows.append(d);
    }
    py::dict out;
    out["pass"] = rep.pass;
    out["estimates"] = rows;
    return out;
  }, py::arg("instance"), py::arg("p_accident"), py::arg("samples"), py::arg("seed"));
}
