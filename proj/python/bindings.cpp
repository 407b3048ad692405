#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "groves/analysis.hpp"
#include "groves/auction.hpp"
#include "groves/cli.hpp"
#include "groves/transforms.hpp"

namespace py = pybind11;
using namespace groves;

// Exact values cross the boundary as "p/q" strings; the Python package turns
// them into fractions.Fraction.

namespace {

Tuple tuple_of(const std::vector<std::string>& values) {
  Tuple out;
  for (const auto& v : values) out.push_back(parse_rational(v));
  return out;
}

std::vector<std::string> strings_of(const Tuple& values) {
  std::vector<std::string> out;
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Setting setting_of(const py::dict& d) {
  const auto get = [&](const char* key) { return py::str(d[key]).cast<std::string>(); };
  const std::string domain = d.contains("domain") ? get("domain") : "auction";
  if (domain == "auction") {
    return AuctionSetting::make(d["n"].cast<std::size_t>(), d["m"].cast<std::size_t>(),
                                parse_rational(get("L")), parse_rational(get("U")));
  }
  if (domain != "public") throw ArgumentError("unknown domain '" + domain + "'");
  const Rational cost = parse_rational(get("cost"));
  if (d.contains("shares")) {
    return PublicProjectSetting::make(cost, tuple_of(d["shares"].cast<std::vector<std::string>>()));
  }
  return PublicProjectSetting::equal_shares(d["n"].cast<std::size_t>(), cost);
}

GridSpec grid_of(const Setting& s, const std::vector<std::string>& points) {
  return GridSpec::make(s, tuple_of(points));
}

py::object witness(const std::optional<analysis::Witness>& w) {
  if (!w) return py::none();
  py::dict out;
  out["profile"] = strings_of(w->profile);
  out["agent"] = w->agent ? py::cast(*w->agent) : py::none();
  return out;
}

const char* status_name(analysis::LpStatus s) {
  switch (s) {
    case analysis::LpStatus::NoImprovement:
      return "NoImprovement";
    case analysis::LpStatus::ImprovementFound:
      return "ImprovementFound";
    case analysis::LpStatus::BaseInfeasible:
      return "BaseInfeasible";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Groves mechanism evaluation (rationals as 'p/q' strings)";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_KeyError);
  py::register_exception<UnsupportedStrategy>(m, "UnsupportedStrategy", PyExc_TypeError);
  py::register_exception<cli::UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("oel_coefficients", [](const py::dict& setting, std::size_t k) {
    const auto s = std::get<AuctionSetting>(setting_of(setting));
    const auto c = auction::oel_coefficients(s, auction::make_oel_index(s, k));
    return py::make_tuple(to_string(c.constant), strings_of(c.slopes));
  });

  m.def("evaluate", [](const py::dict& setting, const std::string& mech,
                       const std::vector<std::string>& profile) {
    const Setting s = setting_of(setting);
    const Mechanism mm = cli::parse_mechanism(mech, s);
    const TaxReport r = evaluate(s, mm, TypeProfile(s, tuple_of(profile)));
    py::dict out;
    if (const auto* a = std::get_if<AuctionDecision>(&r.decision)) {
      out["winners"] = a->winners;
    } else {
      out["build"] = std::get<ProjectDecision>(r.decision).build;
    }
    out["taxes"] = strings_of(r.taxes);
    out["total_tax"] = to_string(r.total_tax);
    out["utilities"] = strings_of(r.utilities);
    out["welfare"] = to_string(r.welfare);
    return out;
  });

  m.def("compare", [](const py::dict& setting, const std::string& a, const std::string& b,
                      const std::vector<std::string>& grid) {
    const Setting s = setting_of(setting);
    const GridSpec g = grid_of(s, grid);
    const auto r = analysis::compare(s, cli::parse_mechanism(a, s, g), cli::parse_mechanism(b, s, g), g);
    py::dict out;
    out["dominates"] = r.dominates == analysis::Verdict::Yes;
    out["welfare_dominates"] = r.welfare_dominates == analysis::Verdict::Yes;
    out["equal"] = r.equal;
    out["strict_witness"] = witness(r.strict_witness);
    out["violation_witness"] = witness(r.violation_witness);
    out["profiles"] = r.profiles;
    return out;
  });

  m.def("check_feasible", [](const py::dict& setting, const std::string& mech,
                             const std::vector<std::string>& grid) {
    const Setting s = setting_of(setting);
    const GridSpec g = grid_of(s, grid);
    return analysis::check_feasible(s, cli::parse_mechanism(mech, s, g), g).feasible;
  });

  m.def("check_pay_only", [](const py::dict& setting, const std::string& mech,
                             const std::vector<std::string>& grid) {
    const Setting s = setting_of(setting);
    const GridSpec g = grid_of(s, grid);
    return analysis::check_pay_only(s, cli::parse_mechanism(mech, s, g), g).pay_only;
  });

  m.def("bcgc_surplus", [](const py::dict& setting, const std::string& mech, std::size_t agent,
                           const std::vector<std::string>& others) {
    const Setting s = setting_of(setting);
    return to_string(transforms::bcgc_surplus(s, cli::parse_mechanism(mech, s), agent,
                                              tuple_of(others), SurplusStrategy::exact()));
  });

  m.def("classify", [](const py::dict& setting, const std::vector<std::string>& coeffs) {
    const auto s = std::get<AuctionSetting>(setting_of(setting));
    const Tuple all = tuple_of(coeffs);
    if (all.size() != s.n) throw ArgumentError("classify needs n coefficients a0..a_{n-1}");
    const auto c = analysis::classify_linear(s, {all.front(), Tuple(all.begin() + 1, all.end())});
    py::dict out;
    using K = analysis::Classification::Kind;
    out["kind"] = c.kind == K::Infeasible ? "Infeasible"
                  : c.kind == K::Dominated ? "Dominated"
                                           : "UndominatedOEL";
    out["oel_index"] = c.oel_index ? py::cast(*c.oel_index) : py::none();
    out["slack"] = to_string(c.slack);
    out["witness"] = strings_of(c.witness);
    return out;
  });

  m.def(
      "search",
      [](const py::dict& setting, const std::string& mech, const std::vector<std::string>& grid,
         const std::string& kind, bool pay_only) {
        const Setting s = setting_of(setting);
        const GridSpec g = grid_of(s, grid);
        const Mechanism mm = cli::parse_mechanism(mech, s, g);
        if (kind != "welfare" && kind != "dominance") throw ArgumentError("kind must be welfare or dominance");
        const auto r = kind == "welfare" ? analysis::search_welfare_improvement(s, mm, g)
                                         : analysis::search_dominance_improvement(s, mm, g, pay_only);
        py::dict out;
        out["status"] = status_name(r.status);
        out["optimum"] = to_string(r.optimum);
        out["scope"] = r.scope;
        py::dict delta;
        if (r.improvement) {
          for (const auto& [key, value] : *r.improvement) delta[py::str(join(key))] = to_string(value);
        }
        out["delta"] = delta;
        return out;
      },
      py::arg("setting"), py::arg("mech"), py::arg("grid"), py::arg("kind") = "welfare",
      py::arg("pay_only") = false);

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "groves");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
