#include "groves/cli.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "groves/analysis.hpp"
#include "groves/auction.hpp"
#include "groves/fixtures.hpp"
#include "groves/public_project.hpp"
#include "groves/report.hpp"
#include "groves/transforms.hpp"

namespace groves::cli {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Shared options

struct Common {
  std::string domain = "auction";
  std::size_t n = 0;
  std::size_t m = 1;
  std::string lower = "0";
  std::string upper;
  std::string cost;
  std::string shares;
  std::string grid;
  std::size_t grid_points = 0;
  std::string format = "json";
  std::optional<int> decimal;
  bool no_timestamp = false;
};

void add_setting_options(CLI::App* app, Common& c) {
  app->add_option("--domain", c.domain, "auction | public")
      ->check(CLI::IsMember({"auction", "public"}));
  app->add_option("--n", c.n, "number of agents");
  app->add_option("--m", c.m, "units for sale (auction)");
  app->add_option("--L", c.lower, "lower bid bound (auction)");
  app->add_option("--U", c.upper, "upper bid bound (auction)");
  app->add_option("--cost", c.cost, "project cost (public)");
  app->add_option("--shares", c.shares, "comma-separated cost shares (public; default equal)");
}

void add_grid_options(CLI::App* app, Common& c) {
  app->add_option("--grid", c.grid, "comma-separated grid points, both bounds included");
  app->add_option("--grid-points", c.grid_points, "evenly spaced grid with this many points");
}

void add_output_options(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--decimal", c.decimal, "add rounded decimal companions with k digits");
  app->add_flag("--no-timestamp", c.no_timestamp, "omit timestamp and runtime");
}

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("--") + name + ": not a rational: '" + text + "'");
  }
}

Setting make_setting(const Common& c) {
  if (c.domain == "auction") {
    if (c.n == 0 || c.upper.empty()) throw UsageError("auction needs --n, --m, --L and --U");
    return AuctionSetting::make(c.n, c.m, rational_arg(c.lower, "L"), rational_arg(c.upper, "U"));
  }
  if (c.cost.empty()) throw UsageError("public project needs --cost");
  const Rational cost = rational_arg(c.cost, "cost");
  if (c.shares.empty()) {
    if (c.n == 0) throw UsageError("public project needs --n or --shares");
    return PublicProjectSetting::equal_shares(c.n, cost);
  }
  Tuple shares;
  try {
    shares = parse_tuple(c.shares);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--shares: ") + e.what());
  }
  if (c.n != 0 && c.n != shares.size()) throw UsageError("--n disagrees with --shares");
  return PublicProjectSetting::make(cost, std::move(shares));
}

std::optional<GridSpec> make_grid(const Common& c, const Setting& setting) {
  if (!c.grid.empty() && c.grid_points != 0) throw UsageError("give --grid or --grid-points, not both");
  if (!c.grid.empty()) {
    try {
      return GridSpec::make(setting, parse_tuple(c.grid));
    } catch (const ArgumentError& e) {
      throw UsageError(std::string("--grid: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--grid: ") + e.what());
    }
  }
  if (c.grid_points != 0) return GridSpec::uniform(setting, c.grid_points);
  return std::nullopt;
}

GridSpec require_grid(const Common& c, const Setting& setting) {
  auto grid = make_grid(c, setting);
  if (!grid) throw UsageError("this command needs --grid or --grid-points");
  return *grid;
}

json setting_json(const Setting& setting) {
  json out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AuctionSetting>) {
          out["domain"] = "auction";
          out["n"] = s.n;
          out["m"] = s.m;
          out["L"] = to_string(s.lower);
          out["U"] = to_string(s.upper);
        } else {
          out["domain"] = "public";
          out["n"] = s.n;
          out["cost"] = to_string(s.cost);
          out["shares"] = report::tuple_json(s.shares);
        }
      },
      setting);
  return out;
}

json witness_json(const analysis::Witness& w) {
  json out;
  out["profile"] = report::tuple_json(w.profile);
  if (w.agent) out["agent"] = *w.agent + 1;
  return out;
}

std::string decision_text(const Decision& d) {
  if (const auto* a = std::get_if<AuctionDecision>(&d)) {
    std::string out = "winners:";
    for (std::size_t i = 0; i < a->winners.size(); ++i) {
      out += (i ? "," : "") + std::to_string(a->winners[i] + 1);
    }
    return out;
  }
  return std::get<ProjectDecision>(d).build ? "build" : "cancel";
}

report::Row make_row(const Setting& setting, const Mechanism& mech, const TypeProfile& profile) {
  const TaxReport tr = evaluate(setting, mech, profile);
  return report::Row{profile.values(), decision_text(tr.decision), tr.taxes, tr.total_tax,
                     tr.utilities, tr.welfare};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

const char* verdict_text(analysis::Verdict v) {
  return v == analysis::Verdict::Yes ? "Yes" : "No";
}

const char* lp_status_text(analysis::LpStatus s) {
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

void emit(const report::Report& rep, const Common& c, std::ostream& out) {
  if (c.format == "csv") {
    out << report::to_csv(rep, c.decimal);
  } else {
    out << report::to_json(rep, c.decimal).dump(2) << '\n';
  }
}

json dominance_json(const analysis::DominanceResult& r) {
  json w = json::object();
  if (r.strict_witness) w["strict"] = witness_json(*r.strict_witness);
  if (r.violation_witness) w["violation"] = witness_json(*r.violation_witness);
  if (r.welfare_strict_witness) w["welfare_strict"] = witness_json(*r.welfare_strict_witness);
  if (r.welfare_violation_witness) {
    w["welfare_violation"] = witness_json(*r.welfare_violation_witness);
  }
  return w;
}

void fill_lp(report::Report& rep, const std::string& prefix, const analysis::LpOutcome& lp) {
  rep.verdicts[prefix + "status"] = lp_status_text(lp.status);
  rep.details[prefix + "optimum"] = to_string(lp.optimum);
  rep.details[prefix + "variables"] = lp.variables;
  rep.details[prefix + "constraints"] = lp.constraints;
  rep.details[prefix + "scope"] = lp.scope;
  if (lp.improvement) rep.witnesses[prefix + "delta"] = report::table_json(*lp.improvement);
}

// ---------------------------------------------------------------------------
// Welfare-gap fixture reproduction

int run_fixture(report::Report& rep) {
  using namespace groves::fixtures;
  const AuctionSetting auction_setting = welfare_gap_setting();
  const Setting setting = auction_setting;
  const GridSpec grid = welfare_gap_grid();
  const RebateTable r = welfare_gap_table_r();
  const RebateTable r_prime = welfare_gap_table_r_prime();
  const Mechanism t = Mechanism::tabular(r);
  const Mechanism t_prime = Mechanism::tabular(r_prime);
  bool ok = true;
  const auto check = [&](const std::string& name, bool pass) {
    rep.verdicts[name] = pass ? "pass" : "FAIL";
    ok = ok && pass;
  };

  // table values, looked up through the mechanisms at a profile whose
  // agent 1 sees exactly that multiset of other bids
  bool tables_ok = r.size() == 20 && r_prime.size() == 20;
  json rows = json::array();
  for (const auto& row : welfare_gap_rows()) {
    const Tuple others{Rational(row.others[0]), Rational(row.others[1]), Rational(row.others[2])};
    const TypeProfile profile(setting, insert_at(others, 0, Rational(0)));
    const Rational got_r = rebate(setting, t, profile, 0);
    const Rational got_rp = rebate(setting, t_prime, profile, 0);
    tables_ok = tables_ok && got_r == row.r && got_rp == row.r_prime;
    rows.push_back(json{{"others", report::tuple_json(others)},
                        {"r", to_string(got_r)},
                        {"r_prime", to_string(got_rp)}});
  }
  rep.details["tables"] = std::move(rows);
  check("tables_match_fixture", tables_ok);
  check("r_prime(2,1,0)=7/24",
        r_prime.at(Tuple{Rational(2), Rational(1), Rational(0)}) == Rational(7, 24));
  check("r(3,2,1)=1,r_prime(3,2,1)=19/24",
        r.at(Tuple{Rational(3), Rational(2), Rational(1)}) == 1 &&
            r_prime.at(Tuple{Rational(3), Rational(2), Rational(1)}) == Rational(19, 24));

  check("t_feasible", analysis::check_feasible(setting, t, grid).feasible);
  check("t_prime_feasible", analysis::check_feasible(setting, t_prime, grid).feasible);

  const auto cmp = analysis::compare(setting, t, t_prime, grid);
  rep.witnesses["compare"] = dominance_json(cmp);
  check("t_prime_welfare_dominates_t", cmp.welfare_dominates == analysis::Verdict::Yes);
  check("t_prime_does_not_dominate_t", cmp.dominates == analysis::Verdict::No);
  bool violation_ok = false;
  if (cmp.violation_witness && cmp.violation_witness->agent) {
    const TypeProfile p(setting, cmp.violation_witness->profile);
    const Tuple others = canonical(exclude(p, *cmp.violation_witness->agent));
    violation_ok = r.at(others) > r_prime.at(others);
  }
  check("violation_witness_has_r_above_r_prime", violation_ok);

  const TypeProfile tie_profile(setting, Tuple{Rational(3), Rational(2), Rational(2), Rational(2)});
  const auto at = analysis::compare_at(setting, t, t_prime, tie_profile);
  check("rebate_sums_at_(3,2,2,2)_are_1/2_and_1",
        at.rebates_a == Rational(1, 2) && at.rebates_b == Rational(1));

  const auto dom = analysis::search_dominance_improvement(setting, t, grid, false);
  fill_lp(rep, "dominance_", dom);
  check("no_feasible_mechanism_dominates_t", dom.status == analysis::LpStatus::NoImprovement);

  const auto wel = analysis::search_welfare_improvement(setting, t, grid);
  fill_lp(rep, "welfare_", wel);
  bool welfare_ok = wel.status == analysis::LpStatus::ImprovementFound && wel.improvement;
  if (welfare_ok) {
    const auto improved = analysis::compare(setting, t, Mechanism::shifted(t, *wel.improvement), grid);
    welfare_ok = improved.welfare_dominates == analysis::Verdict::Yes;
  }
  check("welfare_improvement_over_t_exists", welfare_ok);
  return ok ? kExitOk : kExitFixtureMismatch;
}

}  // namespace

// ---------------------------------------------------------------------------

Mechanism parse_mechanism(const std::string& spec, const Setting& setting,
                          const std::optional<GridSpec>& grid) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (head == "vcg" && colon == std::string::npos) return Mechanism::vcg();
  if (head == "linear") {
    Tuple all;
    try {
      all = parse_tuple(rest);
    } catch (const std::invalid_argument& e) {
      throw UsageError("linear mechanism: " + std::string(e.what()));
    }
    if (all.size() != agent_count(setting)) {
      throw UsageError("linear mechanism needs n coefficients a0,a1,...,a_{n-1}");
    }
    return Mechanism::linear({all.front(), Tuple(all.begin() + 1, all.end())});
  }
  if (head == "oel") {
    const auto* auction = std::get_if<AuctionSetting>(&setting);
    if (!auction) throw UsageError("oel mechanisms exist only in the auction domain");
    if (rest.rfind("k=", 0) != 0) throw UsageError("expected oel:k=K");
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(rest.substr(2), &used);
      if (used != rest.size() - 2) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("expected oel:k=K with integer K, got '" + spec + "'");
    }
    try {
      return Mechanism::oel(*auction, k);
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }
  if (head == "table") {
    if (rest.empty() || rest.front() != '@') throw UsageError("expected table:@file.json");
    try {
      return Mechanism::tabular(report::read_table(rest.substr(1)));
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }
  if (head == "bcgc" || head == "bcgc-grid") {
    if (rest.empty()) throw UsageError("expected bcgc:<inner mechanism>");
    Mechanism inner = parse_mechanism(rest, setting, grid);
    SurplusStrategy strategy = SurplusStrategy::exact();
    if (head == "bcgc-grid") {
      if (!grid) throw UsageError("bcgc-grid needs --grid or --grid-points");
      strategy = SurplusStrategy::on_grid(*grid);
    }
    try {
      return transforms::bcgc_transform(setting, inner, strategy);
    } catch (const UnsupportedStrategy& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown mechanism spec '" + spec + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact evaluation and comparison of Groves redistribution mechanisms"};
  app.require_subcommand(1);
  Common c;

  std::string mech_spec, mech_a, mech_b, profile_text, coeffs_text, kind = "welfare";
  bool pay_only = false;

  auto* evaluate_cmd = app.add_subcommand("evaluate", "taxes, utilities and welfare");
  add_setting_options(evaluate_cmd, c);
  add_grid_options(evaluate_cmd, c);
  add_output_options(evaluate_cmd, c);
  evaluate_cmd->add_option("--mech", mech_spec, "mechanism spec")->required();
  evaluate_cmd->add_option("--profile", profile_text, "comma-separated types (else the grid)");

  auto* compare_cmd = app.add_subcommand("compare", "does B (welfare) dominate A on the grid?");
  add_setting_options(compare_cmd, c);
  add_grid_options(compare_cmd, c);
  add_output_options(compare_cmd, c);
  compare_cmd->add_option("--mech-a", mech_a, "baseline mechanism")->required();
  compare_cmd->add_option("--mech-b", mech_b, "candidate mechanism")->required();

  auto* check_cmd = app.add_subcommand("check", "feasibility and pay-only scans on the grid");
  add_setting_options(check_cmd, c);
  add_grid_options(check_cmd, c);
  add_output_options(check_cmd, c);
  check_cmd->add_option("--mech", mech_spec, "mechanism spec")->required();

  auto* classify_cmd = app.add_subcommand("classify", "exact verdict for a linear rebate");
  add_setting_options(classify_cmd, c);
  add_output_options(classify_cmd, c);
  classify_cmd->add_option("--coeffs", coeffs_text, "a0,a1,...,a_{n-1}")->required();

  auto* search_cmd = app.add_subcommand("search", "exact LP improvement search on the grid");
  add_setting_options(search_cmd, c);
  add_grid_options(search_cmd, c);
  add_output_options(search_cmd, c);
  search_cmd->add_option("--mech", mech_spec, "mechanism spec")->required();
  search_cmd->add_option("--kind", kind, "welfare | dominance")
      ->check(CLI::IsMember({"welfare", "dominance"}));
  search_cmd->add_flag("--pay-only", pay_only, "dominance search restricted to pay-only");

  auto* fixture_cmd = app.add_subcommand("appendix-a", "reproduce the welfare-gap fixture");
  add_output_options(fixture_cmd, c);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  report::Report rep;
  int code = kExitOk;
  try {
    if (fixture_cmd->parsed()) {
      rep.scenario = "appendix-a";
      rep.settings = setting_json(fixtures::welfare_gap_setting());
      code = run_fixture(rep);
    } else {
      const Setting setting = make_setting(c);
      rep.settings = setting_json(setting);

      if (evaluate_cmd->parsed()) {
        rep.scenario = "evaluate";
        const auto grid = make_grid(c, setting);
        const Mechanism mech = parse_mechanism(mech_spec, setting, grid);
        rep.details["mechanism"] = mech.describe();
        if (!profile_text.empty()) {
          Tuple values;
          try {
            values = parse_tuple(profile_text);
          } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--profile: ") + e.what());
          }
          rep.rows.push_back(make_row(setting, mech, TypeProfile(setting, std::move(values))));
        } else if (grid) {
          const std::size_t n = agent_count(setting);
          Tuple values(n);
          std::vector<std::size_t> digits(n, 0);
          while (true) {
            for (std::size_t i = 0; i < n; ++i) values[i] = grid->points[digits[i]];
            rep.rows.push_back(make_row(setting, mech, TypeProfile(setting, values)));
            std::size_t pos = n;
            while (pos > 0 && ++digits[pos - 1] == grid->points.size()) digits[--pos] = 0;
            if (pos == 0) break;
          }
        } else {
          throw UsageError("evaluate needs --profile or a grid");
        }
      } else if (compare_cmd->parsed()) {
        rep.scenario = "compare";
        const GridSpec grid = require_grid(c, setting);
        const Mechanism a = parse_mechanism(mech_a, setting, grid);
        const Mechanism b = parse_mechanism(mech_b, setting, grid);
        const auto r = analysis::compare(setting, a, b, grid);
        rep.verdicts["dominates"] = verdict_text(r.dominates);
        rep.verdicts["welfare_dominates"] = verdict_text(r.welfare_dominates);
        rep.verdicts["equal"] = r.equal ? "true" : "false";
        rep.witnesses = dominance_json(r);
        rep.details["mechanism_a"] = a.describe();
        rep.details["mechanism_b"] = b.describe();
        rep.details["grid"] = report::tuple_json(grid.points);
        rep.details["profiles"] = r.profiles;
        rep.details["scope"] = "grid-certified: exact on the grid, evidence for the continuum";
      } else if (check_cmd->parsed()) {
        rep.scenario = "check";
        const GridSpec grid = require_grid(c, setting);
        const Mechanism mech = parse_mechanism(mech_spec, setting, grid);
        const auto f = analysis::check_feasible(setting, mech, grid);
        const auto p = analysis::check_pay_only(setting, mech, grid);
        rep.verdicts["feasible"] = f.feasible ? "true" : "false";
        rep.verdicts["pay_only"] = p.pay_only ? "true" : "false";
        if (f.witness) {
          rep.witnesses["infeasible"] = json{{"profile", report::tuple_json(*f.witness)},
                                             {"total_tax", to_string(*f.witness_total)}};
        }
        if (p.witness) {
          json w = witness_json(*p.witness);
          w["tax"] = to_string(*p.witness_tax);
          rep.witnesses["positive_tax"] = std::move(w);
        }
        rep.details["mechanism"] = mech.describe();
      } else if (classify_cmd->parsed()) {
        rep.scenario = "classify";
        const auto* auction = std::get_if<AuctionSetting>(&setting);
        if (!auction) throw UsageError("classify works in the auction domain only");
        Tuple all;
        try {
          all = parse_tuple(coeffs_text);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("--coeffs: ") + e.what());
        }
        if (all.size() != auction->n) throw UsageError("--coeffs needs n values a0..a_{n-1}");
        const RebateCoefficients a{all.front(), Tuple(all.begin() + 1, all.end())};
        const auto cls = analysis::classify_linear(*auction, a);
        const auto totals = analysis::total_coefficients(*auction, a);
        rep.details["total_coefficients"] = report::tuple_json(totals.c);
        switch (cls.kind) {
          case analysis::Classification::Kind::Infeasible:
            rep.verdicts["classification"] = "Infeasible";
            rep.witnesses["profile"] = report::tuple_json(cls.witness);
            rep.witnesses["expression"] = *cls.expression;
            break;
          case analysis::Classification::Kind::UndominatedOel:
            rep.verdicts["classification"] = "UndominatedOEL(" + std::to_string(*cls.oel_index) + ")";
            rep.details["oel_index"] = *cls.oel_index;
            break;
          case analysis::Classification::Kind::Dominated:
            rep.verdicts["classification"] = "Dominated";
            rep.details["slack"] = to_string(cls.slack);
            rep.witnesses["others"] = report::tuple_json(cls.witness);
            break;
        }
      } else if (search_cmd->parsed()) {
        rep.scenario = "search";
        const GridSpec grid = require_grid(c, setting);
        const Mechanism mech = parse_mechanism(mech_spec, setting, grid);
        if (pay_only && kind != "dominance") throw UsageError("--pay-only applies to --kind dominance");
        const auto lp = kind == "welfare"
                            ? analysis::search_welfare_improvement(setting, mech, grid)
                            : analysis::search_dominance_improvement(setting, mech, grid, pay_only);
        fill_lp(rep, "", lp);
        rep.details["mechanism"] = mech.describe();
        rep.details["grid"] = report::tuple_json(grid.points);
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (!c.no_timestamp) {
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.timestamp = utc_timestamp();
  }
  emit(rep, c, out);
  return code;
}

}  // namespace groves::cli
