#include "groves/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "groves/auction.hpp"
#include "groves/enumerate.hpp"
#include "groves/simplex.hpp"

namespace groves::analysis {

std::size_t configured_workers() {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GROVES_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
  }
  return workers;
}

namespace {

// Splits [0, count) into contiguous chunks, runs work(chunk, begin, end) on a
// small thread pool and rethrows the first failure in chunk order.
template <class Work>
std::size_t run_chunked(std::size_t count, Work&& work) {
  const std::size_t workers = std::min(configured_workers(), std::max<std::size_t>(1, count / 64));
  const std::size_t chunk = (count + workers - 1) / std::max<std::size_t>(1, workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    auto body = [&, w, begin, end] {
      try {
        work(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) body();
    else pool.emplace_back(body);
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return workers;
}

TypeProfile grid_profile(const Setting& setting, const GridSpec& grid, std::size_t index) {
  return TypeProfile(setting, enumerate::profile_at(grid, agent_count(setting), index));
}

[[noreturn]] void rethrow_at(const std::exception& e, const Tuple& profile) {
  throw EvaluationError(std::string(e.what()) + " at profile (" + join(profile) + ")");
}

Tuple taxes_at(const Setting& setting, const Mechanism& mech, const TypeProfile& profile) {
  try {
    return taxes(setting, mech, profile);
  } catch (const EvaluationError& e) {
    rethrow_at(e, profile.values());
  }
}

Rational sum(const Tuple& v) {
  Rational out = 0;
  for (const auto& x : v) out += x;
  return out;
}

struct Found {
  std::size_t index;
  std::optional<std::size_t> agent;
};

void keep_first(std::optional<Found>& slot, std::size_t index, std::optional<std::size_t> agent) {
  if (!slot) slot = Found{index, agent};
}

}  // namespace

// ---------------------------------------------------------------------------

ProfileComparison compare_at(const Setting& setting, const Mechanism& a, const Mechanism& b,
                             const TypeProfile& profile) {
  ProfileComparison out;
  out.taxes_a = taxes_at(setting, a, profile);
  out.taxes_b = taxes_at(setting, b, profile);
  out.total_a = sum(out.taxes_a);
  out.total_b = sum(out.taxes_b);
  const Rational vcg_total = sum(vcg_taxes(setting, profile));
  out.rebates_a = out.total_a - vcg_total;
  out.rebates_b = out.total_b - vcg_total;
  return out;
}

DominanceResult compare(const Setting& setting, const Mechanism& a, const Mechanism& b,
                        const GridSpec& grid) {
  const std::size_t n = agent_count(setting);
  const std::size_t count = enumerate::profile_count(grid, n);

  struct ChunkState {
    std::optional<Found> strict, violation, welfare_strict, welfare_violation;
  };
  std::vector<ChunkState> states(configured_workers());

  run_chunked(count, [&](std::size_t w, std::size_t begin, std::size_t end) {
    ChunkState& st = states[w];
    for (std::size_t idx = begin; idx < end; ++idx) {
      const TypeProfile profile = grid_profile(setting, grid, idx);
      const Tuple ta = taxes_at(setting, a, profile);
      const Tuple tb = taxes_at(setting, b, profile);
      for (std::size_t i = 0; i < n; ++i) {
        if (tb[i] > ta[i]) keep_first(st.strict, idx, i);
        if (tb[i] < ta[i]) keep_first(st.violation, idx, i);
      }
      const Rational total_a = sum(ta);
      const Rational total_b = sum(tb);
      if (total_b > total_a) keep_first(st.welfare_strict, idx, std::nullopt);
      if (total_b < total_a) keep_first(st.welfare_violation, idx, std::nullopt);
    }
  });

  ChunkState merged;
  for (const auto& st : states) {
    if (!merged.strict) merged.strict = st.strict;
    if (!merged.violation) merged.violation = st.violation;
    if (!merged.welfare_strict) merged.welfare_strict = st.welfare_strict;
    if (!merged.welfare_violation) merged.welfare_violation = st.welfare_violation;
  }

  const auto witness = [&](const std::optional<Found>& f) -> std::optional<Witness> {
    if (!f) return std::nullopt;
    return Witness{enumerate::profile_at(grid, n, f->index), f->agent};
  };

  DominanceResult out;
  out.profiles = count;
  out.strict_witness = witness(merged.strict);
  out.violation_witness = witness(merged.violation);
  out.welfare_strict_witness = witness(merged.welfare_strict);
  out.welfare_violation_witness = witness(merged.welfare_violation);
  out.equal = !merged.strict && !merged.violation;
  out.dominates = (merged.strict && !merged.violation) ? Verdict::Yes : Verdict::No;
  out.welfare_dominates =
      (merged.welfare_strict && !merged.welfare_violation) ? Verdict::Yes : Verdict::No;
  return out;
}

FeasibilityCheck check_feasible(const Setting& setting, const Mechanism& mech,
                                const GridSpec& grid) {
  const std::size_t n = agent_count(setting);
  const std::size_t count = enumerate::profile_count(grid, n);
  std::vector<std::optional<std::pair<std::size_t, Rational>>> first(configured_workers());

  run_chunked(count, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const TypeProfile profile = grid_profile(setting, grid, idx);
      Rational total = sum(taxes_at(setting, mech, profile));
      if (total > 0) {
        first[w] = std::make_pair(idx, std::move(total));
        return;
      }
    }
  });

  FeasibilityCheck out;
  for (const auto& f : first) {
    if (f) {
      out.feasible = false;
      out.witness = enumerate::profile_at(grid, n, f->first);
      out.witness_total = f->second;
      break;
    }
  }
  return out;
}

PayOnlyCheck check_pay_only(const Setting& setting, const Mechanism& mech, const GridSpec& grid) {
  const std::size_t n = agent_count(setting);
  const std::size_t count = enumerate::profile_count(grid, n);
  struct Hit {
    std::size_t index;
    std::size_t agent;
    Rational tax;
  };
  std::vector<std::optional<Hit>> first(configured_workers());

  run_chunked(count, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const TypeProfile profile = grid_profile(setting, grid, idx);
      const Tuple t = taxes_at(setting, mech, profile);
      for (std::size_t i = 0; i < n; ++i) {
        if (t[i] > 0) {
          first[w] = Hit{idx, i, t[i]};
          return;
        }
      }
    }
  });

  PayOnlyCheck out;
  for (const auto& f : first) {
    if (f) {
      out.pay_only = false;
      out.witness = Witness{enumerate::profile_at(grid, n, f->index), f->agent};
      out.witness_tax = f->tax;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

TotalCoefficients total_coefficients(const AuctionSetting& setting, const RebateCoefficients& a) {
  const std::size_t n = setting.n;
  if (a.slopes.size() != n - 1) {
    throw ArgumentError("linear rebate needs " + std::to_string(n - 1) + " slope coefficients");
  }
  const auto slope = [&](std::size_t j) -> Rational {
    return (j >= 1 && j <= n - 1) ? a.slopes[j - 1] : Rational(0);
  };
  TotalCoefficients out{Tuple(n + 1, Rational(0))};
  out.c[0] = Rational(static_cast<long>(n)) * a.constant;
  for (std::size_t j = 1; j <= n; ++j) {
    // [theta]_j is the j-th highest of the others for agents ranked below j,
    // and the (j-1)-th highest for agents ranked above it
    out.c[j] = Rational(static_cast<long>(j - 1)) * slope(j - 1) +
               Rational(static_cast<long>(n - j)) * slope(j);
  }
  // total VCG payment is -m [theta]_{m+1}
  out.c[setting.m + 1] -= Rational(static_cast<long>(setting.m));
  return out;
}

bool AffineForm::is_zero() const {
  return constant == 0 &&
         std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

Rational AffineForm::at(const Tuple& s) const {
  Rational out = constant;
  for (std::size_t j = 0; j < coeffs.size(); ++j) out += coeffs[j] * s.at(j);
  return out;
}

std::vector<AffineForm> boundary_expressions(const AuctionSetting& setting,
                                             const TotalCoefficients& totals) {
  const std::size_t n = setting.n;
  if (totals.c.size() != n + 1) throw ArgumentError("total coefficients need n+1 entries");
  std::vector<AffineForm> out;
  for (std::size_t e = 0; e <= n; ++e) {
    AffineForm form{totals.c[0], Tuple(n - 1, Rational(0))};
    for (std::size_t p = 1; p <= n; ++p) {
      const Rational& c = totals.c[p];
      if (e == 0 && p == 1) {
        form.constant += c * setting.upper;
      } else if (e == n && p == n) {
        form.constant += c * setting.lower;
      } else {
        // sorted position p holds s_p before the agent's slot, s_{p-1} after it;
        // the agent's own slot (p = e+1) duplicates s_e
        const std::size_t s = (p <= e) ? p : p - 1;
        form.coeffs[s - 1] += c;
      }
    }
    out.push_back(std::move(form));
  }
  return out;
}

Classification classify_linear(const AuctionSetting& setting, const RebateCoefficients& a) {
  const std::size_t n = setting.n;
  const auto exprs = boundary_expressions(setting, total_coefficients(setting, a));

  // (1) feasibility on the vertices (U,..,U,L,..,L) of the sorted box
  for (std::size_t p = 0; p < n; ++p) {
    Tuple s(n - 1, setting.lower);
    std::fill(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(p), setting.upper);
    for (std::size_t e = 0; e <= n; ++e) {
      if (exprs[e].at(s) > 0) {
        const Rational own = e == 0 ? setting.upper : e == n ? setting.lower : s[e - 1];
        Tuple profile = s;
        profile.push_back(own);
        Classification out;
        out.kind = Classification::Kind::Infeasible;
        out.witness = canonical(std::move(profile));
        out.expression = e;
        return out;
      }
    }
  }

  // (2) undominated iff some expression vanishes identically
  for (std::size_t e = 0; e <= n; ++e) {
    if (!exprs[e].is_zero()) continue;
    const long diff = static_cast<long>(e) - static_cast<long>(setting.m);
    if (diff % 2 != 0 && a == auction::oel_coefficients(setting, OelIndex{e})) {
      Classification out;
      out.kind = Classification::Kind::UndominatedOel;
      out.oel_index = e;
      return out;
    }
    throw std::logic_error("feasible linear rebate with a vanishing boundary expression (" +
                           std::to_string(e) + ") that is not the matching OEL mechanism");
  }

  // (3) dominated: min over the sorted box of the largest expression, by LP.
  // Variables s_1..s_{n-1} then z, all free; maximize -z.
  lp::Problem prob;
  prob.num_vars = n;
  prob.free.assign(n, true);
  prob.objective.assign(n, Rational(0));
  prob.objective[n - 1] = -1;
  for (const auto& form : exprs) {
    lp::Constraint con;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (form.coeffs[j] != 0) con.terms.push_back({j, form.coeffs[j]});
    }
    con.terms.push_back({n - 1, Rational(-1)});
    con.relation = lp::Relation::LessEqual;
    con.rhs = -form.constant;
    prob.constraints.push_back(std::move(con));
  }
  prob.constraints.push_back({{{0, Rational(1)}}, lp::Relation::LessEqual, setting.upper});
  for (std::size_t j = 0; j + 2 < n; ++j) {
    prob.constraints.push_back(
        {{{j + 1, Rational(1)}, {j, Rational(-1)}}, lp::Relation::LessEqual, Rational(0)});
  }
  prob.constraints.push_back({{{n - 2, Rational(1)}}, lp::Relation::GreaterEqual, setting.lower});

  const lp::Solution sol = lp::maximize(prob);
  if (sol.status != lp::Status::Optimal || !(sol.value > 0)) {
    throw std::logic_error("dominated linear rebate without positive slack");
  }
  Classification out;
  out.kind = Classification::Kind::Dominated;
  out.slack = sol.value;
  out.witness.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n - 1));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ImprovementModel {
  std::vector<Tuple> keys;              // multisets, variable order
  std::map<Tuple, std::size_t> var_of;  // canonical tuple -> variable
  Tuple weight;                         // objective weight per variable
  // canonical profile -> (LHS counts, tightest bound on sum of deltas)
  std::map<Tuple, std::pair<std::map<std::size_t, long>, Rational>> totals;
  std::map<std::size_t, Rational> agent_bound;  // pay-only: delta(x) <= bound
  bool base_feasible = true;  // satisfies the search's own constraints with delta = 0
};

ImprovementModel build_model(const Setting& setting, const Mechanism& mech, const GridSpec& grid,
                             bool collect_agent_bounds) {
  const std::size_t n = agent_count(setting);
  ImprovementModel model;
  model.keys = enumerate::multisets(grid, n - 1);
  for (std::size_t v = 0; v < model.keys.size(); ++v) model.var_of[model.keys[v]] = v;
  model.weight.assign(model.keys.size(), Rational(0));

  const std::size_t count = enumerate::profile_count(grid, n);
  std::vector<Tuple> all_taxes(count);
  run_chunked(count, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      all_taxes[idx] = taxes_at(setting, mech, grid_profile(setting, grid, idx));
    }
  });

  for (std::size_t idx = 0; idx < count; ++idx) {
    const Tuple profile = enumerate::profile_at(grid, n, idx);
    const Tuple& t = all_taxes[idx];
    const Rational total = sum(t);
    if (total > 0) model.base_feasible = false;

    std::map<std::size_t, long> lhs;
    for (std::size_t i = 0; i < n; ++i) {
      Tuple others = profile;
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
      const std::size_t v = model.var_of.at(canonical(std::move(others)));
      ++lhs[v];
      model.weight[v] += 1;
      if (collect_agent_bounds) {
        if (t[i] > 0) model.base_feasible = false;
        const Rational bound = -t[i];
        auto [it, inserted] = model.agent_bound.emplace(v, bound);
        if (!inserted && bound < it->second) it->second = bound;
      }
    }
    const Rational bound = -total;
    auto [it, inserted] = model.totals.emplace(canonical(profile), std::make_pair(lhs, bound));
    if (!inserted && bound < it->second.second) it->second.second = bound;
  }
  return model;
}

lp::Constraint sum_row(const std::map<std::size_t, long>& lhs, lp::Relation rel, Rational rhs) {
  lp::Constraint con;
  for (const auto& [v, c] : lhs) con.terms.push_back({v, Rational(c)});
  con.relation = rel;
  con.rhs = std::move(rhs);
  return con;
}

LpOutcome solve_model(const ImprovementModel& model, lp::Problem prob, std::string scope) {
  LpOutcome out;
  out.scope = std::move(scope);
  out.variables = prob.num_vars;
  out.constraints = prob.constraints.size();
  if (!model.base_feasible) {
    out.status = LpStatus::BaseInfeasible;
    out.optimum = 0;
    return out;
  }
  const lp::Solution sol = lp::maximize(prob);
  out.pivots = sol.pivots;
  if (sol.status == lp::Status::Unbounded) {
    throw std::logic_error("improvement LP reported unbounded; totals should cap it");
  }
  if (sol.status == lp::Status::Infeasible) {
    throw std::logic_error("improvement LP infeasible although the base mechanism is feasible");
  }
  out.optimum = sol.value;
  if (sol.value > 0) {
    if (!lp::satisfies(prob, sol.x)) {
      throw std::logic_error("improvement LP returned a point violating its constraints");
    }
    out.status = LpStatus::ImprovementFound;
    RebateTable delta;
    for (std::size_t v = 0; v < model.keys.size(); ++v) delta.set(model.keys[v], sol.x[v]);
    out.improvement = std::move(delta);
  } else {
    out.status = LpStatus::NoImprovement;
  }
  return out;
}

}  // namespace

LpOutcome search_welfare_improvement(const Setting& setting, const Mechanism& mech,
                                     const GridSpec& grid) {
  const ImprovementModel model = build_model(setting, mech, grid, false);
  lp::Problem prob;
  prob.num_vars = model.keys.size();
  prob.free.assign(prob.num_vars, true);
  prob.objective = model.weight;
  for (const auto& [_, row] : model.totals) {
    prob.constraints.push_back(sum_row(row.first, lp::Relation::LessEqual, row.second));
    prob.constraints.push_back(sum_row(row.first, lp::Relation::GreaterEqual, Rational(0)));
  }
  return solve_model(model, std::move(prob),
                     "grid-certified welfare improvement search over anonymous rebate "
                     "perturbations");
}

LpOutcome search_dominance_improvement(const Setting& setting, const Mechanism& mech,
                                       const GridSpec& grid, bool pay_only) {
  const ImprovementModel model = build_model(setting, mech, grid, pay_only);
  lp::Problem prob;
  prob.num_vars = model.keys.size();
  prob.objective = model.weight;
  for (const auto& [_, row] : model.totals) {
    prob.constraints.push_back(sum_row(row.first, lp::Relation::LessEqual, row.second));
  }
  if (pay_only) {
    for (const auto& [v, bound] : model.agent_bound) {
      prob.constraints.push_back({{{v, Rational(1)}}, lp::Relation::LessEqual, bound});
    }
  }
  return solve_model(model, std::move(prob),
                     std::string("grid-certified, partial: anonymous-subclass ") +
                         (pay_only ? "pay-only " : "") + "dominance improvement search");
}

}  // namespace groves::analysis
