// Acceptance criteria: one PASS/FAIL line each, exact checks, wall-clock limits.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "groves/analysis.hpp"
#include "groves/auction.hpp"
#include "groves/enumerate.hpp"
#include "groves/fixtures.hpp"
#include "groves/public_project.hpp"
#include "groves/transforms.hpp"

using namespace groves;
using analysis::LpStatus;
using analysis::Verdict;

namespace {

Rational Q(long num, long den = 1) {
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

Tuple T(std::initializer_list<long> values) {
  Tuple out;
  for (long v : values) out.emplace_back(v);
  return out;
}

/// Collects failed checks with a short reason.
struct Checker {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::mt19937_64 rng(7);

Rational random_rational(long range, long den) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> d(1, den);
  return Q(num(rng), d(rng));
}

// ---------------------------------------------------------------------------

void welfare_gap(Checker& check) {
  const AuctionSetting as = fixtures::welfare_gap_setting();
  const Setting s = as;
  const GridSpec g = fixtures::welfare_gap_grid();
  const RebateTable r = fixtures::welfare_gap_table_r();
  const RebateTable rp = fixtures::welfare_gap_table_r_prime();
  const Mechanism t = Mechanism::tabular(r);
  const Mechanism tp = Mechanism::tabular(rp);

  // (a) every table value, read back through mechanism evaluation
  check(fixtures::welfare_gap_rows().size() == 20 && r.size() == 20 && rp.size() == 20, "row count");
  for (const auto& row : fixtures::welfare_gap_rows()) {
    const Tuple others{Rational(row.others[0]), Rational(row.others[1]), Rational(row.others[2])};
    const TypeProfile p(s, insert_at(others, 3, Rational(0)));
    check(rebate(s, t, p, 3) == row.r && rebate(s, tp, p, 3) == row.r_prime,
          "table value at " + join(others));
  }
  check(rp.at(T({2, 1, 0})) == Q(7, 24), "r'(2,1,0) = 7/24");
  check(r.at(T({3, 2, 1})) == 1 && rp.at(T({3, 2, 1})) == Q(19, 24), "r(3,2,1) / r'(3,2,1)");
  check(r.at(T({3, 3, 2})) == 1 && rp.at(T({3, 3, 2})) == Q(5, 6), "r(3,3,2) / r'(3,3,2)");

  // (b) welfare dominance without dominance
  const auto cmp = analysis::compare(s, t, tp, g);
  check(cmp.welfare_dominates == Verdict::Yes, "t' welfare dominates t");
  check(cmp.dominates == Verdict::No, "t' does not dominate t");
  const auto at = analysis::compare_at(s, t, tp, TypeProfile(s, T({3, 2, 2, 2})));
  check(at.rebates_a == Q(1, 2) && at.rebates_b == 1, "rebate sums 1/2 vs 1 at (3,2,2,2)");
  check(at.total_b > at.total_a, "(3,2,2,2) is a strict welfare profile");
  bool violation_ok = false;
  if (cmp.violation_witness && cmp.violation_witness->agent) {
    const TypeProfile p(s, cmp.violation_witness->profile);
    const Tuple others = canonical(exclude(p, *cmp.violation_witness->agent));
    violation_ok = r.at(others) == 1 && (rp.at(others) == Q(19, 24) || rp.at(others) == Q(5, 6));
  }
  check(violation_ok, "violation witness at r = 1 > 19/24 or 5/6");
  const auto tie = analysis::compare_at(s, t, tp, TypeProfile(s, T({0, 3, 3, 2})));
  check(tie.taxes_b[0] < tie.taxes_a[0], "(3,3,2) is a violation multiset");

  // (c) nothing dominates t
  const auto dom = analysis::search_dominance_improvement(s, t, g, false);
  check(dom.status == LpStatus::NoImprovement && dom.optimum == 0, "dominance search optimum 0");
}

void oel_boundary(Checker& check) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t m = 1; m < n; ++m) {
      const AuctionSetting s = AuctionSetting::make(n, m, Q(1), Q(5));
      const GridSpec g = GridSpec::uniform(s, 5);
      for (std::size_t k = 0; k <= n; ++k) {
        if ((k + m) % 2 == 0) continue;
        const auto idx = auction::make_oel_index(s, k);
        bool ok = true;
        enumerate::for_each_profile(g, n, [&](const Tuple& v) {
          if (!ok) return;
          const TypeProfile p(s, v);
          Rational total = 0;
          for (const auto& x : auction::oel_tax(s, idx, p)) total += x;
          ok = total <= 0 && (total == 0) == auction::oel_zero_boundary(s, idx, p);
        });
        std::ostringstream what;
        what << "n=" << n << " m=" << m << " k=" << k;
        check(ok, what.str());
      }
    }
  }
}

void bc_is_oel(Checker& check) {
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 1}, {4, 1}, {4, 2}, {5, 2}}) {
    const AuctionSetting s = AuctionSetting::make(n, m, Q(0), Q(3));
    const Mechanism bc = transforms::bcgc_transform(s, Mechanism::vcg());
    const Mechanism oel = Mechanism::oel(s, m + 1);
    bool ok = true;
    enumerate::for_each_profile(GridSpec::uniform(s, 4), n, [&](const Tuple& v) {
      const TypeProfile p(s, v);
      ok = ok && taxes(s, bc, p) == taxes(s, oel, p);
    });
    check(ok, "n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
}

void oel_welfare_oracle(Checker& check) {
  const AuctionSetting s = AuctionSetting::make(4, 1, Q(0), Q(3));
  const GridSpec g = GridSpec::make(s, T({0, 1, 2, 3}));
  for (std::size_t k : {0, 2, 4}) {
    const auto out = analysis::search_welfare_improvement(s, Mechanism::oel(s, k), g);
    check(out.status == LpStatus::NoImprovement && out.optimum == 0, "k=" + std::to_string(k));
  }
}

void classifier(Checker& check) {
  using K = analysis::Classification::Kind;
  const auto agree = [&](const AuctionSetting& s, const RebateCoefficients& a,
                         const analysis::Classification& c, const std::string& what) {
    const auto lp = analysis::search_dominance_improvement(s, Mechanism::linear(a),
                                                           GridSpec::uniform(s, 4), false);
    const LpStatus expected = c.kind == K::UndominatedOel ? LpStatus::NoImprovement
                              : c.kind == K::Dominated    ? LpStatus::ImprovementFound
                                                          : LpStatus::BaseInfeasible;
    check(lp.status == expected, "oracle disagrees: " + what);
  };
  std::vector<std::pair<AuctionSetting, RebateCoefficients>> oel_sets;
  for (std::size_t n = 3; n <= 4; ++n) {
    for (std::size_t m = 1; m < n; ++m) {
      const AuctionSetting s = AuctionSetting::make(n, m, Q(0), Q(3));
      for (std::size_t k = 0; k <= n; ++k) {
        if ((k + m) % 2 == 0) continue;
        const auto a = auction::oel_coefficients(s, auction::make_oel_index(s, k));
        const auto c = analysis::classify_linear(s, a);
        const std::string what = "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                 " k=" + std::to_string(k);
        check(c.kind == K::UndominatedOel && c.oel_index && *c.oel_index == k, "OEL " + what);
        agree(s, a, c, "OEL " + what);
        oel_sets.emplace_back(s, a);
      }
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto& [s, base] = oel_sets[trial % oel_sets.size()];
    RebateCoefficients a = base;
    Rational change = 0;
    while (change == 0) {
      a = base;
      change = 0;
      const Rational d0 = random_rational(3, 8) / 4;
      a.constant += d0;
      change += abs(d0);
      for (auto& x : a.slopes) {
        const Rational d = random_rational(2, 8) / 4;
        x += d;
        change += abs(d);
      }
    }
    const auto c = analysis::classify_linear(s, a);
    const std::string what = "perturbation " + std::to_string(trial);
    check(c.kind != K::UndominatedOel, what + " classified undominated");
    agree(s, a, c, what);
  }
}

void equal_share_project(Checker& check) {
  const PublicProjectSetting ps = PublicProjectSetting::equal_shares(3, Q(3));
  const Setting s = ps;
  const GridSpec g11 = GridSpec::uniform(s, 11);
  bool zero = true;
  enumerate::for_each_profile(g11, 2, [&](const Tuple& others) {
    for (std::size_t agent = 0; agent < 3; ++agent) {
      zero = zero && public_project::pp_bcgc_surplus(ps, agent, others) == 0;
    }
  });
  check(zero, "surplus vanishes on the 11-point grid");
  const auto out = analysis::search_welfare_improvement(s, Mechanism::vcg(), GridSpec::uniform(s, 6));
  check(out.status == LpStatus::NoImprovement && out.optimum == 0, "VCG welfare search optimum 0");
  check(out.scope.find("grid-certified") != std::string::npos, "report labels the scope");
}

void general_project(Checker& check) {
  const PublicProjectSetting ps = PublicProjectSetting::make(Q(100), T({10, 40, 50}));
  const Setting s = ps;
  check(public_project::pp_bcgc_surplus(ps, 0, T({10, 70})) == -10, "S_1(10,70) = -10");
  const Mechanism bc = transforms::bcgc_transform(s, Mechanism::vcg());
  check(taxes(s, bc, TypeProfile(s, T({0, 10, 70})))[0] == Q(10, 3), "t_1(0,10,70) = 10/3");
  const GridSpec g = GridSpec::uniform(s, 11);
  check(g.points == T({0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}), "grid {0,10,...,100}");
  check(analysis::compare(s, Mechanism::vcg(), bc, g).dominates == Verdict::Yes, "BCGC dominates VCG");
  check(!analysis::check_pay_only(s, bc, g).pay_only, "BCGC is not pay-only");
}

void pay_only_oracle(Checker& check) {
  const Setting s = PublicProjectSetting::make(Q(100), T({10, 40, 50}));
  const auto out =
      analysis::search_dominance_improvement(s, Mechanism::vcg(), GridSpec::uniform(s, 6), true);
  check(out.status == LpStatus::NoImprovement && out.optimum == 0, "pay-only search optimum 0");
  check(out.scope.find("partial") != std::string::npos, "report labels the search partial");
}

void property_suites(Checker& check) {
  // strategy-proofness for every variant
  {
    const AuctionSetting as = AuctionSetting::make(3, 1, Q(0), Q(2));
    const GridSpec g = GridSpec::uniform(as, 4);
    RebateTable table, delta;
    std::vector<AgentRebateTable> family(3);
    std::uniform_int_distribution<long> num(-3, 3);
    for (const auto& x : enumerate::multisets(g, 2)) {
      table.set(x, Q(num(rng), 3));
      delta.set(x, Q(num(rng), 5));
    }
    for (auto& h : family) {
      enumerate::for_each_profile(g, 2, [&](const Tuple& x) { h.set(x, Q(num(rng), 7)); });
    }
    const PublicProjectSetting pp = PublicProjectSetting::make(Q(100), T({10, 40, 50}));
    struct Case {
      Setting s;
      GridSpec g;
      std::vector<Mechanism> mechs;
    };
    const std::vector<Case> cases{
        {as, g,
         {Mechanism::vcg(), Mechanism::linear({Q(1, 3), Tuple{Q(1, 2), Q(-1, 5)}}), Mechanism::oel(as, 0),
          Mechanism::oel(as, 2), Mechanism::tabular(table), Mechanism::per_agent(family),
          transforms::bcgc_transform(as, Mechanism::vcg()),
          transforms::bcgc_transform(as, Mechanism::tabular(table), SurplusStrategy::on_grid(g)),
          Mechanism::shifted(Mechanism::vcg(), delta)}},
        {pp, GridSpec::uniform(pp, 6), {Mechanism::vcg(), transforms::bcgc_transform(pp, Mechanism::vcg())}}};
    for (const auto& c : cases) {
      const std::size_t n = agent_count(c.s);
      for (const auto& mech : c.mechs) {
        bool ok = true;
        enumerate::for_each_profile(c.g, n, [&](const Tuple& v) {
          if (!ok) return;
          const TaxReport honest = evaluate(c.s, mech, TypeProfile(c.s, v));
          for (std::size_t i = 0; i < n; ++i) {
            for (const auto& lie : c.g.points) {
              Tuple w = v;
              w[i] = lie;
              const TypeProfile dev(c.s, w);
              const Rational u = valuation(c.s, efficient_decision(c.s, dev), i, v[i]) +
                                 taxes(c.s, mech, dev)[i];
              ok = ok && u <= honest.utilities[i];
            }
          }
        });
        check(ok, "strategy-proofness: " + mech.describe());
      }
    }
  }

  // BCGC output is feasible, and dominates or equals a feasible input
  {
    const std::vector<Setting> settings{AuctionSetting::make(4, 1, Q(0), Q(3)),
                                        AuctionSetting::make(4, 2, Q(1), Q(4)),
                                        PublicProjectSetting::make(Q(100), T({10, 40, 50}))};
    for (const auto& s : settings) {
      const std::size_t n = agent_count(s);
      const GridSpec g = GridSpec::uniform(s, 5);
      for (int trial = 0; trial < 5; ++trial) {
        RebateCoefficients a{trial == 0 ? Q(0) : random_rational(3, 2), {}};
        for (std::size_t j = 1; j < n; ++j) a.slopes.push_back(trial == 0 ? Q(0) : random_rational(2, 8));
        const Mechanism mech = Mechanism::linear(a);
        const Mechanism bc = transforms::bcgc_transform(s, mech);
        check(analysis::check_feasible(s, bc, g).feasible, "BCGC infeasible: " + mech.describe());
        if (analysis::check_feasible(s, mech, g).feasible) {
          const auto cmp = analysis::compare(s, mech, bc, g);
          check(cmp.equal || cmp.dominates == Verdict::Yes, "BCGC fails to dominate: " + mech.describe());
        }
      }
    }
  }

  // averaging keeps feasibility and welfare dominance: 100 random per-agent families on {0,1,2}^3
  {
    const AuctionSetting s = AuctionSetting::make(3, 1, Q(0), Q(2));
    const GridSpec g = GridSpec::uniform(s, 3);
    std::uniform_int_distribution<long> num(-6, 6), drop(0, 2);
    int good = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<AgentRebateTable> family(3);
      for (auto& h : family) {
        enumerate::for_each_profile(g, 2, [&](const Tuple& x) { h.set(x, Q(num(rng), 2)); });
      }
      Rational worst;
      bool first = true;
      enumerate::for_each_profile(g, 3, [&](const Tuple& v) {
        const Rational tt = total_tax(s, Mechanism::per_agent(family), TypeProfile(s, v));
        if (first || tt > worst) worst = tt;
        first = false;
      });
      for (auto& h : family) {
        AgentRebateTable shifted;
        for (const auto& [key, value] : h) shifted.set(key, value - worst / 3);
        h = std::move(shifted);
      }
      RebateTable h0;
      for (const auto& x : enumerate::multisets(g, 2)) {
        Rational low;
        bool init = false;
        enumerate::for_each_arrangement(x, [&](const Tuple& y) {
          for (const auto& hj : family) {
            if (!init || hj.at(y) < low) low = hj.at(y);
            init = true;
          }
        });
        h0.set(x, low - Q(drop(rng), 2) - (x == T({0, 0}) ? Q(1, 4) : Q(0)));
      }
      const Mechanism h = Mechanism::per_agent(family);
      const Mechanism anon0 = Mechanism::tabular(h0);
      const Mechanism averaged = Mechanism::tabular(transforms::anonymize(family, g));
      const bool premise = analysis::check_feasible(s, h, g).feasible &&
                           analysis::compare(s, anon0, h, g).welfare_dominates == Verdict::Yes;
      const bool lemma = analysis::check_feasible(s, averaged, g).feasible &&
                         analysis::compare(s, anon0, averaged, g).welfare_dominates == Verdict::Yes;
      good += premise && lemma;
    }
    check(good == 100, "averaging held on " + std::to_string(good) + "/100 families");
  }

  // ledger identity
  {
    int good = 0;
    std::uniform_int_distribution<long> step(0, 20);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + trial % 6;
      const std::size_t m = 1 + (trial / 6) % (n - 1);
      const AuctionSetting s = AuctionSetting::make(n, m, Q(-2), Q(7));
      RebateCoefficients a{random_rational(9, 6), {}};
      for (std::size_t j = 1; j < n; ++j) a.slopes.push_back(random_rational(9, 6));
      Tuple v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(Q(-2) + Q(9 * step(rng), 20));
      const TypeProfile p(s, v);
      const auto c = analysis::total_coefficients(s, a).c;
      Rational rhs = c[0];
      for (std::size_t j = 1; j <= n; ++j) rhs += c[j] * sorted_stat(p, j);
      good += total_tax(s, Mechanism::linear(a), p) == rhs;
    }
    check(good == 1000, "ledger identity held on " + std::to_string(good) + "/1000 pairs");
  }
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "welfare-gap fixture reproduction", 1.0, welfare_gap},
      {2, "OEL feasibility and zero boundary, n <= 6, 5-point grid", 10.0, oel_boundary},
      {3, "Bcgc(Vcg) equals Oel(k=m+1)", 5.0, bc_is_oel},
      {4, "no welfare improvement over OEL on {0,1,2,3}^4 (grid-certified)", 30.0, oel_welfare_oracle},
      {5, "linear classifier: OEL recognized, perturbations rejected, oracle agrees", 5.0, classifier},
      {6, "equal-share project: zero surplus, VCG welfare-undominated (grid-certified)", 60.0,
       equal_share_project},
      {7, "general project instance: S_1 = -10, t_1 = 10/3, BCGC dominates, not pay-only", 1.0,
       general_project},
      {8, "no pay-only dominating anonymous mechanism (grid-certified, partial)", 60.0, pay_only_oracle},
      {9, "property suites: strategy-proofness, BCGC, averaging, ledger identity", 60.0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) {
      std::ostringstream what;
      what << "took " << secs << " s, limit " << c.limit_s << " s";
      check(false, what.str());
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " ("
              << std::fixed << std::setprecision(3) << secs << " s)";
    if (!ok) {
      std::cout << ": " << check.failures.front();
      if (check.failures.size() > 1) std::cout << " (+" << check.failures.size() - 1 << " more)";
    }
    std::cout << '\n';
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/"
            << criteria.size() << '\n';
  return failed ? 1 : 0;
}
