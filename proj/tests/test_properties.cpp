#include "doctest.h"
#include "groves/analysis.hpp"
#include "groves/auction.hpp"
#include "groves/fixtures.hpp"
#include "groves/transforms.hpp"
#include "helpers.hpp"

using namespace groves;
using namespace testing;

namespace {

struct Case {
  Setting setting;
  GridSpec grid;
  std::vector<Mechanism> mechanisms;
};

/// One mechanism of every variant for each domain, on small grids.
std::vector<Case> all_variants() {
  std::vector<Case> out;
  {
    const AuctionSetting s = AuctionSetting::make(3, 1, Q(0), Q(2));
    const GridSpec g = GridSpec::uniform(s, 4);
    RebateTable table;
    std::vector<AgentRebateTable> family(3);
    std::uniform_int_distribution<long> num(-3, 3);
    for (const auto& x : enumerate::multisets(g, 2)) table.set(x, Q(num(rng()), 3));
    for (auto& h : family) {
      enumerate::for_each_profile(g, 2, [&](const Tuple& x) { h.set(x, Q(num(rng()), 5)); });
    }
    RebateTable delta;
    for (const auto& x : enumerate::multisets(g, 2)) delta.set(x, Q(num(rng()), 7));
    out.push_back({s, g,
                   {Mechanism::vcg(), Mechanism::linear({Q(1, 3), T("1/2,-1/5")}),
                    Mechanism::oel(s, 0), Mechanism::oel(s, 2), Mechanism::tabular(table),
                    Mechanism::per_agent(family), transforms::bcgc_transform(s, Mechanism::vcg()),
                    transforms::bcgc_transform(s, Mechanism::tabular(table), SurplusStrategy::on_grid(g)),
                    Mechanism::shifted(Mechanism::oel(s, 2), delta)}});
  }
  {
    const AuctionSetting s = AuctionSetting::make(4, 2, Q(1), Q(3));
    out.push_back({s, GridSpec::uniform(s, 3),
                   {Mechanism::vcg(), Mechanism::oel(s, 1), Mechanism::oel(s, 3),
                    transforms::bcgc_transform(s, Mechanism::linear({Q(0), T("1/3,0,1/4")}))}});
  }
  {
    const PublicProjectSetting s = PublicProjectSetting::make(Q(100), T({10, 40, 50}));
    const Setting setting = s;
    out.push_back({setting, GridSpec::uniform(setting, 6),
                   {Mechanism::vcg(), transforms::bcgc_transform(setting, Mechanism::vcg()),
                    Mechanism::linear({Q(-5), T("1/10,1/7")}),
                    transforms::bcgc_transform(setting, Mechanism::linear({Q(-5), T("1/10,1/7")}))}});
  }
  {
    const Setting setting = PublicProjectSetting::equal_shares(3, Q(3));
    out.push_back({setting, GridSpec::uniform(setting, 7),
                   {Mechanism::vcg(), transforms::bcgc_transform(setting, Mechanism::vcg())}});
  }
  return out;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("strategy-proofness on grids for every mechanism variant") {
    for (const auto& c : all_variants()) {
      const std::size_t n = agent_count(c.setting);
      for (const auto& mech : c.mechanisms) {
        bool ok = true;
        enumerate::for_each_profile(c.grid, n, [&](const Tuple& v) {
          if (!ok) return;
          const TypeProfile truth(c.setting, v);
          const TaxReport honest = evaluate(c.setting, mech, truth);
          for (std::size_t i = 0; i < n && ok; ++i) {
            for (const auto& lie : c.grid.points) {
              Tuple w = v;
              w[i] = lie;
              const TypeProfile dev(c.setting, w);
              const Decision d = efficient_decision(c.setting, dev);
              const Rational u = valuation(c.setting, d, i, v[i]) + taxes(c.setting, mech, dev)[i];
              if (u > honest.utilities[i]) ok = false;
            }
          }
        });
        CHECK_MESSAGE(ok, mech.describe());
      }
    }
  }

  TEST_CASE("Groves structure: the rebate ignores the agent's own report") {
    for (const auto& c : all_variants()) {
      const std::size_t n = agent_count(c.setting);
      for (const auto& mech : c.mechanisms) {
        bool ok = true;
        enumerate::for_each_profile(c.grid, n - 1, [&](const Tuple& others) {
          for (std::size_t i = 0; i < n && ok; ++i) {
            std::optional<Rational> first;
            for (const auto& own : c.grid.points) {
              const TypeProfile p(c.setting, insert_at(others, i, own));
              const Rational h = taxes(c.setting, mech, p)[i] - vcg_taxes(c.setting, p)[i];
              if (!first) first = h;
              else if (*first != h) ok = false;
            }
          }
        });
        CHECK_MESSAGE(ok, mech.describe());
      }
    }
  }

  TEST_CASE("welfare identity and permutation invariance of G") {
    for (const auto& c : all_variants()) {
      const std::size_t n = agent_count(c.setting);
      for (int trial = 0; trial < 30; ++trial) {
        Tuple v = random_profile(c.grid, n);
        const TypeProfile p(c.setting, v);
        const Rational g = initial_welfare(c.setting, p);
        for (const auto& mech : c.mechanisms) {
          const auto rep = evaluate(c.setting, mech, p);
          CHECK(rep.welfare == g + rep.total_tax);
        }
        if (is_auction(c.setting) ||
            std::get<PublicProjectSetting>(c.setting).has_equal_shares()) {
          std::shuffle(v.begin(), v.end(), rng());
          CHECK(initial_welfare(c.setting, TypeProfile(c.setting, v)) == g);
        }
      }
    }
  }

  TEST_CASE("dominance implies welfare dominance") {
    for (const auto& c : all_variants()) {
      for (std::size_t a = 0; a < c.mechanisms.size(); ++a) {
        for (std::size_t b = 0; b < c.mechanisms.size(); ++b) {
          const auto r = analysis::compare(c.setting, c.mechanisms[a], c.mechanisms[b], c.grid);
          if (r.dominates == analysis::Verdict::Yes) CHECK(r.welfare_dominates == analysis::Verdict::Yes);
          if (r.equal) {
            CHECK(r.dominates == analysis::Verdict::No);
            CHECK(r.welfare_dominates == analysis::Verdict::No);
            CHECK_FALSE(r.violation_witness);
          }
          if (a == b) CHECK(r.equal);
        }
      }
    }
  }

  TEST_CASE("ledger identity on 1000 random (a, theta) pairs") {
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + trial % 6;
      const std::size_t m = 1 + (trial / 6) % (n - 1);
      const auto s = AuctionSetting::make(n, m, Q(-2), Q(7));
      RebateCoefficients a{random_rational(9), {}};
      for (std::size_t j = 1; j < n; ++j) a.slopes.push_back(random_rational(9));
      std::uniform_int_distribution<long> step(0, 20);
      Tuple v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(Q(-2) + Q(9 * step(rng()), 20));
      const TypeProfile p(s, v);
      const auto c = analysis::total_coefficients(s, a).c;
      Rational rhs = c[0];
      for (std::size_t j = 1; j <= n; ++j) rhs += c[j] * sorted_stat(p, j);
      CHECK(total_tax(s, Mechanism::linear(a), p) == rhs);
      ++checked;
    }
    CHECK(checked == 1000);
  }

  TEST_CASE("averaging keeps feasibility and welfare dominance over 100 random families on {0,1,2}^3") {
    const AuctionSetting s = AuctionSetting::make(3, 1, Q(0), Q(2));
    const GridSpec g = GridSpec::uniform(s, 3);
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> drop(0, 2);
    int feasible_ok = 0, dominance_ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<AgentRebateTable> family(3);
      for (auto& h : family) {
        enumerate::for_each_profile(g, 2, [&](const Tuple& x) { h.set(x, Q(num(rng()), 2)); });
      }
      // shift by a constant so the family is feasible on the grid
      Rational worst;
      bool first = true;
      enumerate::for_each_profile(g, 3, [&](const Tuple& v) {
        const Rational t = total_tax(s, Mechanism::per_agent(family), TypeProfile(s, v));
        if (first || t > worst) worst = t;
        first = false;
      });
      for (auto& h : family) {
        AgentRebateTable shifted;
        for (const auto& [key, value] : h) shifted.set(key, value - worst / 3);
        h = std::move(shifted);
      }
      const Mechanism h = Mechanism::per_agent(family);
      REQUIRE(analysis::check_feasible(s, h, g).feasible);

      // an anonymous h0 that h welfare dominates: below every agent's value on every arrangement
      RebateTable h0;
      bool any_gap = false;
      for (const auto& x : enumerate::multisets(g, 2)) {
        Rational low;
        bool init = false;
        enumerate::for_each_arrangement(x, [&](const Tuple& y) {
          for (const auto& hj : family) {
            if (!init || hj.at(y) < low) low = hj.at(y);
            init = true;
          }
        });
        const long gap = drop(rng());
        any_gap = any_gap || gap > 0;
        h0.set(x, low - Q(gap, 2));
      }
      if (!any_gap) h0.set(T({0, 0}), h0.at(T({0, 0})) - 1);
      const Mechanism anon0 = Mechanism::tabular(h0);
      REQUIRE(analysis::compare(s, anon0, h, g).welfare_dominates == analysis::Verdict::Yes);

      const Mechanism averaged = Mechanism::tabular(transforms::anonymize(family, g));
      if (analysis::check_feasible(s, averaged, g).feasible) ++feasible_ok;
      if (analysis::compare(s, anon0, averaged, g).welfare_dominates == analysis::Verdict::Yes) {
        ++dominance_ok;
      }
    }
    CHECK(feasible_ok == 100);
    CHECK(dominance_ok == 100);
  }
}
