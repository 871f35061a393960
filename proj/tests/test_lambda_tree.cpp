#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/lambda_tree.hpp"

using namespace rotkit;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

const Rational kLambdaSym = R("3/7");  // stands in for "any lambda"

}  // namespace

TEST_CASE("make_node evaluates c(lambda, p/q)") {
  const Rational& l = kLambdaSym;
  const FareyNode half = make_node(l, Fraction(1, 2));
  CHECK(half.cval == Rational(1));
  CHECK(half.qval == Rational(1) + l);

  const FareyNode third = make_node(l, Fraction(1, 3));
  CHECK(third.cval == Rational(1));
  CHECK(third.value() == Rational(1) / (Rational(1) + l + l * l));

  const FareyNode two_thirds = make_node(l, Fraction(2, 3));
  CHECK(two_thirds.cval == Rational(1) + l);
  CHECK(two_thirds.value() == (Rational(1) + l) / (Rational(1) + l + l * l));

  CHECK(make_node(l, Fraction(0, 1)).cval == Rational(0));
  CHECK(make_node(l, Fraction(1, 1)).cval == Rational(1));
  CHECK_THROWS_AS(make_node(Rational(0), Fraction(1, 2)), InvalidArgument);
  CHECK_THROWS_AS(make_node(R("3/2"), Fraction(1, 2)), InvalidArgument);
}

TEST_CASE("make_node values stay within [0,1] and Q = (1-l^q)/(1-l)") {
  const Rational l = R("5/9");
  for (const auto& f : stern_brocot_row(9)) {
    const FareyNode n = make_node(l, f);
    CHECK(n.qval == (Rational(1) - l.pow(f.q())) / (Rational(1) - l));
    CHECK(n.value().sign() >= 0);
    CHECK(n.value() <= Rational(1));
  }
}

TEST_CASE("lambda_mediant examples") {
  const Rational half = R("1/2");
  const BracketingPair root = root_pair(kLambdaSym);
  const FareyNode m = lambda_mediant(root);
  CHECK(m.frac == Fraction(1, 2));
  CHECK(m.value() == Rational(1) / (Rational(1) + kLambdaSym));

  const FareyNode n12 = make_node(half, Fraction(1, 2));
  const FareyNode n11 = make_node(half, Fraction(1, 1));
  const FareyNode n01 = make_node(half, Fraction(0, 1));
  const FareyNode n23 = lambda_mediant(n12, n11);
  CHECK(n23.frac == Fraction(2, 3));
  CHECK(n23.value() == R("6/7"));
  const FareyNode n13 = lambda_mediant(n01, n12);
  CHECK(n13.frac == Fraction(1, 3));
  CHECK(n13.value() == R("4/7"));

  CHECK_THROWS_AS(lambda_mediant(n01, n23), InvalidArgument);  // not neighbours
  CHECK_THROWS_AS(lambda_mediant(n01, make_node(R("1/3"), Fraction(1, 1))), InvalidArgument);
}

TEST_CASE("plateau examples at lambda = 1/2") {
  const Rational l = R("1/2");
  const Plateau p0 = plateau(make_node(l, Fraction(0, 1)));
  CHECK(p0.lo == Rational(0));
  CHECK(p0.hi == R("1/2"));
  const Plateau p12 = plateau(make_node(l, Fraction(1, 2)));
  CHECK(p12.lo == R("2/3"));
  CHECK(p12.hi == R("5/6"));
  const Plateau p13 = plateau(make_node(l, Fraction(1, 3)));
  CHECK(p13.lo == R("4/7"));
  CHECK(p13.hi == R("9/14"));
  CHECK(p13.hi < p12.lo);
  const Plateau p11 = plateau(make_node(l, Fraction(1, 1)));
  CHECK(p11.sentinel);
  CHECK(p11.lo == Rational(1));
  CHECK(p11.hi == Rational(1));
}

TEST_CASE("plateau agrees with the (1-l)/(1-l^q) c form") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Rational l = oracle::random_lambda(rng, 40);
    for (const auto& f : stern_brocot_row(8)) {
      if (f == Fraction(1, 1)) continue;
      const Plateau p = plateau(make_node(l, f));
      const auto [lo, hi] = oracle::plateau_by_formula(l, f.p(), f.q());
      CHECK(p.lo == lo);
      CHECK(p.hi == hi);
      CHECK(p.lo < p.hi);
    }
  }
}

TEST_CASE("rho_exact examples") {
  const RhoResult r0 = rho_exact(R("1/2"), R("1/4"));
  CHECK(r0.rho == Fraction(0, 1));
  CHECK(r0.depth == 1);

  const RhoResult r1 = rho_exact(R("1/2"), R("3/4"));
  CHECK(r1.rho == Fraction(1, 2));
  CHECK(r1.plateau.lo == R("2/3"));
  CHECK(r1.plateau.hi == R("5/6"));
  CHECK(r1.depth == 2);

  const RhoResult r2 = rho_exact(R("1/3"), R("3/4"));
  CHECK(r2.rho == Fraction(1, 2));
  CHECK(r2.plateau.lo == R("3/4"));

  CHECK(rho_exact(R("1/2"), Rational(0)).rho == Fraction(0, 1));
  CHECK(rho_exact(R("1/2"), R("1/2")).rho == Fraction(0, 1));  // closed endpoint 1 - lambda
}

TEST_CASE("rho_exact rejects bad input and reports depth exhaustion") {
  CHECK_THROWS_AS(rho_exact(Rational(1), R("1/2")), InvalidArgument);
  CHECK_THROWS_AS(rho_exact(R("1/2"), Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(rho_exact(R("1/2"), R("-1/3")), InvalidArgument);
  // delta = 1/49 with lambda = 49/50 needs a denominator near 193.
  try {
    rho_exact(R("49/50"), R("1/49"), 64);
    FAIL("expected DepthExceeded");
  } catch (const DepthExceeded& e) {
    CHECK(e.pair().depth == 64);
    const Plateau left = plateau(e.pair().left);
    CHECK(left.hi < R("1/49"));
    CHECK(R("1/49") < e.pair().right.value());
  }
  const RhoResult deep = rho_exact(R("49/50"), R("1/49"), 100000);
  CHECK(deep.rho.p() == 1);
  CHECK(deep.rho.q() > 64);
  CHECK(deep.plateau.contains(R("1/49")));
}

TEST_CASE("rho_exact agrees with a brute-force plateau scan") {
  std::mt19937_64 rng(5);
  const auto farey = oracle::farey_sequence(36);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Rational l = oracle::random_lambda(rng, 12);
    const Rational d = oracle::random_unit(rng, 30);
    const RhoResult r = rho_exact(l, d, 100000);
    if (r.rho.q() > 36) continue;
    int hits = 0;
    for (const auto& [p, q] : farey) {
      if (p == q) continue;
      const auto [lo, hi] = p == 0 ? std::pair{Rational(0), Rational(1) - l} : oracle::plateau_by_formula(l, p, q);
      if (lo <= d && d <= hi) {
        ++hits;
        CHECK(Fraction(p, q) == r.rho);
      }
    }
    CHECK(hits == 1);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("rho_exact is monotone in delta") {
  for (const char* ls : {"1/2", "2/3", "7/10"}) {
    const Rational l = R(ls);
    Fraction prev(0, 1);
    for (int i = 0; i < 1000; ++i) {
      const Rational d(BigInt(i), BigInt(1000));
      const Fraction cur = rho_exact(l, d, 100000).rho;
      CHECK(prev <= cur);
      prev = cur;
    }
  }
}

TEST_CASE("golden hypothesis and theorem2_bound") {
  CHECK(golden_hypothesis(1, 2) == GoldenHypothesis::holds);
  CHECK(golden_hypothesis(2, 3) == GoldenHypothesis::violated);  // 3 < 2^gamma ~ 3.07
  CHECK(golden_hypothesis(2, 4) == GoldenHypothesis::holds);
  CHECK_THROWS_AS(theorem2_bound(2, 3, 1, 2), HypothesisViolated);

  const Theorem2Bound t = theorem2_bound(1, 2, 3, 4);
  const double gamma = (1 + std::sqrt(5.0)) / 2;
  CHECK(t.bound_approx == doctest::Approx(std::pow(gamma, 2 + 3 * gamma)).epsilon(1e-12));
  CHECK(t.bound_approx == doctest::Approx(27.06).epsilon(1e-3));
  CHECK(t.max_q == 27);
  CHECK(t.level_k == 4);  // floor(3 gamma)
  CHECK(rho_exact(R("1/2"), R("3/4")).rho.q() <= 27);

  const Theorem2Bound t2 = theorem2_bound(1, 3, 1, 2);
  CHECK(t2.level_k == static_cast<std::uint64_t>(std::floor(gamma * std::log(6.0) / std::log(3.0))));
  CHECK_FALSE(t2.level_ambiguous);

  CHECK_THROWS_AS(theorem2_bound(2, 4, 1, 2), InvalidArgument);
  CHECK_THROWS_AS(theorem2_bound(1, 2, 2, 2), InvalidArgument);
}

TEST_CASE("rho_exact respects the theorem2 height bound and level") {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 1000) {
    const Rational l = oracle::random_lambda(rng, 40);
    const Rational d = oracle::random_unit(rng, 40);
    if (d.sign() == 0 || golden_hypothesis(l.num(), l.den()) != GoldenHypothesis::holds) continue;
    const Theorem2Bound t = theorem2_bound(l.num(), l.den(), d.num(), d.den());
    const RhoResult r = rho_exact(l, d);
    CHECK(BigInt(std::to_string(r.rho.q())) <= t.max_q);
    CHECK(r.depth <= t.level_k + 2);
    ++checked;
  }
}

TEST_CASE("lemma8_check on gap instances found by row scan") {
  const Rational l = R("2/5");
  const Rational d = R("2/3");
  int instances = 0;
  for (unsigned k = 1; k <= 8; ++k) {
    const auto row = tree_row(l, k);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      const Rational gap_lo = plateau(row[j]).hi;
      const Rational gap_hi = row[j + 1].value();
      if (gap_lo < d && d < gap_hi) {
        const Lemma8Report rep = lemma8_check(BracketingPair{row[j], row[j + 1], k}, d, 3);
        CHECK(rep.holds);
        ++instances;
      }
    }
  }
  CHECK(instances >= 1);
  // lambda = 1/2: a = 1 so the audit reads 2^m <= 2s.
  const auto row = tree_row(R("1/2"), 1);
  const Lemma8Report rep = lemma8_check(BracketingPair{row[0], row[1], 1}, R("3/4"), 4);
  CHECK(rep.holds);
  CHECK(rep.lhs == 2);
  CHECK(rep.rhs == 8);
}

TEST_CASE("lemma8_check precondition errors") {
  const auto row = tree_row(R("1/2"), 2);
  // 3/4 sits inside the plateau [2/3, 5/6] of 1/2.
  CHECK_THROWS_AS(lemma8_check(BracketingPair{row[1], row[2], 2}, R("3/4"), 4), PreconditionViolated);
  CHECK_THROWS_AS(lemma8_check(BracketingPair{row[0], row[1], 2}, R("1/4"), 4), PreconditionViolated);
  CHECK_THROWS_AS(lemma8_check(BracketingPair{row[0], row[1], 2}, R("3/5"), 3), PreconditionViolated);
}

TEST_CASE("lemma8 holds on every gap instance over random parameters") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) {
    const Rational l = oracle::random_lambda(rng, 20);
    const Rational d = oracle::random_unit(rng, 20);
    for (unsigned k = 1; k <= 7; ++k) {
      const auto row = tree_row(l, k);
      for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        if (plateau(row[j]).hi < d && d < row[j + 1].value()) {
          CHECK(lemma8_check(BracketingPair{row[j], row[j + 1], k}, d, d.den()).holds);
        }
      }
    }
  }
}

TEST_CASE("tree_row values") {
  const auto r2 = tree_row(R("1/2"), 2);
  REQUIRE(r2.size() == 3);
  CHECK(r2[0].value() == Rational(0));
  CHECK(r2[1].value() == R("2/3"));
  CHECK(r2[2].value() == Rational(1));
  const auto r3 = tree_row(R("1/2"), 3);
  const std::vector<Rational> expected{Rational(0), R("4/7"), R("2/3"), R("6/7"), Rational(1)};
  REQUIRE(r3.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(r3[i].value() == expected[i]);
  for (unsigned k = 1; k <= 10; ++k) {
    const auto classical = stern_brocot_row(k);
    const auto deformed = tree_row(Rational(1), k);
    REQUIRE(classical.size() == deformed.size());
    for (std::size_t i = 0; i < classical.size(); ++i) CHECK(deformed[i].value() == classical[i].value());
  }
  CHECK_THROWS_AS(tree_row(R("1/2"), 30), ResourceLimit);
}

TEST_CASE("exact structural identities on rows up to 12") {
  std::mt19937_64 rng(3);
  std::vector<Rational> lambdas{R("1/2"), R("1/3"), R("2/5"), R("9/10")};
  while (lambdas.size() < 50) lambdas.push_back(oracle::random_lambda(rng, 30));
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const Rational& l = lambdas[li];
    // Full depth 12 for a subset, depth 9 for the rest keeps the run short.
    const unsigned depth = li < 8 ? 12 : 9;
    const auto row = tree_row(l, depth);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      const FareyNode& a = row[j];
      const FareyNode& b = row[j + 1];
      // gap identity
      CHECK(b.value() - a.value() == l.pow(a.frac.q() - 1) / (a.qval * b.qval));
      // plateau ordering
      const Plateau pa = plateau(a);
      CHECK(pa.lo <= pa.hi);
      CHECK(pa.hi < b.value());
      // unimodularity
      CHECK(b.frac.p() * a.frac.q() - a.frac.p() * b.frac.q() == 1);
    }
    // mediant construction agrees with the direct sum
    for (std::size_t j = 1; j + 1 < row.size(); j += 2) {
      const FareyNode direct = make_node(l, row[j].frac);
      CHECK(direct.cval == row[j].cval);
      CHECK(direct.qval == row[j].qval);
    }
  }
}
