#include <doctest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "rotkit/cantor.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/lambda_tree.hpp"

using namespace rotkit;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

}  // namespace

TEST_CASE("cover_row examples at lambda = 1/2") {
  const CoverRow r1 = cover_row(R("1/2"), 1);
  REQUIRE(r1.gaps.size() == 1);
  CHECK(r1.gaps[0].lo == R("1/2"));
  CHECK(r1.gaps[0].hi == Rational(1));
  CHECK(r1.gaps[0].length == R("1/2"));

  const CoverRow r2 = cover_row(R("1/2"), 2);
  REQUIRE(r2.gaps.size() == 2);
  CHECK(r2.gaps[0].lo == R("1/2"));
  CHECK(r2.gaps[0].hi == R("2/3"));
  CHECK(r2.gaps[1].lo == R("5/6"));
  CHECK(r2.gaps[1].hi == Rational(1));
  for (const auto& g : r2.gaps) CHECK(g.length == R("1/4") / R("3/2"));

  const CoverRow r3 = cover_row(R("1/2"), 3);
  CHECK(r3.gaps.size() == 4);
  CHECK(r3.total_length() < r2.total_length());
  CHECK(r2.total_length() == R("1/3"));
}

TEST_CASE("gap endpoints agree with the plateau formula oracle") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 15; ++i) {
    const Rational l = oracle::random_lambda(rng, 25);
    const unsigned k = 6;
    const CoverRow row = cover_row(l, k);
    const auto fr = stern_brocot_row(k);
    REQUIRE(row.gaps.size() + 1 == fr.size());
    for (std::size_t j = 0; j < row.gaps.size(); ++j) {
      const auto [lo_a, hi_a] = fr[j].p() == 0 ? std::pair{Rational(0), Rational(1) - l}
                                               : oracle::plateau_by_formula(l, fr[j].p(), fr[j].q());
      const Rational lo_b = fr[j + 1].p() == fr[j + 1].q() ? Rational(1)
                                                            : oracle::plateau_by_formula(l, fr[j + 1].p(), fr[j + 1].q()).first;
      CHECK(row.gaps[j].lo == hi_a);
      CHECK(row.gaps[j].hi == lo_b);
    }
  }
}

TEST_CASE("rows nest and measure shrinks") {
  for (const char* ls : {"1/2", "1/3", "3/5", "9/10"}) {
    const auto rows = cover_rows(R(ls), 10);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(nesting_violation(rows[k - 1], rows[k]).empty());
      CHECK(rows[k].total_length() < rows[k - 1].total_length());
      CHECK(rows[k].gaps.size() == 2 * rows[k - 1].gaps.size());
    }
  }
  CoverRow a = cover_row(R("1/2"), 3);
  const CoverRow b = cover_row(R("1/2"), 4);
  a.gaps[1].hi = a.gaps[1].lo + R("1/1000000");
  CHECK_FALSE(nesting_violation(a, b).empty());
  CHECK_THROWS_AS(cover_row(Rational(1), 3), InvalidArgument);
  CHECK_THROWS_AS(cover_row(R("1/2"), 24), ResourceLimit);
}

TEST_CASE("lemma9 examples") {
  const Lemma9Report a = lemma9_certificate(R("1/2"), 2, Rational(1));
  CHECK(a.total_length == R("1/3"));
  CHECK(a.ok());
  CHECK(std::stod(a.bound_lower) == doctest::Approx(1.5));
  CHECK(std::stod(a.sum_upper) == doctest::Approx(1.0 / 3));

  const Lemma9Report b = lemma9_certificate(R("1/2"), 1, Rational(1));
  CHECK(b.max_length == R("1/2"));
  CHECK(b.max_length == b.lambda_k);
  CHECK(b.max_ok);

  const Lemma9Report c = lemma9_certificate(R("3/5"), 10, R("1/2"));
  CHECK(c.ok());
  CHECK(c.margin > 0);
  CHECK(c.min_q_sum >= 11);

  CHECK_THROWS_AS(lemma9_certificate(R("1/2"), 2, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(lemma9_certificate(R("1/2"), 2, R("3/2")), InvalidArgument);
}

TEST_CASE("lemma9 certificates over a lambda grid") {
  for (int i = 1; i <= 9; ++i) {
    const Rational l(BigInt(i), BigInt(10));
    const auto rows = cover_rows(l, 10);
    for (const auto& row : rows) {
      for (const char* s : {"1/4", "1/2", "1", "1/3"}) {
        const Lemma9Report rep = lemma9_certificate(row, R(s));
        CHECK(rep.ok());
      }
    }
  }
}

TEST_CASE("golden nest") {
  const GoldenNest n1 = golden_nest(R("1/2"), 1);
  REQUIRE(n1.intervals.size() == 2);
  CHECK(n1.intervals[0].lo == R("1/2"));
  CHECK(n1.intervals[0].hi == Rational(1));
  CHECK(n1.intervals[1].lo == R("5/6"));
  CHECK(n1.intervals[1].hi == Rational(1));
  CHECK(n1.nested);
  CHECK(n1.delta_inside);

  for (const char* ls : {"1/2", "1/3", "2/5", "7/10"}) {
    const GoldenNest n = golden_nest(R(ls), 12);
    CHECK(n.nested);
    CHECK(n.delta_inside);
    for (std::size_t l = 0; l < n.intervals.size(); ++l) {
      const NestInterval& iv = n.intervals[l];
      CHECK(iv.exponent_ok);
      // Endpoints are adjacent on row l+1 of the tree.
      CHECK(iv.right.p() * iv.left.q() - iv.left.p() * iv.right.q() == 1);
      CHECK(std::max(stern_brocot_depth(iv.left), stern_brocot_depth(iv.right)) == l + 1);
      CHECK(iv.lo == plateau(make_node(R(ls), iv.left)).hi);
      CHECK(iv.hi == make_node(R(ls), iv.right).value());
      CHECK(iv.length == R(ls).pow(iv.exponent) / (make_node(R(ls), iv.left).qval * make_node(R(ls), iv.right).qval));
      if (l >= 2) {
        CHECK(n.intervals[l - 2].lo < iv.lo);
        CHECK(iv.hi < n.intervals[l - 2].hi);
      }
    }
  }
  CHECK_THROWS_AS(golden_nest(R("1/2"), 40), ResourceLimit);
}

TEST_CASE("total length equals the direct sum of gap lengths") {
  for (const char* ls : {"1/2", "1/3", "3/4", "7/9"}) {
    for (unsigned k = 1; k <= 8; ++k) {
      const auto row = rotkit::cover_row(R(ls), k, false);
      rotkit::Rational direct(0);
      for (const auto& g : row.gaps) direct += g.hi - g.lo;
      CHECK(row.total_length() == direct);
    }
  }
}
