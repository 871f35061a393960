#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/exact_core.hpp"

using namespace rotkit;

namespace {

std::vector<std::string> strs(const std::vector<Fraction>& row) {
  std::vector<std::string> out;
  for (const auto& f : row) out.push_back(f.str());
  return out;
}

}  // namespace

TEST_CASE("mediant") {
  CHECK(mediant(Fraction(0, 1), Fraction(1, 1)) == Fraction(1, 2));
  CHECK(mediant(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5));
  const Fraction m = mediant(Fraction(1, 2), Fraction(2, 3));
  CHECK(m == Fraction(3, 5));
  // Farey-neighbour determinants on both sides.
  CHECK(m.p() * 2 - 1 * m.q() == 1);
  CHECK(2 * m.q() - m.p() * 3 == 1);
  CHECK_THROWS_AS(mediant(Fraction(1, 2), Fraction(1, 3)), InvalidArgument);
  CHECK_THROWS_AS(mediant(Fraction(1, 2), Fraction(1, 2)), InvalidArgument);
}

TEST_CASE("stern_brocot_row small rows") {
  CHECK(strs(stern_brocot_row(1)) == std::vector<std::string>{"0/1", "1/1"});
  CHECK(strs(stern_brocot_row(2)) == std::vector<std::string>{"0/1", "1/2", "1/1"});
  CHECK(strs(stern_brocot_row(3)) == std::vector<std::string>{"0/1", "1/3", "1/2", "2/3", "1/1"});
  const auto row5 = stern_brocot_row(5);
  CHECK(row5.size() == 17);
  std::uint64_t max_q = 0;
  for (const auto& f : row5) max_q = std::max(max_q, f.q());
  CHECK(max_q == 8);
  CHECK(max_q == oracle::fib_loop(6));
}

TEST_CASE("row construction respects the cap") {
  CHECK_THROWS_AS(stern_brocot_row(0), InvalidArgument);
  CHECK_THROWS_AS(stern_brocot_row(24), ResourceLimit);
  CHECK_THROWS_AS(stern_brocot_row(5, 16), ResourceLimit);
  CHECK(stern_brocot_row(5, 17).size() == 17);
}

TEST_CASE("rows are unimodular, increasing and refine each other") {
  std::vector<Fraction> prev = stern_brocot_row(1);
  for (unsigned k = 2; k <= 14; ++k) {
    const auto row = stern_brocot_row(k);
    REQUIRE(row.size() == (std::size_t{1} << (k - 1)) + 1);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      const auto& l = row[j];
      const auto& r = row[j + 1];
      CHECK(r.p() * l.q() - l.p() * r.q() == 1);
    }
    for (std::size_t j = 0; j < prev.size(); ++j) CHECK(row[2 * j] == prev[j]);
    prev = row;
  }
}

TEST_CASE("row k contains every reduced fraction with denominator <= k") {
  for (unsigned k = 1; k <= 16; ++k) {
    const auto row = stern_brocot_row(k);
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& f : row) seen.emplace(f.p(), f.q());
    for (const auto& [p, q] : oracle::farey_sequence(k)) {
      CHECK_MESSAGE(seen.count({p, q}) == 1, "row ", k, " misses ", p, "/", q);
    }
  }
}

TEST_CASE("stern_brocot_depth matches first appearance") {
  for (unsigned k = 1; k <= 12; ++k) {
    const auto row = stern_brocot_row(k);
    const auto prev = k > 1 ? stern_brocot_row(k - 1) : std::vector<Fraction>{};
    for (std::size_t j = 0; j < row.size(); ++j) {
      const bool is_new = k == 1 || j % 2 == 1;
      if (is_new) CHECK(stern_brocot_depth(row[j]) == k);
    }
  }
}

TEST_CASE("fibonacci") {
  CHECK(fibonacci(0) == 0);
  CHECK(fibonacci(1) == 1);
  CHECK(fibonacci(2) == 1);
  CHECK(fibonacci(7) == 13);
  CHECK(fibonacci(10) == 55);
  for (unsigned l = 0; l < 90; ++l) CHECK(fibonacci(l) == BigInt(std::to_string(oracle::fib_loop(l))));
}

TEST_CASE("continued_fraction_of examples") {
  CHECK(continued_fraction_of(Rational::parse("2/5")).str() == "[0; 2, 2]");
  CHECK(continued_fraction_of(Rational(0)).str() == "[0]");
  CHECK(continued_fraction_of(Rational::parse("5/8")).str() == "[0; 1, 1, 1, 2]");
  CHECK_THROWS_AS(continued_fraction_of(Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(continued_fraction_of(Rational(-1)), InvalidArgument);
}

TEST_CASE("continued fractions reconstruct random rationals exactly") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long long> dist(1, 999999);
  for (int i = 0; i < 1000; ++i) {
    long long a = dist(rng), b = dist(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const Rational x(BigInt(std::to_string(a)), BigInt(std::to_string(b)));
    const ContinuedFraction cf = continued_fraction_of(x);
    CHECK(cf.value() == x);
    CHECK(cf.terms.front() == 0);
    if (cf.terms.size() > 1) CHECK(cf.terms.back() >= 2);
    // Same terms as plain Euclid on the reduced fraction.
    const auto expected = oracle::euclid_terms(std::stoll(x.num().get_str()), std::stoll(x.den().get_str()));
    REQUIRE(expected.size() == cf.terms.size());
    for (std::size_t t = 0; t < expected.size(); ++t) CHECK(cf.terms[t] == BigInt(std::to_string(expected[t])));
    // q_{l+1} = a_{l+1} q_l + q_{l-1}
    const auto conv = cf.convergents();
    for (std::size_t l = 2; l < conv.size(); ++l) CHECK(conv[l].q == cf.terms[l] * conv[l - 1].q + conv[l - 2].q);
  }
}
