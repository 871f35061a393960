#include "rotkit/exact_core.hpp"

#include <limits>
#include <numeric>

#include "rotkit/errors.hpp"

namespace rotkit {

Fraction mediant(const Fraction& left, const Fraction& right) {
  if (!(left < right)) {
    throw InvalidArgument("mediant requires left < right, got " + left.str() + " and " + right.str());
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (left.q() > kMax - right.q()) throw ResourceLimit("mediant denominator overflows 64 bits");
  const std::uint64_t p = left.p() + right.p();
  const std::uint64_t q = left.q() + right.q();
  // Farey neighbours give a reduced mediant; other pairs need reducing.
  const std::uint64_t g = std::gcd(p, q);
  return Fraction(p / g, q / g);
}

std::size_t row_size(unsigned k, std::size_t cap) {
  if (k == 0) throw InvalidArgument("row index must be >= 1");
  if (k - 1 >= std::numeric_limits<std::size_t>::digits - 1 || (std::size_t{1} << (k - 1)) + 1 > cap) {
    throw ResourceLimit("row " + std::to_string(k) + " exceeds the materialization cap of " +
                        std::to_string(cap) + " entries");
  }
  return (std::size_t{1} << (k - 1)) + 1;
}

std::vector<Fraction> stern_brocot_row(unsigned k, std::size_t cap) {
  const std::size_t n = row_size(k, cap);
  std::vector<Fraction> row{Fraction(0, 1), Fraction(1, 1)};
  row.reserve(n);
  for (unsigned level = 1; level < k; ++level) {
    std::vector<Fraction> next;
    next.reserve(2 * row.size() - 1);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      next.push_back(row[j]);
      next.push_back(mediant(row[j], row[j + 1]));
    }
    next.push_back(row.back());
    row = std::move(next);
  }
  return row;
}

std::uint64_t stern_brocot_depth(const Fraction& f) {
  if (f.p() == 0 || f.p() == f.q()) return 1;
  std::uint64_t a = f.q();
  std::uint64_t b = f.p();
  std::uint64_t sum = 0;
  while (b != 0) {
    sum += a / b;
    a %= b;
    std::swap(a, b);
  }
  return sum;
}

BigInt fibonacci(unsigned long l) {
  BigInt out;
  mpz_fib_ui(out.get_mpz_t(), l);
  return out;
}

std::vector<Convergent> ContinuedFraction::convergents() const {
  std::vector<Convergent> out;
  out.reserve(terms.size());
  BigInt p_prev = 1, q_prev = 0;
  BigInt p = terms.empty() ? BigInt(0) : terms[0];
  BigInt q = 1;
  if (terms.empty()) return out;
  out.push_back({p, q});
  for (std::size_t i = 1; i < terms.size(); ++i) {
    BigInt pn = terms[i] * p + p_prev;
    BigInt qn = terms[i] * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(pn);
    q = std::move(qn);
    out.push_back({p, q});
  }
  return out;
}

Rational ContinuedFraction::value() const {
  if (terms.empty()) throw InvalidArgument("empty continued fraction");
  const auto conv = convergents();
  return Rational(conv.back().p, conv.back().q);
}

std::string ContinuedFraction::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == 1) out += "; ";
    else if (i > 1) out += ", ";
    out += terms[i].get_str();
  }
  return out + "]";
}

ContinuedFraction continued_fraction_of(const Rational& x) {
  if (x.sign() < 0 || x >= Rational(1)) {
    throw InvalidArgument("continued_fraction_of expects 0 <= x < 1, got " + x.str());
  }
  ContinuedFraction cf;
  BigInt a = x.num();
  BigInt b = x.den();
  while (b != 0) {
    BigInt quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    cf.terms.push_back(quot);
    a = std::move(b);
    b = std::move(rem);
  }
  // Euclid on a reduced fraction already ends with a term >= 2 (or is [0]).
  return cf;
}

}  // namespace rotkit
