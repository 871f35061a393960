#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rotkit {

using BigInt = mpz_class;

// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& value) : v_(value) {}
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& value) : v_(value) { v_.canonicalize(); }

  // Accepts "n/d" or "n" (optional sign on n). Throws ParseError.
  static Rational parse(std::string_view text);
  // Exact value of a finite decimal such as "1e-18", "0.25" or "3".
  static Rational parse_decimal(std::string_view text);
  // 2^e for any integer e.
  static Rational pow2(long e);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  const mpq_class& mpq() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  BigInt floor() const;
  BigInt ceil() const;
  Rational frac() const { return *this - Rational(floor()); }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational pow(unsigned long e) const;

  // Total bit length of numerator and denominator.
  std::size_t bit_size() const;
  double to_double() const { return v_.get_d(); }
  // "num/den" (denominator always printed).
  std::string str() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Reduced fraction p/q with 0 <= p <= q, the candidates for rotation numbers.
class Fraction {
 public:
  Fraction() : p_(0), q_(1) {}
  // Throws InvalidArgument unless gcd(p,q) = 1, q > 0 and p <= q.
  Fraction(std::uint64_t p, std::uint64_t q);

  static Fraction parse(std::string_view text);
  static Fraction from_rational(const Rational& r);

  std::uint64_t p() const { return p_; }
  std::uint64_t q() const { return q_; }
  Rational value() const { return Rational(BigInt(to_mpz(p_)), BigInt(to_mpz(q_))); }
  std::string str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

 private:
  static BigInt to_mpz(std::uint64_t v);
  std::uint64_t p_;
  std::uint64_t q_;
};

BigInt to_bigint(std::uint64_t v);
// Throws InvalidArgument when v does not fit.
std::uint64_t to_u64(const BigInt& v);

}  // namespace rotkit
