#pragma once

#include <string>

#include <mpfr.h>

#include "rotkit/rational.hpp"

namespace rotkit {

enum class Round { nearest, down, up };

// Owning wrapper around an mpfr_t. Every arithmetic helper takes an explicit
// rounding direction so callers can build outward-rounded enclosures.
class BigFloat {
 public:
  static constexpr long kDefaultPrecision = 128;

  explicit BigFloat(long precision_bits = kDefaultPrecision);
  BigFloat(const Rational& value, long precision_bits, Round rnd = Round::nearest);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static BigFloat from_int(const BigInt& v, long precision_bits, Round rnd = Round::nearest);

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  // Exact conversion: every finite binary float is a rational.
  Rational to_rational() const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  BigInt floor() const;
  int sign() const { return mpfr_sgn(v_); }

  // Fixed-point decimal with `digits` places after the point, rounded in the
  // given direction.
  std::string to_fixed(int digits, Round rnd = Round::nearest) const;
  // Scientific notation with `digits` significant digits.
  std::string to_sci(int digits, Round rnd = Round::nearest) const;

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }

 private:
  mpfr_t v_;
};

mpfr_rnd_t to_mpfr(Round r);

BigFloat add(const BigFloat& a, const BigFloat& b, Round rnd);
BigFloat sub(const BigFloat& a, const BigFloat& b, Round rnd);
BigFloat mul(const BigFloat& a, const BigFloat& b, Round rnd);
BigFloat div(const BigFloat& a, const BigFloat& b, Round rnd);
BigFloat log(const BigFloat& a, Round rnd);
BigFloat exp(const BigFloat& a, Round rnd);
BigFloat pow(const BigFloat& base, const BigFloat& exponent, Round rnd);
BigFloat sqrt(const BigFloat& a, Round rnd);
BigFloat abs(const BigFloat& a);

// log of a positive integer / rational, rounded in the given direction.
BigFloat log_of(const BigInt& v, long precision_bits, Round rnd);
BigFloat log_of(const Rational& v, long precision_bits, Round rnd);

// Working precision from ROTKIT_PRECISION_BITS when set and >= 64, else fallback.
long precision_from_env(long fallback);

}  // namespace rotkit
