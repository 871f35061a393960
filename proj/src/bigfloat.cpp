#include "rotkit/bigfloat.hpp"

#include <cstdlib>
#include <memory>

#include "rotkit/errors.hpp"

namespace rotkit {

mpfr_rnd_t to_mpfr(Round r) {
  switch (r) {
    case Round::down: return MPFR_RNDD;
    case Round::up: return MPFR_RNDU;
    case Round::nearest: break;
  }
  return MPFR_RNDN;
}

BigFloat::BigFloat(long precision_bits) {
  if (precision_bits < MPFR_PREC_MIN || precision_bits > (1L << 24)) {
    throw InvalidArgument("unsupported float precision: " + std::to_string(precision_bits));
  }
  mpfr_init2(v_, static_cast<mpfr_prec_t>(precision_bits));
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const Rational& value, long precision_bits, Round rnd) : BigFloat(precision_bits) {
  mpfr_set_q(v_, value.mpq().get_mpq_t(), to_mpfr(rnd));
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::from_int(const BigInt& v, long precision_bits, Round rnd) {
  BigFloat out(precision_bits);
  mpfr_set_z(out.v_, v.get_mpz_t(), to_mpfr(rnd));
  return out;
}

Rational BigFloat::to_rational() const {
  if (!mpfr_number_p(v_)) throw InvalidArgument("non-finite float");
  if (mpfr_zero_p(v_)) return Rational(0);
  BigInt mant;
  const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
  return Rational(mant) * Rational::pow2(static_cast<long>(e));
}

BigInt BigFloat::floor() const {
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), v_, MPFR_RNDD);
  return out;
}

std::string BigFloat::to_fixed(int digits, Round rnd) const {
  char* buf = nullptr;
  const std::string fmt = "%." + std::to_string(digits) + "R*f";
  if (mpfr_asprintf(&buf, fmt.c_str(), to_mpfr(rnd), v_) < 0) throw Error("mpfr_asprintf failed");
  std::unique_ptr<char, decltype(&mpfr_free_str)> guard(buf, &mpfr_free_str);
  return std::string(buf);
}

std::string BigFloat::to_sci(int digits, Round rnd) const {
  char* buf = nullptr;
  const std::string fmt = "%." + std::to_string(digits > 0 ? digits - 1 : 0) + "R*e";
  if (mpfr_asprintf(&buf, fmt.c_str(), to_mpfr(rnd), v_) < 0) throw Error("mpfr_asprintf failed");
  std::unique_ptr<char, decltype(&mpfr_free_str)> guard(buf, &mpfr_free_str);
  return std::string(buf);
}

namespace {

long widest(const BigFloat& a, const BigFloat& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

BigFloat add(const BigFloat& a, const BigFloat& b, Round rnd) {
  BigFloat out(widest(a, b));
  mpfr_add(out.raw(), a.raw(), b.raw(), to_mpfr(rnd));
  return out;
}

BigFloat sub(const BigFloat& a, const BigFloat& b, Round rnd) {
  BigFloat out(widest(a, b));
  mpfr_sub(out.raw(), a.raw(), b.raw(), to_mpfr(rnd));
  return out;
}

BigFloat mul(const BigFloat& a, const BigFloat& b, Round rnd) {
  BigFloat out(widest(a, b));
  mpfr_mul(out.raw(), a.raw(), b.raw(), to_mpfr(rnd));
  return out;
}

BigFloat div(const BigFloat& a, const BigFloat& b, Round rnd) {
  if (b.sign() == 0) throw InvalidArgument("float division by zero");
  BigFloat out(widest(a, b));
  mpfr_div(out.raw(), a.raw(), b.raw(), to_mpfr(rnd));
  return out;
}

BigFloat log(const BigFloat& a, Round rnd) {
  if (a.sign() <= 0) throw InvalidArgument("log of non-positive value");
  BigFloat out(a.precision());
  mpfr_log(out.raw(), a.raw(), to_mpfr(rnd));
  return out;
}

BigFloat exp(const BigFloat& a, Round rnd) {
  BigFloat out(a.precision());
  mpfr_exp(out.raw(), a.raw(), to_mpfr(rnd));
  return out;
}

BigFloat pow(const BigFloat& base, const BigFloat& exponent, Round rnd) {
  BigFloat out(widest(base, exponent));
  mpfr_pow(out.raw(), base.raw(), exponent.raw(), to_mpfr(rnd));
  return out;
}

BigFloat sqrt(const BigFloat& a, Round rnd) {
  BigFloat out(a.precision());
  mpfr_sqrt(out.raw(), a.raw(), to_mpfr(rnd));
  return out;
}

BigFloat abs(const BigFloat& a) {
  BigFloat out(a.precision());
  mpfr_abs(out.raw(), a.raw(), MPFR_RNDN);
  return out;
}

BigFloat log_of(const BigInt& v, long precision_bits, Round rnd) {
  if (v <= 0) throw InvalidArgument("log of non-positive integer");
  // Round the argument in the same direction; log is increasing.
  return log(BigFloat::from_int(v, precision_bits + 32, rnd), rnd);
}

BigFloat log_of(const Rational& v, long precision_bits, Round rnd) {
  if (v.sign() <= 0) throw InvalidArgument("log of non-positive rational");
  return log(BigFloat(v, precision_bits + 32, rnd), rnd);
}

long precision_from_env(long fallback) {
  const char* env = std::getenv("ROTKIT_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 64) {
    throw InvalidArgument(std::string("ROTKIT_PRECISION_BITS must be an integer >= 64, got '") + env + "'");
  }
  return v;
}

}  // namespace rotkit
