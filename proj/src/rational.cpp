#include "rotkit/rational.hpp"

#include <cctype>
#include <numeric>

#include "rotkit/errors.hpp"

namespace rotkit {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_int(std::string_view s) {
  if (!is_integer_text(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  std::string text(s[0] == '+' ? s.substr(1) : s);
  return BigInt(text, 10);
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt n = parse_int(text.substr(0, slash));
  std::string_view dtext = text.substr(slash + 1);
  if (!dtext.empty() && (dtext[0] == '-' || dtext[0] == '+')) {
    throw ParseError("denominator must be unsigned: '" + std::string(text) + "'");
  }
  BigInt d = parse_int(dtext);
  if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  return Rational(n, d);
}

Rational Rational::parse_decimal(std::string_view text) {
  std::string_view mant = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    const BigInt ev = parse_int(text.substr(e + 1));
    if (!ev.fits_slong_p()) throw ParseError("exponent out of range: '" + std::string(text) + "'");
    exponent = ev.get_si();
  }
  const Rational ten(10);
  if (mant.find('/') != std::string_view::npos) {
    const Rational base = parse(mant);
    if (exponent >= 0) return base * ten.pow(static_cast<unsigned long>(exponent));
    return base / ten.pow(static_cast<unsigned long>(-exponent));
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    const char c = mant[i];
    if (c == '.') {
      if (seen_point) throw ParseError("bad decimal: '" + std::string(text) + "'");
      seen_point = true;
    } else {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    }
  }
  Rational value(parse_int(digits));
  exponent -= frac_digits;
  if (exponent >= 0) return value * ten.pow(static_cast<unsigned long>(exponent));
  return value / ten.pow(static_cast<unsigned long>(-exponent));
}

Rational Rational::pow2(long e) {
  BigInt p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e >= 0 ? e : -e));
  return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

BigInt Rational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

BigInt Rational::ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

Rational Rational::pow(unsigned long e) const {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), e);
  // Powers of coprime integers stay coprime.
  mpq_class r;
  mpz_swap(r.get_num_mpz_t(), n.get_mpz_t());
  mpz_swap(r.get_den_mpz_t(), d.get_mpz_t());
  Rational out;
  out.v_ = std::move(r);
  return out;
}

std::size_t Rational::bit_size() const {
  return mpz_sizeinbase(v_.get_num_mpz_t(), 2) + mpz_sizeinbase(v_.get_den_mpz_t(), 2);
}

std::string Rational::str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_ == 0) throw InvalidArgument("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

BigInt to_bigint(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    throw InvalidArgument("integer does not fit in 64 bits: " + v.get_str());
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

BigInt Fraction::to_mpz(std::uint64_t v) { return to_bigint(v); }

Fraction::Fraction(std::uint64_t p, std::uint64_t q) : p_(p), q_(q) {
  if (q == 0) throw InvalidArgument("fraction with zero denominator");
  if (p > q) throw InvalidArgument("fraction outside [0,1]: " + str());
  if (std::gcd(p, q) != 1) throw InvalidArgument("fraction not reduced: " + str());
}

Fraction Fraction::parse(std::string_view text) { return from_rational(Rational::parse(text)); }

Fraction Fraction::from_rational(const Rational& r) {
  if (r.sign() < 0 || r > Rational(1)) throw InvalidArgument("fraction outside [0,1]: " + r.str());
  return Fraction(to_u64(r.num()), to_u64(r.den()));
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a.p_) * b.q_;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(b.p_) * a.q_;
  return lhs <=> rhs;
}

}  // namespace rotkit
