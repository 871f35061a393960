#include "rotkit/series.hpp"

#include <algorithm>
#include <cctype>

#include "rotkit/dynamics.hpp"
#include "rotkit/errors.hpp"

namespace rotkit {

namespace {

void require_lambda(const Rational& lambda) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) {
    throw InvalidArgument("lambda must satisfy 0 < lambda < 1, got " + lambda.str());
  }
}

void require_eps(const Rational& eps) {
  if (eps.sign() <= 0) throw InvalidArgument("eps must be positive, got " + eps.str());
}

// Smallest N >= 0 with tail(N) <= eps, where tail is non-increasing in N and
// receives lambda^(N+1) together with N.
template <class Tail>
std::uint64_t smallest_n(const Rational& lambda, const Rational& eps, Tail tail) {
  Rational lp = lambda;  // lambda^(N+1)
  for (std::uint64_t n = 0;; ++n) {
    if (tail(n, lp) <= eps) return n;
    if (n > 10'000'000) throw ResourceLimit("series truncation length exceeds 10^7 terms");
    lp *= lambda;
  }
}

Rational u64(std::uint64_t v) { return Rational(to_bigint(v)); }

std::string trim(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

SeriesValue make_value(Rational partial, Rational tail, std::uint64_t terms) {
  SeriesValue v;
  v.value = BigFloat(partial, kSeriesPrecision, Round::nearest);
  v.partial_sum = std::move(partial);
  v.tail_bound = std::move(tail);
  v.terms_used = terms;
  return v;
}

}  // namespace

RhoSpec RhoSpec::rational(const Fraction& f) {
  if (f.p() == 0 || f.p() == f.q()) throw InvalidArgument("rotation number must satisfy 0 < rho < 1, got " + f.str());
  RhoSpec s;
  s.kind_ = Kind::rational;
  s.value_ = f.value();
  return s;
}

RhoSpec RhoSpec::quadratic(const BigInt& P, const BigInt& D, const BigInt& Q) {
  if (Q == 0) throw InvalidArgument("quadratic rho needs a nonzero denominator");
  if (D <= 0 || mpz_perfect_square_p(D.get_mpz_t())) {
    throw InvalidArgument("quadratic rho needs a positive non-square discriminant, got " + D.get_str());
  }
  RhoSpec s;
  s.kind_ = Kind::quadratic;
  s.P_ = P;
  s.D_ = D;
  s.Q_ = Q;
  const Rational inv_q(BigInt(1), Q);
  if (s.sign_quadratic(Rational(P, Q), inv_q) <= 0 || s.sign_quadratic(Rational(BigInt(P - Q), Q), inv_q) >= 0) {
    throw InvalidArgument("rotation number must satisfy 0 < rho < 1, got " + s.str());
  }
  return s;
}

RhoSpec RhoSpec::golden() { return quadratic(-1, 5, 2); }

RhoSpec RhoSpec::cf_prefix(const ContinuedFraction& cf) {
  if (cf.terms.size() < 2 || cf.terms[0] != 0) {
    throw InvalidArgument("cf prefix must look like [0; a1, ..., aL] with L >= 1");
  }
  for (std::size_t i = 1; i < cf.terms.size(); ++i) {
    if (cf.terms[i] < 1) throw InvalidArgument("cf prefix terms must be positive: " + cf.str());
  }
  RhoSpec s;
  s.kind_ = Kind::cf_prefix;
  s.cf_ = cf;
  const auto conv = cf.convergents();
  const Convergent& last = conv.back();
  const Convergent& prev = conv[conv.size() - 2];
  const Rational a(last.p, last.q);
  const Rational b(BigInt(last.p + prev.p), BigInt(last.q + prev.q));
  s.lo_ = min(a, b);
  s.hi_ = max(a, b);
  s.horizon_ = last.q;
  return s;
}

RhoSpec RhoSpec::parse(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "golden") return golden();
  if (text.rfind("sqrt:", 0) == 0) {
    // sqrt:D:p/q+ or sqrt:D:p/q-
    const auto colon = text.find(':', 5);
    if (colon == std::string::npos || text.size() < colon + 3) throw ParseError("bad quadratic spec: '" + raw + "'");
    const char sign = text.back();
    if (sign != '+' && sign != '-') throw ParseError("quadratic spec must end in + or -: '" + raw + "'");
    const Rational D = Rational::parse(text.substr(5, colon - 5));
    const Rational pq = Rational::parse(text.substr(colon + 1, text.size() - colon - 2));
    if (!D.is_integer()) throw ParseError("discriminant must be an integer: '" + raw + "'");
    // (p +- sqrt D)/q
    if (sign == '+') return quadratic(pq.num(), D.num(), pq.den());
    return quadratic(BigInt(-pq.num()), D.num(), BigInt(-pq.den()));
  }
  if (text.rfind("cf:", 0) == 0) {
    std::string body = text.substr(3);
    if (!body.empty() && body.front() == '[') body.erase(0, 1);
    if (!body.empty() && body.back() == ']') body.pop_back();
    // With a ';' the first term is a0; otherwise only a1, a2, ... are given.
    ContinuedFraction cf;
    if (body.find(';') == std::string::npos) cf.terms.push_back(0);
    std::string cur;
    for (char c : body + ",") {
      if (c == ',' || c == ';') {
        if (cur.empty()) throw ParseError("empty term in cf spec: '" + raw + "'");
        const Rational t = Rational::parse(cur);
        if (!t.is_integer()) throw ParseError("cf terms must be integers: '" + raw + "'");
        cf.terms.push_back(t.num());
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return cf_prefix(cf);
  }
  return rational(Fraction::parse(text));
}

std::string RhoSpec::str() const {
  switch (kind_) {
    case Kind::rational:
      return value_.str();
    case Kind::quadratic:
      return "(" + P_.get_str() + "+sqrt(" + D_.get_str() + "))/" + Q_.get_str();
    case Kind::cf_prefix:
      return "cf:" + cf_.str();
  }
  return {};
}

int RhoSpec::sign_quadratic(const Rational& u, const Rational& v) const {
  const int su = u.sign();
  const int sv = v.sign();
  if (sv == 0) return su;
  if (su >= 0 && sv > 0) return 1;
  if (su <= 0 && sv < 0) return -1;
  const Rational lhs = u * u;
  const Rational rhs = v * v * Rational(D_);
  const int c = lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
  return su > 0 ? c : -c;
}

BigInt RhoSpec::floor_affine(const Rational& a, const BigInt& m) const {
  if (m == 0) return a.floor();
  switch (kind_) {
    case Kind::rational:
      return (a + Rational(m) * value_).floor();
    case Kind::quadratic: {
      // a + m (P + sqrt D)/Q = u + v sqrt D
      const Rational u = a + Rational(BigInt(m * P_), Q_);
      const Rational v(m, Q_);
      const long prec = 64 + static_cast<long>(u.bit_size() + v.bit_size() + mpz_sizeinbase(D_.get_mpz_t(), 2));
      BigFloat approx = add(BigFloat(u, prec), mul(BigFloat(v, prec), sqrt(BigFloat::from_int(D_, prec), Round::nearest),
                                                   Round::nearest),
                            Round::nearest);
      BigInt n = approx.floor();
      while (sign_quadratic(u - Rational(n), v) < 0) --n;
      while (sign_quadratic(u - Rational(BigInt(n + 1)), v) >= 0) ++n;
      return n;
    }
    case Kind::cf_prefix: {
      if (abs(m) > horizon_) {
        throw HorizonExceeded("floor of " + m.get_str() + "*rho requested beyond the cf-prefix horizon " +
                              horizon_.get_str() + " of " + str());
      }
      const Rational y1 = a + Rational(m) * lo_;
      const Rational y2 = a + Rational(m) * hi_;
      const Rational ylo = min(y1, y2), yhi = max(y1, y2);
      const BigInt f = ylo.floor();
      if (Rational(BigInt(f + 1)) < yhi) {
        throw HorizonExceeded("floor of " + a.str() + " + " + m.get_str() + "*rho is not decided by " + str());
      }
      return f;
    }
  }
  return {};
}

std::vector<BigInt> RhoSpec::floors_upto(std::uint64_t n) const {
  std::vector<BigInt> out;
  out.reserve(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) out.push_back(floor_mul(to_bigint(k)));
  return out;
}

std::optional<BigInt> RhoSpec::horizon() const {
  if (kind_ == Kind::cf_prefix) return horizon_;
  return std::nullopt;
}

std::optional<Rational> RhoSpec::exact() const {
  if (kind_ == Kind::rational) return value_;
  return std::nullopt;
}

std::pair<BigFloat, BigFloat> RhoSpec::enclosure(long prec) const {
  switch (kind_) {
    case Kind::rational:
      return {BigFloat(value_, prec, Round::down), BigFloat(value_, prec, Round::up)};
    case Kind::quadratic: {
      const BigFloat d = BigFloat::from_int(D_, prec);
      const BigFloat p = BigFloat::from_int(P_, prec);
      const BigFloat q = BigFloat::from_int(Q_, prec);
      const BigFloat num_lo = add(p, sqrt(d, Round::down), Round::down);
      const BigFloat num_hi = add(p, sqrt(d, Round::up), Round::up);
      if (Q_ > 0) return {div(num_lo, q, Round::down), div(num_hi, q, Round::up)};
      return {div(num_hi, q, Round::down), div(num_lo, q, Round::up)};
    }
    case Kind::cf_prefix:
      return {BigFloat(lo_, prec, Round::down), BigFloat(hi_, prec, Round::up)};
  }
  return {BigFloat(prec), BigFloat(prec)};
}

int SturmianWord::term(std::uint64_t k) const {
  const BigInt d = rho_.floor_mul(to_bigint(k + 1)) - rho_.floor_mul(to_bigint(k));
  return static_cast<int>(d.get_si());
}

std::vector<int> SturmianWord::prefix(std::uint64_t n) const {
  const auto fl = rho_.floors_upto(n + 1);
  std::vector<int> out(n);
  for (std::uint64_t k = 1; k <= n; ++k) out[k - 1] = static_cast<int>(BigInt(fl[k + 1] - fl[k]).get_si());
  return out;
}

Rational power_series(const std::vector<BigInt>& coeffs, const Rational& lambda) {
  if (coeffs.empty()) return Rational(0);
  // sum c_k a^k b^(N-k) / b^N, accumulated over the integers.
  const BigInt& a = lambda.num();
  const BigInt& b = lambda.den();
  BigInt acc = coeffs[0];
  BigInt apow = 1;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    apow *= a;
    acc = acc * b + coeffs[k] * apow;
  }
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), b.get_mpz_t(), coeffs.size() - 1);
  return Rational(acc, den);
}

SeriesValue hecke_mahler(const RhoSpec& rho, const Rational& lambda, const Rational& eps) {
  require_lambda(lambda);
  require_eps(eps);
  const Rational one_minus = Rational(1) - lambda;
  // sum_{k>N} k lambda^k = lambda^(N+1) ((N+1) - N lambda) / (1-lambda)^2
  auto tail = [&](std::uint64_t n, const Rational& lp) {
    return lp * (u64(n + 1) - u64(n) * lambda) / (one_minus * one_minus);
  };
  const std::uint64_t n = smallest_n(lambda, eps, tail);
  std::vector<BigInt> fl = rho.floors_upto(n);
  fl[0] = 0;
  return make_value(power_series(fl, lambda), tail(n, lambda.pow(n + 1)), n);
}

DeltaForms delta_forms(const RhoSpec& rho, const Rational& lambda, const Rational& eps) {
  require_lambda(lambda);
  require_eps(eps);
  const Rational one_minus = Rational(1) - lambda;
  DeltaForms out;

  // Sturmian form: coefficients in {0,1}, tail (1-lambda) sum_{k>N} lambda^k = lambda^(N+1).
  {
    const std::uint64_t n = smallest_n(lambda, eps, [](std::uint64_t, const Rational& lp) { return lp; });
    const auto fl = rho.floors_upto(n + 1);
    std::vector<BigInt> c(n + 1);
    c[0] = 1;
    for (std::uint64_t k = 1; k <= n; ++k) c[k] = fl[k + 1] - fl[k];
    out.sturmian = make_value(one_minus * power_series(c, lambda), lambda.pow(n + 1), n);
  }
  // Floor form: 0 < floor(k rho) + 1 <= k, tail ((1-lambda)^2/lambda) sum_{k>N} k lambda^k
  //   = lambda^N ((N+1) - N lambda).
  {
    auto tail = [&](std::uint64_t n, const Rational& lp) { return lp / lambda * (u64(n + 1) - u64(n) * lambda); };
    const std::uint64_t n = smallest_n(lambda, eps, tail);
    auto fl = rho.floors_upto(n);
    fl[0] = -1;
    for (auto& f : fl) f += 1;
    out.floors = make_value(one_minus * one_minus / lambda * power_series(fl, lambda), tail(n, lambda.pow(n + 1)), n);
  }
  out.discrepancy = (out.sturmian.partial_sum - out.floors.partial_sum).abs();
  if (out.discrepancy > out.sturmian.tail_bound + out.floors.tail_bound) {
    throw VerificationFailed("Sturmian and floor forms of delta disagree by " + out.discrepancy.str() +
                             " for rho=" + rho.str() + ", lambda=" + lambda.str());
  }
  return out;
}

SeriesValue delta_of_rho(const RhoSpec& rho, const Rational& lambda, const Rational& eps) {
  return delta_forms(rho, lambda, eps).sturmian;
}

Identity2Report identity2_check(const RhoSpec& rho, const Rational& lambda, std::uint64_t n) {
  require_lambda(lambda);
  Identity2Report rep;
  rep.n = n;
  const auto fl = rho.floors_upto(n + 1);
  std::vector<BigInt> s(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) s[k] = fl[k + 1] - fl[k];
  rep.lhs = power_series(s, lambda);
  std::vector<BigInt> f(fl);
  f[0] = 0;
  rep.rhs = (Rational(1) / lambda - Rational(1)) * power_series(f, lambda);
  rep.residual = (rep.lhs - rep.rhs).abs();
  rep.slack = u64(n + 2) * lambda.pow(n + 1) / (Rational(1) - lambda);
  rep.holds = rep.residual <= rep.slack;
  return rep;
}

SeriesValue conjugacy_phi_with_delta(const RhoSpec& rho, const Rational& lambda, const Rational& delta,
                                     const Rational& delta_err, const Rational& t, const Rational& eps,
                                     const BigInt& shift) {
  require_lambda(lambda);
  require_eps(eps);
  const Rational one_minus = Rational(1) - lambda;
  // |floor(t + (shift-k-1) rho)| <= A + k with A = |t| + |shift| + 2.
  const Rational A = t.abs() + Rational(BigInt(abs(shift))) + Rational(2);
  auto tail = [&](std::uint64_t n, const Rational& lp) {
    return lp * (A + (u64(n + 1) - u64(n) * lambda) / one_minus);
  };
  const std::uint64_t n = smallest_n(lambda, eps, tail);
  std::vector<BigInt> c(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) c[k] = rho.floor_affine(t, BigInt(shift - to_bigint(k + 1)));
  const Rational partial = delta / one_minus + one_minus * power_series(c, lambda);
  return make_value(partial, tail(n, lambda.pow(n + 1)) + delta_err / one_minus, n);
}

SeriesValue conjugacy_phi(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps,
                          const BigInt& shift) {
  require_lambda(lambda);
  require_eps(eps);
  const Rational one_minus = Rational(1) - lambda;
  const SeriesValue d = delta_of_rho(rho, lambda, eps * one_minus / Rational(2));
  return conjugacy_phi_with_delta(rho, lambda, d.partial_sum, d.tail_bound, t, eps / Rational(2), shift);
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return {};
}

PropertyCheck check_c1(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps) {
  require_lambda(lambda);
  PropertyCheck out;
  out.property = "C1";
  const Rational one_minus = Rational(1) - lambda;
  const SeriesValue d = delta_of_rho(rho, lambda, eps * one_minus / Rational(4));
  const SeriesValue x = conjugacy_phi_with_delta(rho, lambda, d.partial_sum, d.tail_bound, t, eps / Rational(4));
  const SeriesValue y =
      conjugacy_phi_with_delta(rho, lambda, d.partial_sum, d.tail_bound, t, eps / Rational(4), BigInt(1));
  // F is affine with slope lambda on each [n, n+1); skip if phi(t)'s
  // enclosure straddles an integer.
  const BigInt fl = x.lower().floor();
  if (x.upper() >= Rational(BigInt(fl + 1))) {
    out.status = CheckStatus::skipped;
    out.note = "phi(t) enclosure [" + x.lower().str() + ", " + x.upper().str() + "] meets an integer";
    return out;
  }
  const Rational fx = lambda * x.partial_sum + d.partial_sum + one_minus * Rational(fl);
  out.residual = (y.partial_sum - fx).abs();
  out.slack = y.tail_bound + lambda * x.tail_bound + d.tail_bound;
  out.status = out.residual <= out.slack ? CheckStatus::pass : CheckStatus::fail;
  return out;
}

PropertyCheck check_c2(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps) {
  PropertyCheck out;
  out.property = "C2";
  const SeriesValue a = conjugacy_phi(rho, lambda, t, eps);
  const SeriesValue b = conjugacy_phi(rho, lambda, t + Rational(1), eps);
  out.residual = (b.partial_sum - a.partial_sum - Rational(1)).abs();
  out.slack = Rational(2) * eps;
  out.status = out.residual <= out.slack ? CheckStatus::pass : CheckStatus::fail;
  return out;
}

PropertyCheck check_c3(const RhoSpec& rho, const Rational& lambda, const Rational& eps) {
  PropertyCheck out;
  out.property = "C3";
  const SeriesValue a = conjugacy_phi(rho, lambda, Rational(0), eps);
  out.residual = a.partial_sum.abs();
  out.slack = eps;
  out.status = out.residual <= out.slack ? CheckStatus::pass : CheckStatus::fail;
  return out;
}

namespace {

// Sign of a + m rho.
int sign_affine(const RhoSpec& rho, const Rational& a, const BigInt& m) {
  if (m == 0) return a.sign();
  if (auto r = rho.exact()) return (a + Rational(m) * *r).sign();
  return rho.floor_affine(a, m) >= 0 ? 1 : -1;  // never zero for irrational rho
}

// Endpoint w - k rho of a wrap constraint.
struct Affine {
  BigInt w;
  BigInt k;
};

// sign((a.w - a.k rho) - (b.w - b.k rho))
int compare_affine(const RhoSpec& rho, const Affine& a, const Affine& b) {
  return sign_affine(rho, Rational(BigInt(a.w - b.w)), BigInt(b.k - a.k));
}

BigFloat affine_value(const RhoSpec& rho, const Affine& e, long prec, Round rnd) {
  const auto [lo, hi] = rho.enclosure(prec);
  const BigFloat k = BigFloat::from_int(e.k, prec);
  // w - k rho: pick the rho end that rounds in the requested direction.
  const BigFloat& r = (rnd == Round::down) == (e.k >= 0) ? hi : lo;
  return sub(BigFloat::from_int(e.w, prec), mul(k, r, rnd == Round::down ? Round::up : Round::down), rnd);
}

}  // namespace

ShadowingReport orbit_shadowing_check(const RhoSpec& rho, const Rational& lambda, const Rational& x0,
                                      std::uint64_t n) {
  require_lambda(lambda);
  if (n == 0) throw InvalidArgument("orbit_shadowing_check needs n >= 1");
  if (x0.sign() < 0 || x0 >= Rational(1)) throw InvalidArgument("x0 must lie in [0,1), got " + x0.str());
  ShadowingReport rep;
  rep.n = n;
  rep.lambda_n = lambda.pow(n);
  const Rational eps_delta = rep.lambda_n * rep.lambda_n * Rational::pow2(-64);
  const SeriesValue d = delta_of_rho(rho, lambda, eps_delta);
  rep.delta = d.partial_sum;
  rep.delta_err = d.tail_bound;
  if (rep.delta >= Rational(1)) throw MatchingFailed("truncated delta is not below 1");

  const ContractedRotation map(lambda, rep.delta);
  const Orbit orb = iterate(map, x0, n, IterateLimits{n, std::size_t{1} << 24});
  rep.x_n = orb.points.back();

  // t0 in [max_k (W_k - k rho), min_k (W_k + 1 - k rho)).
  Affine lower{orb.wraps[0], 0}, upper{BigInt(orb.wraps[0] + 1), 0};
  for (std::uint64_t k = 1; k <= n; ++k) {
    const Affine lo{orb.wraps[k], to_bigint(k)};
    const Affine hi{BigInt(orb.wraps[k] + 1), to_bigint(k)};
    if (compare_affine(rho, lo, lower) > 0) lower = lo;
    if (compare_affine(rho, hi, upper) < 0) upper = hi;
  }
  if (compare_affine(rho, lower, upper) >= 0) {
    throw MatchingFailed("wrap sequence of the orbit is not a rotation sequence for " + rho.str() +
                         "; delta precision too low");
  }
  const long prec = 256;
  rep.t0_lo = affine_value(rho, lower, prec, Round::down).to_double();
  rep.t0_hi = affine_value(rho, upper, prec, Round::up).to_double();
  rep.t0_interval_contains_zero =
      sign_affine(rho, Rational(BigInt(-lower.w)), lower.k) >= 0 && sign_affine(rho, Rational(upper.w), BigInt(-upper.k)) > 0;

  // Rational representative: 0 when admissible, else a midpoint verified exactly.
  auto admissible = [&](const Rational& t) {
    return sign_affine(rho, t - Rational(lower.w), lower.k) >= 0 && sign_affine(rho, Rational(upper.w) - t, BigInt(-upper.k)) > 0;
  };
  if (rep.t0_interval_contains_zero) {
    rep.t0 = Rational(0);
  } else {
    bool found = false;
    for (long p = prec; p <= 1 << 14 && !found; p *= 2) {
      BigFloat mid = add(affine_value(rho, lower, p, Round::up), affine_value(rho, upper, p, Round::down), Round::nearest);
      mpfr_div_2ui(mid.raw(), mid.raw(), 1, MPFR_RNDN);
      const Rational cand = mid.to_rational();
      if (admissible(cand)) {
        rep.t0 = cand;
        found = true;
      }
    }
    if (!found) throw MatchingFailed("could not place a rational t0 inside the matched interval");
  }

  const Rational eps_phi = rep.lambda_n * Rational::pow2(-40);
  const SeriesValue phi = conjugacy_phi_with_delta(rho, lambda, rep.delta, Rational(0), rep.t0, eps_phi, to_bigint(n));
  rep.deviation_upper = (rep.x_n - phi.partial_sum).abs() + phi.tail_bound;
  rep.c_upper = rep.deviation_upper / rep.lambda_n;
  rep.holds = rep.c_upper <= Rational(1) + Rational::pow2(-32);
  return rep;
}

}  // namespace rotkit
