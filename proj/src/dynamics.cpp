#include "rotkit/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rotkit/errors.hpp"
#include "rotkit/lambda_tree.hpp"

namespace rotkit {

namespace {

constexpr std::size_t kExactPhaseBits = 512;
constexpr long kMaxEstimatePrecision = 1L << 17;

struct FloatState {
  BigFloat y;  // fractional part
  BigInt wraps;
};

// n steps of f in floating point with every operation rounded in `rnd`.
// Since F is non-decreasing, Round::down (up) yields a lower (upper) bound of
// the true lift.
void float_run(FloatState& s, const BigFloat& lam, const BigFloat& del, std::uint64_t n, Round rnd) {
  const mpfr_rnd_t r = to_mpfr(rnd);
  BigFloat t(s.y.precision());
  for (std::uint64_t k = 0; k < n; ++k) {
    mpfr_mul(t.raw(), lam.raw(), s.y.raw(), r);
    mpfr_add(t.raw(), t.raw(), del.raw(), r);
    if (mpfr_cmp_ui(t.raw(), 1) >= 0) {
      mpfr_sub_ui(t.raw(), t.raw(), 1, r);
      ++s.wraps;
    }
    mpfr_swap(t.raw(), s.y.raw());
  }
}

std::vector<int> rotate(const std::vector<int>& w, std::size_t s) {
  std::vector<int> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[(j + s) % w.size()];
  return out;
}

long bits_for_tol(const Rational& tol) {
  const long b = static_cast<long>(mpz_sizeinbase(tol.den().get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(tol.num().get_mpz_t(), 2)) + 1;
  return std::max(b, 1L);
}

}  // namespace

ContractedRotation::ContractedRotation(Rational lambda, Rational delta)
    : lambda_(std::move(lambda)), delta_(std::move(delta)) {
  if (lambda_.sign() <= 0 || lambda_ >= Rational(1)) {
    throw InvalidArgument("lambda must satisfy 0 < lambda < 1, got " + lambda_.str());
  }
  if (delta_.sign() < 0 || delta_ >= Rational(1)) {
    throw InvalidArgument("delta must satisfy 0 <= delta < 1, got " + delta_.str());
  }
}

Rational ContractedRotation::apply(const Rational& x) const { return (lambda_ * x + delta_).frac(); }

Rational lift_apply(const ContractedRotation& map, const Rational& x) {
  const BigInt fl = x.floor();
  return map.lambda() * (x - Rational(fl)) + map.delta() + Rational(fl);
}

Orbit iterate(const ContractedRotation& map, const Rational& x0, std::uint64_t n, const IterateLimits& limits) {
  if (n > limits.max_steps) {
    throw ResourceLimit("orbit length " + std::to_string(n) + " exceeds step cap " +
                        std::to_string(limits.max_steps));
  }
  Orbit orb;
  orb.x0 = x0;
  orb.points.reserve(n + 1);
  orb.wraps.reserve(n + 1);
  Rational x = x0;
  for (std::uint64_t k = 0;; ++k) {
    if (x.bit_size() > limits.bit_budget) {
      throw ResourceLimit("orbit point at step " + std::to_string(k) + " needs " + std::to_string(x.bit_size()) +
                          " bits, budget " + std::to_string(limits.bit_budget));
    }
    orb.points.push_back(x);
    orb.wraps.push_back(x.floor());
    if (k == n) break;
    x = lift_apply(map, x);
  }
  return orb;
}

std::optional<std::size_t> orbit_identity_failure(const ContractedRotation& map, const Orbit& orbit) {
  const Rational& l = map.lambda();
  const Rational one_minus = Rational(1) - l;
  std::vector<Rational> lpow{Rational(1)};
  for (std::size_t n = 0; n < orbit.points.size(); ++n) {
    while (lpow.size() <= n) lpow.push_back(lpow.back() * l);
    Rational rhs = lpow[n] * orbit.x0;
    for (std::size_t k = 0; k < n; ++k) {
      rhs += lpow[k] * (map.delta() + one_minus * Rational(orbit.points[n - k - 1].floor()));
    }
    if (rhs != orbit.points[n]) return n;
  }
  return std::nullopt;
}

bool RhoEstimate::consistent_with(const Rational& r) const {
  return lower.to_rational() - error_bar <= r && r <= upper.to_rational() + error_bar;
}

RhoEstimate rho_estimate(const ContractedRotation& map, const Rational& x0, std::uint64_t n, long precision_bits) {
  if (n == 0) throw InvalidArgument("rho_estimate needs n >= 1");
  RhoEstimate out;
  out.n = n;
  out.error_bar = Rational(BigInt(1), to_bigint(n));
  out.working_precision = precision_bits;

  // Exact phase with Brent cycle detection on the fractional part. Orbits
  // that land exactly on a cycle through 0 are resolved here; float runs
  // would lose or gain wraps at the discontinuity.
  BigInt wraps = x0.floor();
  Rational y = x0.frac();
  std::uint64_t k = 0;
  Rational saved = y;
  BigInt saved_wraps = wraps;
  std::uint64_t power = 1, lam = 0;
  while (k < n && y.bit_size() <= kExactPhaseBits) {
    Rational t = map.lambda() * y + map.delta();
    if (t >= Rational(1)) {
      t -= Rational(1);
      ++wraps;
    }
    y = std::move(t);
    ++k;
    ++lam;
    if (y == saved) {
      const std::uint64_t full = (n - k) / lam;
      wraps += BigInt(wraps - saved_wraps) * to_bigint(full);
      k += full * lam;
      out.periodic_shortcut = true;
      while (k < n) {
        Rational s = map.lambda() * y + map.delta();
        if (s >= Rational(1)) {
          s -= Rational(1);
          ++wraps;
        }
        y = std::move(s);
        ++k;
      }
      break;
    }
    if (lam == power) {
      saved = y;
      saved_wraps = wraps;
      power *= 2;
      lam = 0;
    }
  }
  out.exact_steps = out.periodic_shortcut ? 0 : k;

  long prec = precision_bits;
  const BigFloat nn = BigFloat::from_int(to_bigint(n), prec);
  auto finish = [&](const FloatState& s, Round rnd) {
    BigFloat lift = add(BigFloat::from_int(s.wraps, prec, rnd), s.y, rnd);
    const Round opp = rnd == Round::down ? Round::up : Round::down;
    return div(sub(lift, BigFloat(x0, prec, opp), rnd), nn, rnd);
  };

  if (k == n) {
    const Rational exact = (Rational(wraps) + y - x0) / Rational(to_bigint(n));
    out.lower = BigFloat(exact, prec, Round::down);
    out.upper = BigFloat(exact, prec, Round::up);
    out.estimate = BigFloat(exact, prec, Round::nearest);
    if (!out.periodic_shortcut) out.exact_steps = n;
    return out;
  }

  // Runs whose wrap counts disagree straddle an integer; redo them at doubled
  // precision until they agree or the budget is spent.
  const std::uint64_t rest = n - k;
  FloatState lo{BigFloat(precision_bits), wraps};
  FloatState hi{BigFloat(precision_bits), wraps};
  for (long p = precision_bits;; p *= 2) {
    lo = FloatState{BigFloat(y, p, Round::down), wraps};
    hi = FloatState{BigFloat(y, p, Round::up), wraps};
    float_run(lo, BigFloat(map.lambda(), p, Round::down), BigFloat(map.delta(), p, Round::down), rest, Round::down);
    float_run(hi, BigFloat(map.lambda(), p, Round::up), BigFloat(map.delta(), p, Round::up), rest, Round::up);
    out.working_precision = p;
    if (lo.wraps == hi.wraps || p * 2 > kMaxEstimatePrecision) break;
  }
  prec = out.working_precision;
  out.lower = finish(lo, Round::down);
  out.upper = finish(hi, Round::up);
  BigFloat mid = add(out.lower, out.upper, Round::nearest);
  mpfr_div_2ui(mid.raw(), mid.raw(), 1, MPFR_RNDN);
  out.estimate = std::move(mid);
  return out;
}

std::uint64_t burn_in_steps(const Rational& lambda, std::uint64_t q, const Rational& tol) {
  if (tol.sign() <= 0 || tol >= Rational(1)) throw InvalidArgument("tol must lie in (0,1), got " + tol.str());
  const double num = -log_of(tol, 64, Round::nearest).to_double();
  const double den = -log_of(lambda, 64, Round::nearest).to_double();
  const double steps = std::ceil(4.0 * static_cast<double>(q) * num / den);
  if (!(steps < 1e15)) throw ResourceLimit("burn-in length is out of range");
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(steps), q);
}

std::optional<PeriodicOrbit> solve_wrap_word(const ContractedRotation& map, const std::vector<int>& word) {
  const std::size_t q = word.size();
  if (q == 0) throw InvalidArgument("empty wrap word");
  const Rational& l = map.lambda();
  const Rational& d = map.delta();
  Rational acc(0);
  for (std::size_t j = 0; j < q; ++j) acc = acc * l + (d - Rational(word[j]));
  const Rational xstar = acc / (Rational(1) - l.pow(q));

  // right_continuous: points in [0,1), wrap when lambda x + delta >= 1.
  // Otherwise points in (0,1], wrap when lambda x + delta > 1.
  auto trace = [&](bool right_continuous) -> std::optional<std::vector<Rational>> {
    const Rational one(1);
    auto inside = [&](const Rational& x) {
      return right_continuous ? (x.sign() >= 0 && x < one) : (x.sign() > 0 && x <= one);
    };
    if (!inside(xstar)) return std::nullopt;
    std::vector<Rational> pts;
    Rational x = xstar;
    for (std::size_t j = 0; j < q; ++j) {
      pts.push_back(x);
      Rational y = l * x + d;
      const int w = right_continuous ? (y >= one) : (y > one);
      if (w != word[j]) return std::nullopt;
      x = y - Rational(w);
      if (!inside(x)) return std::nullopt;
    }
    if (x != xstar) return std::nullopt;
    return pts;
  };

  PeriodicOrbit orb;
  orb.period = q;
  if (auto pts = trace(true)) {
    orb.points = std::move(*pts);
    orb.touches_discontinuity = std::any_of(orb.points.begin(), orb.points.end(),
                                            [](const Rational& x) { return x.sign() == 0; });
  } else if (auto lpts = trace(false)) {
    const bool at_one = std::any_of(lpts->begin(), lpts->end(), [](const Rational& x) { return x == Rational(1); });
    if (!at_one) return std::nullopt;  // would have passed the ordinary trace
    orb.points = std::move(*lpts);
    orb.left_limit = true;
  } else {
    return std::nullopt;
  }
  const auto it = std::min_element(orb.points.begin(), orb.points.end());
  const auto s = static_cast<std::size_t>(it - orb.points.begin());
  std::rotate(orb.points.begin(), orb.points.begin() + static_cast<std::ptrdiff_t>(s), orb.points.end());
  orb.wrap_word = rotate(word, s);
  return orb;
}

PeriodicOrbit find_periodic_orbit(const ContractedRotation& map, const Fraction& rho,
                                  const PeriodicOrbitOptions& opts) {
  const std::uint64_t q = rho.q();
  const std::uint64_t p = rho.p();
  if (p == q) throw InvalidArgument("rotation number 1/1 is a bracket sentinel, not a cycle");

  auto accept = [&](const std::vector<int>& word) -> std::optional<PeriodicOrbit> {
    std::uint64_t sum = 0;
    for (int w : word) sum += static_cast<std::uint64_t>(w);
    if (sum != p) return std::nullopt;
    return solve_wrap_word(map, word);
  };

  const long prec = opts.precision_bits;
  const BigFloat lam(map.lambda(), prec);
  const BigFloat del(map.delta(), prec);
  std::uint64_t burn = burn_in_steps(map.lambda(), q, opts.tol);
  FloatState s{BigFloat(Rational(0), prec), BigInt(0)};
  std::uint64_t done = 0;
  for (unsigned attempt = 1; attempt <= opts.retries + 1; ++attempt) {
    float_run(s, lam, del, burn - done, Round::nearest);
    done = burn;
    std::vector<int> word(q);
    FloatState r = s;
    for (std::uint64_t j = 0; j < q; ++j) {
      const BigInt before = r.wraps;
      float_run(r, lam, del, 1, Round::nearest);
      word[j] = r.wraps != before;
    }
    if (auto orb = accept(word)) {
      orb->float_attempts = attempt;
      return *orb;
    }
    burn *= 2;
  }

  // Mechanical words of slope p/q: the only candidates with sum p that can
  // be realised by a rotation-ordered cycle.
  std::vector<int> mech(q);
  for (std::uint64_t j = 0; j < q; ++j) {
    const unsigned __int128 a = static_cast<unsigned __int128>(j + 1) * p / q;
    const unsigned __int128 b = static_cast<unsigned __int128>(j) * p / q;
    mech[j] = static_cast<int>(a - b);
  }
  for (std::uint64_t shift = 0; shift < q; ++shift) {
    if (auto orb = accept(rotate(mech, shift))) {
      orb->used_fallback = true;
      orb->float_attempts = opts.retries + 1;
      return *orb;
    }
  }
  throw VerificationFailed("no wrap word of slope " + rho.str() + " closes into an exact cycle for lambda=" +
                           map.lambda().str() + ", delta=" + map.delta().str());
}

UniquenessReport uniqueness_probe(const ContractedRotation& map, const std::vector<Rational>& seeds,
                                  std::uint64_t n, const Rational& tol, long precision_bits) {
  UniquenessReport rep;
  rep.seeds = seeds.size();
  rep.steps = n;
  rep.tol = tol;
  if (tol.sign() <= 0) throw InvalidArgument("tol must be positive");
  const RhoResult rho = rho_exact(map.lambda(), map.delta());
  rep.cycle = find_periodic_orbit(map, rho.rho);
  rep.lambda_pow_n = std::pow(map.lambda().to_double(), static_cast<double>(n));

  const long prec = std::max(precision_bits, bits_for_tol(tol) + 64);
  // Round toward the plateau interior so no rounding error crosses the
  // discontinuity the wrong way.
  const Round rnd = rep.cycle.left_limit ? Round::down : Round::up;
  const BigFloat lam(map.lambda(), prec, rnd);
  const BigFloat del(map.delta(), prec, rnd);
  const BigFloat one = BigFloat::from_int(1, prec);
  std::vector<BigFloat> cyc;
  for (const auto& c : rep.cycle.points) cyc.emplace_back(c, prec, Round::nearest);

  Rational worst(0);
  for (const auto& seed : seeds) {
    FloatState s{BigFloat(seed.frac(), prec, rnd), BigInt(0)};
    float_run(s, lam, del, n, rnd);
    std::optional<BigFloat> best;
    for (const auto& c : cyc) {
      BigFloat d = abs(sub(s.y, c, Round::up));
      BigFloat wrap = sub(one, d, Round::up);
      if (wrap < d) d = std::move(wrap);
      if (!best || d < *best) best = std::move(d);
    }
    const Rational dev = best->to_rational();
    if (dev > worst) worst = dev;
    if (dev > tol) rep.failures.push_back("seed " + seed.str() + " ends " + best->to_sci(6) + " from the cycle");
  }
  rep.max_deviation_upper = worst;
  rep.max_deviation = worst.to_double();
  rep.converged = seeds.size() <= 1 || rep.failures.empty();
  return rep;
}

ContractionReport contraction_check(const ContractedRotation& map, const Rational& x, const Rational& y,
                                    std::uint64_t steps) {
  if (!(x <= y) || !(y < Rational(x.floor()) + Rational(1))) {
    throw InvalidArgument("contraction_check needs x <= y < [x] + 1");
  }
  ContractionReport rep;
  Rational fx = x, fy = y, bound = y - x;
  for (std::uint64_t k = 0;; ++k) {
    const Rational diff = fy - fx;
    if (diff.sign() < 0 || diff > bound) {
      rep.holds = false;
      rep.failure = "k=" + std::to_string(k) + ": F^k(y)-F^k(x)=" + diff.str() + " outside [0, " + bound.str() + "]";
      return rep;
    }
    rep.steps_checked = k;
    if (k == steps) break;
    if (fx.floor() != fy.floor()) {
      rep.branch_split = k;
      break;
    }
    fx = lift_apply(map, fx);
    fy = lift_apply(map, fy);
    bound *= map.lambda();
  }
  return rep;
}

}  // namespace rotkit
