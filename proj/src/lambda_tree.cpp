#include "rotkit/lambda_tree.hpp"

#include <algorithm>

#include "rotkit/bigfloat.hpp"

namespace rotkit {

namespace {

void require_lambda(const Rational& lambda, bool allow_one) {
  const bool ok = lambda.sign() > 0 && (allow_one ? lambda <= Rational(1) : lambda < Rational(1));
  if (!ok) throw InvalidArgument("lambda must satisfy 0 < lambda < 1, got " + lambda.str());
}

void require_delta(const Rational& delta) {
  if (delta.sign() < 0 || delta >= Rational(1)) {
    throw InvalidArgument("delta must satisfy 0 <= delta < 1, got " + delta.str());
  }
}

bool farey_neighbours(const Fraction& left, const Fraction& right) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(right.p()) * left.q();
  const unsigned __int128 rhs = static_cast<unsigned __int128>(left.p()) * right.q();
  return lhs > rhs && lhs - rhs == 1;
}

// floor(k p / q) without overflow.
std::uint64_t floor_mul_div(std::uint64_t k, std::uint64_t p, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(k) * p / q);
}

}  // namespace

FareyNode make_node(const Rational& lambda, const Fraction& frac) {
  require_lambda(lambda, /*allow_one=*/true);
  const std::uint64_t p = frac.p();
  const std::uint64_t q = frac.q();
  FareyNode node{frac, Rational(0), Rational(0), lambda};
  if (p == 0) {
    node.cval = Rational(0);
    node.qval = Rational(1);
    return node;
  }
  if (p == q) {
    node.cval = Rational(1);
    node.qval = Rational(1);
    return node;
  }
  // c = 1 + sum_{k=1}^{q-2} ([(k+1)p/q] - [kp/q]) lambda^k, Q = sum_{k<q} lambda^k.
  Rational c(1);
  Rational qsum(1);
  Rational power(1);
  for (std::uint64_t k = 1; k < q; ++k) {
    power *= lambda;
    qsum += power;
    if (k <= q - 2 && floor_mul_div(k + 1, p, q) != floor_mul_div(k, p, q)) c += power;
  }
  node.cval = std::move(c);
  node.qval = std::move(qsum);
  return node;
}

FareyNode lambda_mediant(const FareyNode& left, const FareyNode& right) {
  if (left.lambda != right.lambda) throw InvalidArgument("lambda_mediant: nodes built for different lambda");
  if (!farey_neighbours(left.frac, right.frac)) {
    throw InvalidArgument("lambda_mediant: " + left.frac.str() + " and " + right.frac.str() +
                          " are not adjacent on a Stern-Brocot row");
  }
  const Rational scale = left.lambda.pow(right.frac.q());
  return FareyNode{mediant(left.frac, right.frac), right.cval + scale * left.cval,
                   right.qval + scale * left.qval, left.lambda};
}

FareyNode lambda_mediant(const BracketingPair& pair) { return lambda_mediant(pair.left, pair.right); }

Plateau plateau(const FareyNode& node) {
  if (node.frac == Fraction(1, 1)) return Plateau{node, Rational(1), Rational(1), true};
  const std::uint64_t q = node.frac.q();
  const Rational top = node.lambda.pow(q - 1);
  const Rational lo = node.cval / node.qval;
  Rational hi = (node.cval + top - top * node.lambda) / node.qval;
  return Plateau{node, lo, std::move(hi), false};
}

BracketingPair root_pair(const Rational& lambda) {
  return BracketingPair{make_node(lambda, Fraction(0, 1)), make_node(lambda, Fraction(1, 1)), 1};
}

std::uint64_t default_max_depth(const Rational& lambda, const Rational& delta) {
  constexpr std::uint64_t kFloor = 64;
  constexpr std::uint64_t kUncertified = 4096;
  if (delta.sign() <= 0) return kFloor;
  if (golden_hypothesis(lambda.num(), lambda.den()) != GoldenHypothesis::holds) return kUncertified;
  const Theorem2Bound bound = theorem2_bound(lambda.num(), lambda.den(), delta.num(), delta.den());
  return std::max<std::uint64_t>(kFloor, bound.level_k + 2);
}

RhoResult rho_exact(const Rational& lambda, const Rational& delta, std::optional<std::uint64_t> max_depth) {
  require_lambda(lambda, /*allow_one=*/false);
  require_delta(delta);
  const std::uint64_t limit = max_depth.value_or(default_max_depth(lambda, delta));
  if (limit == 0) throw InvalidArgument("max_depth must be positive");

  BracketingPair pair = root_pair(lambda);
  Plateau zero = plateau(pair.left);
  if (zero.contains(delta)) return RhoResult{pair.left.frac, std::move(zero), 1};

  // Invariant: left plateau hi < delta < right node value.
  while (pair.depth < limit) {
    FareyNode mid = lambda_mediant(pair);
    Plateau p = plateau(mid);
    const std::uint64_t depth = pair.depth + 1;
    if (p.contains(delta)) return RhoResult{mid.frac, std::move(p), depth};
    if (delta < p.lo) pair.right = std::move(mid);
    else pair.left = std::move(mid);
    pair.depth = depth;
  }
  throw DepthExceeded("rho_exact: no plateau found by row " + std::to_string(limit) + " (bracket " +
                          pair.left.frac.str() + ", " + pair.right.frac.str() + ")",
                      std::move(pair));
}

namespace {

struct Interval {
  BigFloat lo;
  BigFloat hi;
};

Interval log_interval(const BigInt& v, long prec) {
  return Interval{log_of(v, prec, Round::down), log_of(v, prec, Round::up)};
}

Interval golden_interval(long prec) {
  const BigFloat five = BigFloat::from_int(5, prec);
  const BigFloat one = BigFloat::from_int(1, prec);
  const BigFloat two = BigFloat::from_int(2, prec);
  return Interval{div(add(one, sqrt(five, Round::down), Round::down), two, Round::down),
                  div(add(one, sqrt(five, Round::up), Round::up), two, Round::up)};
}

void check_theorem2_inputs(const BigInt& a, const BigInt& b, const BigInt& r, const BigInt& s) {
  if (a <= 0 || b <= a) throw InvalidArgument("theorem2_bound requires 0 < a < b");
  if (r <= 0 || s <= r) throw InvalidArgument("theorem2_bound requires 0 < r < s");
  if (gcd(a, b) != 1 || gcd(r, s) != 1) throw InvalidArgument("theorem2_bound requires reduced a/b and r/s");
}

}  // namespace

GoldenHypothesis golden_hypothesis(const BigInt& a, const BigInt& b, long precision_bits) {
  if (a <= 0 || b <= a) throw InvalidArgument("golden_hypothesis requires 0 < a < b");
  if (a == 1) return GoldenHypothesis::holds;
  const Interval log_a = log_interval(a, precision_bits);
  const Interval log_b = log_interval(b, precision_bits);
  const Interval gamma = golden_interval(precision_bits);
  const BigFloat two = BigFloat::from_int(2, precision_bits);
  // 2 gamma = 1 + sqrt 5; compare log b against gamma log a.
  const BigFloat rhs_hi = mul(gamma.hi, log_a.hi, Round::up);
  const BigFloat rhs_lo = mul(gamma.lo, log_a.lo, Round::down);
  if (log_b.lo > rhs_hi) return GoldenHypothesis::holds;
  if (log_b.hi <= rhs_lo) return GoldenHypothesis::violated;
  return GoldenHypothesis::indeterminate;
}

Theorem2Bound theorem2_bound(const BigInt& a, const BigInt& b, const BigInt& r, const BigInt& s,
                             long precision_bits) {
  check_theorem2_inputs(a, b, r, s);
  switch (golden_hypothesis(a, b, precision_bits)) {
    case GoldenHypothesis::violated:
      throw HypothesisViolated("b > a^gamma fails for a=" + a.get_str() + ", b=" + b.get_str());
    case GoldenHypothesis::indeterminate:
      throw HypothesisViolated("b > a^gamma could not be certified at " + std::to_string(precision_bits) +
                               " bits for a=" + a.get_str() + ", b=" + b.get_str());
    case GoldenHypothesis::holds:
      break;
  }
  const long prec = precision_bits;
  const Interval gamma = golden_interval(prec);
  const Interval log_sb = log_interval(s * b, prec);
  const Interval log_b = log_interval(b, prec);
  const BigFloat zero(prec);
  const Interval log_a = a == 1 ? Interval{zero, zero} : log_interval(a, prec);

  const BigFloat num_lo = mul(gamma.lo, log_sb.lo, Round::down);
  const BigFloat num_hi = mul(gamma.hi, log_sb.hi, Round::up);
  const BigFloat den_lo = sub(log_b.lo, mul(gamma.hi, log_a.hi, Round::up), Round::down);
  const BigFloat den_hi = sub(log_b.hi, mul(gamma.lo, log_a.lo, Round::down), Round::up);
  if (den_lo.sign() <= 0) {
    throw HypothesisViolated("log b - gamma log a not certified positive at " + std::to_string(prec) + " bits");
  }
  const BigFloat expo_lo = div(num_lo, den_hi, Round::down);
  const BigFloat expo_hi = div(num_hi, den_lo, Round::up);

  Theorem2Bound out;
  const BigInt k_hi = expo_hi.floor();
  const BigInt k_lo = expo_lo.floor();
  out.level_k = to_u64(k_hi);
  out.level_ambiguous = k_hi != k_lo;
  const BigFloat two = BigFloat::from_int(2, prec);
  const BigFloat bound = pow(gamma.hi, add(two, expo_hi, Round::up), Round::up);
  out.max_q = bound.floor();
  out.bound_decimal = bound.to_fixed(6, Round::up);
  out.bound_approx = bound.to_double();
  out.exponent_lo = expo_lo.to_fixed(12, Round::down);
  out.exponent_hi = expo_hi.to_fixed(12, Round::up);
  return out;
}

Lemma8Report lemma8_check(const BracketingPair& pair, const Rational& delta, const BigInt& s) {
  if (!farey_neighbours(pair.left.frac, pair.right.frac)) {
    throw InvalidArgument("lemma8_check: pair is not adjacent on a Stern-Brocot row");
  }
  if (s <= 0 || !(delta * Rational(s)).is_integer()) {
    throw PreconditionViolated("lemma8_check: delta must be r/s with integer r (s=" + s.get_str() + ")");
  }
  const Rational& lambda = pair.left.lambda;
  require_lambda(lambda, /*allow_one=*/false);
  const Rational gap_lo = plateau(pair.left).hi;
  const Rational gap_hi = pair.right.value();
  if (!(gap_lo < delta && delta < gap_hi)) {
    throw PreconditionViolated("lemma8_check: delta=" + delta.str() + " is not in the open gap (" +
                               gap_lo.str() + ", " + gap_hi.str() + ")");
  }
  const std::uint64_t q = pair.left.frac.q();
  const std::uint64_t q2 = pair.right.frac.q();
  const BigInt a = lambda.num();
  const BigInt b = lambda.den();
  Lemma8Report out;
  out.max_q = std::max(q, q2);
  mpz_pow_ui(out.lhs.get_mpz_t(), b.get_mpz_t(), out.max_q);
  BigInt apow;
  mpz_pow_ui(apow.get_mpz_t(), a.get_mpz_t(), q + q2);
  out.rhs = s * b * apow;
  out.holds = out.lhs <= out.rhs;
  return out;
}

std::vector<FareyNode> tree_row(const Rational& lambda, unsigned k, std::size_t cap) {
  require_lambda(lambda, /*allow_one=*/true);
  row_size(k, cap);
  std::vector<FareyNode> row{make_node(lambda, Fraction(0, 1)), make_node(lambda, Fraction(1, 1))};
  for (unsigned level = 1; level < k; ++level) {
    std::vector<FareyNode> next;
    next.reserve(2 * row.size() - 1);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      next.push_back(row[j]);
      next.push_back(lambda_mediant(row[j], row[j + 1]));
    }
    next.push_back(row.back());
    row = std::move(next);
  }
  return row;
}

}  // namespace rotkit
