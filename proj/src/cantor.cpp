#include "rotkit/cantor.hpp"

#include <algorithm>
#include <map>

#include "rotkit/bigfloat.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/lambda_tree.hpp"

namespace rotkit {

namespace {

// x^sigma rounded up for 0 < x < 1; repeated square roots when sigma = 1/2^m.
BigFloat pow_up(const Rational& x, const Rational& sigma, long prec) {
  BigFloat b(x, prec, Round::up);
  if (sigma == Rational(1)) return b;
  BigInt d = sigma.den();
  if (sigma.num() == 1 && mpz_popcount(d.get_mpz_t()) == 1) {
    while (d > 1) {
      b = sqrt(b, Round::up);
      d /= 2;
    }
    return b;
  }
  // x < 1 and sigma > 0: a smaller exponent gives a larger power.
  return pow(b, BigFloat(sigma, prec, Round::down), Round::up);
}

}  // namespace

// Plateaus and gaps of a row tile [0,1], so |E_k| = 1 - sum of plateau
// lengths lambda^(q-1) (1-lambda)^2 / (1-lambda^q), grouped by q.
Rational CoverRow::total_length() const {
  std::map<std::uint64_t, std::uint64_t> count;
  for (const auto& g : gaps) ++count[g.left.q()];
  const Rational one(1);
  const Rational u = (one - lambda) * (one - lambda);
  Rational plateaus(0);
  for (const auto& [q, c] : count) {
    plateaus += Rational(to_bigint(c)) * lambda.pow(q - 1) / (one - lambda.pow(q));
  }
  return one - u * plateaus;
}

namespace {

CoverRow build_row(const Rational& lambda, unsigned k, std::size_t cap) {
  const auto nodes = tree_row(lambda, k, cap);
  CoverRow row;
  row.k = k;
  row.lambda = lambda;
  row.gaps.reserve(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const FareyNode& a = nodes[j];
    const FareyNode& b = nodes[j + 1];
    GapInterval g;
    g.j = j;
    g.k = k;
    g.left = a.frac;
    g.right = b.frac;
    g.lo = plateau(a).hi;
    g.hi = b.value();
    g.length = g.hi - g.lo;
    const Rational expected = lambda.pow(a.frac.q() + b.frac.q() - 1) / (a.qval * b.qval);
    if (!(g.lo < g.hi) || g.length != expected) {
      throw VerificationFailed("gap " + std::to_string(j) + " on row " + std::to_string(k) + " has length " +
                               g.length.str() + ", closed form gives " + expected.str());
    }
    row.gaps.push_back(std::move(g));
  }
  return row;
}

}  // namespace

std::string nesting_violation(const CoverRow& coarse, const CoverRow& fine) {
  std::vector<int> children(coarse.gaps.size(), 0);
  std::size_t p = 0;
  for (const auto& g : fine.gaps) {
    while (p < coarse.gaps.size() && coarse.gaps[p].hi < g.hi) ++p;
    if (p == coarse.gaps.size() || !(coarse.gaps[p].lo <= g.lo && g.hi <= coarse.gaps[p].hi)) {
      return "gap " + std::to_string(g.j) + " of row " + std::to_string(fine.k) + " lies in no gap of row " +
             std::to_string(coarse.k);
    }
    ++children[p];
  }
  for (std::size_t j = 0; j < children.size(); ++j) {
    if (children[j] != 2) {
      return "gap " + std::to_string(j) + " of row " + std::to_string(coarse.k) + " holds " +
             std::to_string(children[j]) + " gaps of row " + std::to_string(fine.k);
    }
  }
  return {};
}

CoverRow cover_row(const Rational& lambda, unsigned k, bool verify_nesting, std::size_t cap) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) {
    throw InvalidArgument("lambda must satisfy 0 < lambda < 1, got " + lambda.str());
  }
  CoverRow row = build_row(lambda, k, cap);
  if (verify_nesting && k > 1) {
    const std::string v = nesting_violation(build_row(lambda, k - 1, cap), row);
    if (!v.empty()) throw VerificationFailed(v);
  }
  return row;
}

std::vector<CoverRow> cover_rows(const Rational& lambda, unsigned kmax, std::size_t cap) {
  std::vector<CoverRow> rows;
  for (unsigned k = 1; k <= kmax; ++k) {
    rows.push_back(cover_row(lambda, k, false, cap));
    if (k > 1) {
      const std::string v = nesting_violation(rows[k - 2], rows[k - 1]);
      if (!v.empty()) throw VerificationFailed(v);
    }
  }
  return rows;
}

Lemma9Report lemma9_certificate(const CoverRow& row, const Rational& sigma, long prec) {
  if (sigma.sign() <= 0 || sigma > Rational(1)) throw InvalidArgument("sigma must lie in (0,1], got " + sigma.str());
  const Rational& lambda = row.lambda;
  Lemma9Report rep;
  rep.k = row.k;
  rep.sigma = sigma;
  rep.lambda_k = lambda.pow(row.k);
  rep.total_length = row.total_length();
  rep.min_q_sum = UINT64_MAX;
  BigFloat sum = BigFloat::from_int(0, prec);
  for (const auto& g : row.gaps) {
    if (g.length > rep.max_length) rep.max_length = g.length;
    rep.min_q_sum = std::min(rep.min_q_sum, g.left.q() + g.right.q());
    sum = add(sum, pow_up(g.length, sigma, prec), Round::up);
  }
  rep.max_ok = rep.max_length <= rep.lambda_k;
  rep.q_ok = rep.min_q_sum >= static_cast<std::uint64_t>(row.k) + 1;

  // sum_{n>=k} n x^n = x^k (k - (k-1) x) / (1-x)^2 with x = lambda^sigma, a
  // non-decreasing function of x, evaluated at a lower bound of x.
  const long k = row.k;
  BigFloat x(lambda, prec, Round::down);
  if (sigma != Rational(1)) x = pow(x, BigFloat(sigma, prec, Round::up), Round::down);
  const BigFloat one = BigFloat::from_int(1, prec);
  BigFloat xk(prec);
  mpfr_pow_ui(xk.raw(), x.raw(), static_cast<unsigned long>(k), MPFR_RNDD);
  const BigFloat factor = sub(BigFloat::from_int(k, prec), mul(BigFloat::from_int(k - 1, prec), x, Round::up), Round::down);
  const BigFloat gap = sub(one, x, Round::up);
  const BigFloat bound = div(mul(xk, factor, Round::down), mul(gap, gap, Round::up), Round::down);

  rep.sum_upper = sum.to_sci(20, Round::up);
  rep.bound_lower = bound.to_sci(20, Round::down);
  rep.sum_ok = sum <= bound;
  rep.margin = sub(bound, sum, Round::down).to_double();
  return rep;
}

Lemma9Report lemma9_certificate(const Rational& lambda, unsigned k, const Rational& sigma, long prec) {
  return lemma9_certificate(cover_row(lambda, k, false), sigma, prec);
}

GoldenNest golden_nest(const Rational& lambda, unsigned L, std::uint64_t max_q) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) {
    throw InvalidArgument("lambda must satisfy 0 < lambda < 1, got " + lambda.str());
  }
  const BigInt fmax = fibonacci(L + 2);
  if (fmax > to_bigint(max_q)) {
    throw ResourceLimit("golden nest with L=" + std::to_string(L) + " needs denominators up to " + fmax.get_str() +
                        ", cap " + std::to_string(max_q));
  }
  GoldenNest out;
  out.lambda = lambda;

  // node_l carries F_l/F_{l+1}; node_{l+2} is the lambda-mediant of the two
  // previous ones, taken in increasing order.
  std::vector<FareyNode> nodes;
  nodes.push_back(make_node(lambda, Fraction(0, 1)));
  nodes.push_back(make_node(lambda, Fraction(1, 1)));
  for (unsigned l = 2; l <= L + 1; ++l) {
    const FareyNode& a = nodes[l - 2];
    const FareyNode& b = nodes[l - 1];
    nodes.push_back(a.frac < b.frac ? lambda_mediant(a, b) : lambda_mediant(b, a));
  }

  const RhoSpec golden = RhoSpec::golden();
  out.nested = true;
  for (unsigned l = 0; l <= L; ++l) {
    const FareyNode& lower = l % 2 == 0 ? nodes[l] : nodes[l + 1];
    const FareyNode& upper = l % 2 == 0 ? nodes[l + 1] : nodes[l];
    NestInterval iv;
    iv.l = l;
    iv.left = lower.frac;
    iv.right = upper.frac;
    iv.lo = plateau(lower).hi;
    iv.hi = upper.value();
    iv.length = iv.hi - iv.lo;
    const std::uint64_t f1 = nodes[l].frac.q();      // F_{l+1}
    const std::uint64_t f2 = nodes[l + 1].frac.q();  // F_{l+2}
    iv.exponent = f1 + f2 - 1;
    iv.exponent_ratio = Rational(to_bigint(f1 + f2), to_bigint(f2));
    // |ratio - gamma| <= 1/F^2 with gamma = 1 + rho_golden, decided by exact sign tests.
    const Rational r = iv.exponent_ratio - Rational(1);
    const Rational tol = Rational(BigInt(1), BigInt(to_bigint(f2) * to_bigint(f2)));
    iv.exponent_ok = golden.floor_affine(r + tol, -1) >= 0 && golden.floor_affine(tol - r, 1) >= 0;
    if (!(iv.lo < iv.hi)) {
      out.nested = false;
      out.failure = "I_" + std::to_string(l) + " is empty";
    }
    if (l > 0) {
      const NestInterval& prev = out.intervals.back();
      const bool inside = prev.lo <= iv.lo && iv.hi <= prev.hi && (prev.lo < iv.lo || iv.hi < prev.hi);
      if (!inside && out.nested) {
        out.nested = false;
        out.failure = "I_" + std::to_string(l) + " is not a proper subinterval of I_" + std::to_string(l - 1);
      }
    }
    out.intervals.push_back(std::move(iv));
  }

  // delta(lambda, gamma - 1) is irrational, so a fine enough enclosure sits
  // strictly inside every open interval. Its distance to the endpoints of
  // I_L is of order |I_L|^gamma, hence the refinement by |I_L| per attempt.
  const Rational shrink = out.intervals.back().length;
  Rational eps = shrink * Rational::pow2(-8);
  for (int attempt = 0; attempt < 4; ++attempt) {
    out.delta = delta_of_rho(golden, lambda, eps);
    out.delta_eps = eps;
    out.delta_inside = std::all_of(out.intervals.begin(), out.intervals.end(), [&](const NestInterval& iv) {
      return iv.lo < out.delta.lower() && out.delta.upper() < iv.hi;
    });
    if (out.delta_inside) break;
    eps *= shrink;
  }
  if (!out.delta_inside && out.failure.empty()) out.failure = "delta(lambda, gamma-1) not separated from the nest";
  return out;
}

}  // namespace rotkit
