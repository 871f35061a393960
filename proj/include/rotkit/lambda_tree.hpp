#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotkit/errors.hpp"
#include "rotkit/exact_core.hpp"
#include "rotkit/rational.hpp"

namespace rotkit {

// Element P/Q of the lambda-deformed Stern-Brocot tree. `cval` is
// c(lambda, p/q) and `qval` is 1 + lambda + ... + lambda^(q-1); the node value
// cval/qval is the left endpoint of the plateau on which the rotation number
// equals p/q.
struct FareyNode {
  Fraction frac;
  Rational cval;
  Rational qval;
  Rational lambda;

  Rational value() const { return cval / qval; }
};

// Closed delta-interval [lo, hi] on which rho(lambda, delta) = node.frac.
// The 1/1 node is a bracket sentinel whose plateau is the single point 1.
struct Plateau {
  FareyNode node;
  Rational lo;
  Rational hi;
  bool sentinel = false;

  bool contains(const Rational& delta) const { return lo <= delta && delta <= hi; }
};

// Two nodes whose fractions are adjacent on some Stern-Brocot row.
struct BracketingPair {
  FareyNode left;
  FareyNode right;
  // Row on which the pair is adjacent.
  std::uint64_t depth = 1;
};

// Builds the node by evaluating the 0/1-coefficient sum of c(lambda, p/q)
// directly (O(q)). Requires 0 < lambda < 1 (lambda = 1 is accepted so that
// tree_row can reproduce the classical tree).
FareyNode make_node(const Rational& lambda, const Fraction& frac);

// Node for the mediant fraction via (P' + lambda^q' P) / (Q' + lambda^q' Q).
FareyNode lambda_mediant(const FareyNode& left, const FareyNode& right);
FareyNode lambda_mediant(const BracketingPair& pair);

Plateau plateau(const FareyNode& node);

// The row-1 pair (0/1, 1/1) for this lambda.
BracketingPair root_pair(const Rational& lambda);

struct RhoResult {
  Fraction rho;
  Plateau plateau;
  std::uint64_t depth = 1;
};

class DepthExceeded : public Error {
 public:
  DepthExceeded(const std::string& what, BracketingPair final_pair)
      : Error(what), pair_(std::move(final_pair)) {}
  const BracketingPair& pair() const { return pair_; }

 private:
  BracketingPair pair_;
};

// max(64, k+2) when b > a^gamma is certified (k from theorem2_bound), 4096
// otherwise.
std::uint64_t default_max_depth(const Rational& lambda, const Rational& delta);

// Exact rotation number of f(x) = {lambda x + delta} by descent through the
// lambda-tree. Throws DepthExceeded carrying the last bracket when the
// plateau is not found by row max_depth.
RhoResult rho_exact(const Rational& lambda, const Rational& delta,
                    std::optional<std::uint64_t> max_depth = std::nullopt);

enum class GoldenHypothesis { holds, violated, indeterminate };

// Decides b > a^gamma by comparing 2 log b with (1 + sqrt 5) log a under
// outward rounding at `precision_bits`.
GoldenHypothesis golden_hypothesis(const BigInt& a, const BigInt& b, long precision_bits = 128);

struct Theorem2Bound {
  // Outward-rounded upper end of gamma^(2 + gamma log(sb) / (log b - gamma log a)).
  std::string bound_decimal;
  double bound_approx = 0.0;
  // Largest integer q allowed by the bound (floor of the upper end).
  BigInt max_q;
  // Level k = floor(gamma log(sb) / (log b - gamma log a)).
  std::uint64_t level_k = 0;
  bool level_ambiguous = false;
  std::string exponent_lo;
  std::string exponent_hi;
};

// Requires gcd(a,b) = gcd(r,s) = 1, 0 < a/b < 1, 0 < r/s < 1. Throws
// HypothesisViolated when b > a^gamma fails or cannot be certified.
Theorem2Bound theorem2_bound(const BigInt& a, const BigInt& b, const BigInt& r, const BigInt& s,
                             long precision_bits = 128);

struct Lemma8Report {
  bool holds = false;
  std::uint64_t max_q = 0;
  BigInt lhs;  // b^max(q,q')
  BigInt rhs;  // s b a^(q+q')
};

// Audits b^max(q,q') <= s b a^(q+q') for delta strictly inside the gap
// between the left plateau and the right node. `s` must satisfy s*delta in Z.
Lemma8Report lemma8_check(const BracketingPair& pair, const Rational& delta, const BigInt& s);

// Row k of the lambda-tree (values strictly increasing). lambda = 1 gives the
// classical Stern-Brocot values.
std::vector<FareyNode> tree_row(const Rational& lambda, unsigned k, std::size_t cap = kDefaultRowCap);

}  // namespace rotkit
