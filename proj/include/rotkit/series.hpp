#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotkit/bigfloat.hpp"
#include "rotkit/exact_core.hpp"
#include "rotkit/rational.hpp"

namespace rotkit {

// A rotation number 0 < rho < 1 with exact floor evaluation.
//   rational:  p/q
//   quadratic: (P + sqrt D)/Q, D > 0 not a square, Q != 0
//   cf_prefix: [0; a1, ..., aL] followed by an unknown irrational tail;
//              floors are only produced for multipliers |m| <= q_L and only
//              when the convergent sandwich decides them.
class RhoSpec {
 public:
  enum class Kind { rational, quadratic, cf_prefix };

  static RhoSpec rational(const Fraction& f);
  static RhoSpec quadratic(const BigInt& P, const BigInt& D, const BigInt& Q);
  static RhoSpec golden();  // (sqrt 5 - 1)/2 = gamma - 1
  static RhoSpec cf_prefix(const ContinuedFraction& cf);

  // "p/q", "golden", "sqrt:D:p/q+" for (p + sqrt D)/q, "sqrt:D:p/q-" for
  // (p - sqrt D)/q, "cf:[a1,a2,...]" (a0 = 0 implied) or "cf:[0;a1,a2,...]".
  static RhoSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string str() const;

  // floor(a + m rho), exact.
  BigInt floor_affine(const Rational& a, const BigInt& m) const;
  BigInt floor_mul(const BigInt& k) const { return floor_affine(Rational(0), k); }
  // floor(k rho) for k = 0..n.
  std::vector<BigInt> floors_upto(std::uint64_t n) const;

  // Largest admissible |m| (cf_prefix only).
  std::optional<BigInt> horizon() const;
  // Exact value for the rational kind.
  std::optional<Rational> exact() const;
  // Outward-rounded enclosure of rho.
  std::pair<BigFloat, BigFloat> enclosure(long precision_bits) const;

 private:
  RhoSpec() = default;
  int sign_quadratic(const Rational& u, const Rational& v) const;

  Kind kind_ = Kind::rational;
  Rational value_;        // rational
  BigInt P_, D_, Q_;      // quadratic
  ContinuedFraction cf_;  // cf_prefix
  Rational lo_, hi_;      // cf_prefix open sandwich
  BigInt horizon_;
};

// s_k = floor((k+1) rho) - floor(k rho), k >= 0.
class SturmianWord {
 public:
  explicit SturmianWord(RhoSpec rho) : rho_(std::move(rho)) {}
  int term(std::uint64_t k) const;
  // s_1, ..., s_n (s_0 = floor(rho) = 0 is omitted).
  std::vector<int> prefix(std::uint64_t n) const;
  const RhoSpec& rho() const { return rho_; }

 private:
  RhoSpec rho_;
};

inline constexpr long kSeriesPrecision = 192;

// Truncated series: the true sum lies within tail_bound of partial_sum.
struct SeriesValue {
  Rational partial_sum;
  Rational tail_bound;
  std::uint64_t terms_used = 0;
  BigFloat value{kSeriesPrecision};

  Rational lower() const { return partial_sum - tail_bound; }
  Rational upper() const { return partial_sum + tail_bound; }
};

// sum_{k=0}^{N} c_k lambda^k, exact.
Rational power_series(const std::vector<BigInt>& coeffs, const Rational& lambda);

// S_rho(lambda) = sum_{k>=1} floor(k rho) lambda^k.
SeriesValue hecke_mahler(const RhoSpec& rho, const Rational& lambda, const Rational& eps);

struct DeltaForms {
  SeriesValue sturmian;  // (1-lambda)(1 + sum_{k>=1} s_k lambda^k)
  SeriesValue floors;    // ((1-lambda)^2/lambda) sum_{k>=1} (floor(k rho)+1) lambda^k
  Rational discrepancy;  // |sturmian - floors| partial sums
};

// Both forms; throws VerificationFailed if they disagree beyond the combined tails.
DeltaForms delta_forms(const RhoSpec& rho, const Rational& lambda, const Rational& eps);
// The Sturmian form after the cross-check.
SeriesValue delta_of_rho(const RhoSpec& rho, const Rational& lambda, const Rational& eps);

struct Identity2Report {
  std::uint64_t n = 0;
  Rational lhs;       // sum_{k=0}^{N} s_k lambda^k
  Rational rhs;       // (1/lambda - 1) sum_{k=1}^{N+1} floor(k rho) lambda^k
  Rational residual;  // |lhs - rhs|
  Rational slack;     // (N+2) lambda^(N+1) / (1-lambda)
  bool holds = false;
};

Identity2Report identity2_check(const RhoSpec& rho, const Rational& lambda, std::uint64_t n);

// phi(t + shift rho) where phi(t) = sum_{k>=0} lambda^k (delta + (1-lambda) floor(t - (k+1) rho))
// and delta = delta(lambda, rho).
SeriesValue conjugacy_phi(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps,
                          const BigInt& shift = 0);
// Same with a caller-supplied delta, known to within delta_err.
SeriesValue conjugacy_phi_with_delta(const RhoSpec& rho, const Rational& lambda, const Rational& delta,
                                     const Rational& delta_err, const Rational& t, const Rational& eps,
                                     const BigInt& shift = 0);

enum class CheckStatus { pass, fail, skipped };
std::string to_string(CheckStatus s);

struct PropertyCheck {
  std::string property;  // "C1", "C2", "C3"
  CheckStatus status = CheckStatus::fail;
  Rational residual;
  Rational slack;
  std::string note;
};

// (C1) phi(t + rho) = F(phi(t)); skipped when phi(t) cannot be separated from an integer.
PropertyCheck check_c1(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps);
// (C2) phi(t + 1) = phi(t) + 1 within 2 eps.
PropertyCheck check_c2(const RhoSpec& rho, const Rational& lambda, const Rational& t, const Rational& eps);
// (C3) phi(0) = 0 within eps.
PropertyCheck check_c3(const RhoSpec& rho, const Rational& lambda, const Rational& eps);

struct ShadowingReport {
  std::uint64_t n = 0;
  Rational delta;           // rational delta used for the map
  Rational delta_err;
  Rational t0;              // representative inside the matched interval
  double t0_lo = 0.0;       // matched interval [t0_lo, t0_hi)
  double t0_hi = 0.0;
  bool t0_interval_contains_zero = false;
  Rational x_n;
  Rational deviation_upper;  // |x_n - phi(t0 + n rho)| + tails
  Rational lambda_n;
  Rational c_upper;          // deviation_upper / lambda^n
  bool holds = false;        // C <= 1 + slack
};

// Iterates F_{lambda, delta~} exactly from x0 (delta~ from delta_of_rho well
// below lambda^n), matches [x_k] = [t0 + k rho] and measures the deviation.
// Throws MatchingFailed if the wrap constraints are inconsistent.
ShadowingReport orbit_shadowing_check(const RhoSpec& rho, const Rational& lambda, const Rational& x0,
                                      std::uint64_t n);

}  // namespace rotkit
