#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotkit/bigfloat.hpp"
#include "rotkit/rational.hpp"

namespace rotkit {

// f(x) = {lambda x + delta} on [0,1).
class ContractedRotation {
 public:
  ContractedRotation(Rational lambda, Rational delta);

  const Rational& lambda() const { return lambda_; }
  const Rational& delta() const { return delta_; }

  // f on [0,1).
  Rational apply(const Rational& x) const;

 private:
  Rational lambda_;
  Rational delta_;
};

// F(x) = lambda {x} + delta + [x].
Rational lift_apply(const ContractedRotation& map, const Rational& x);

struct Orbit {
  Rational x0;
  std::vector<Rational> points;  // F^k(x0)
  std::vector<BigInt> wraps;     // floor(F^k(x0))
};

struct IterateLimits {
  std::uint64_t max_steps = 1u << 20;
  std::size_t bit_budget = 65536;
};

// Exact lift orbit of length n+1. Throws ResourceLimit past the step cap or
// when a point needs more than bit_budget bits.
Orbit iterate(const ContractedRotation& map, const Rational& x0, std::uint64_t n,
              const IterateLimits& limits = {});

// First index at which x_n = lambda^n x0 + sum_k lambda^k (delta + (1-lambda)[x_{n-k-1}])
// fails, evaluated term by term; nullopt when it holds everywhere.
std::optional<std::size_t> orbit_identity_failure(const ContractedRotation& map, const Orbit& orbit);

struct RhoEstimate {
  std::uint64_t n = 0;
  BigFloat estimate;    // (F^n(x0) - x0)/n, round to nearest
  BigFloat lower;       // rigorous enclosure of (F^n(x0) - x0)/n
  BigFloat upper;
  Rational error_bar;   // 1/n
  std::uint64_t exact_steps = 0;
  bool periodic_shortcut = false;  // F^n(x0) obtained exactly from a detected cycle
  long working_precision = 0;      // raised while the two float runs disagree on wraps

  // lower - 1/n <= r <= upper + 1/n
  bool consistent_with(const Rational& r) const;
};

// Exact steps while cheap (cycle detection gives F^n exactly), then paired
// downward/upward float runs for the remaining steps, at up to 2^17 bits
// when the runs straddle an integer.
RhoEstimate rho_estimate(const ContractedRotation& map, const Rational& x0, std::uint64_t n,
                         long precision_bits = BigFloat::kDefaultPrecision);

struct PeriodicOrbit {
  std::uint64_t period = 0;
  std::vector<int> wrap_word;     // wrap_word[j]: floor jump from points[j] to points[j+1]
  std::vector<Rational> points;   // starts at the smallest point
  bool touches_discontinuity = false;  // 0 belongs to the cycle
  bool left_limit = false;             // cycle exists only as a left limit at 0 (written as 1)
  bool used_fallback = false;          // word found by enumeration instead of float read-off
  unsigned float_attempts = 0;
};

struct PeriodicOrbitOptions {
  Rational tol = Rational::pow2(-64);
  unsigned retries = 3;
  long precision_bits = BigFloat::kDefaultPrecision;
};

// Caller certifies rho = rho_exact(lambda, delta). Throws VerificationFailed
// when no wrap word reproduces an exact cycle.
PeriodicOrbit find_periodic_orbit(const ContractedRotation& map, const Fraction& rho,
                                  const PeriodicOrbitOptions& opts = {});

// Exact cycle for a given wrap word, or nullopt if the word does not close.
std::optional<PeriodicOrbit> solve_wrap_word(const ContractedRotation& map, const std::vector<int>& word);

struct UniquenessReport {
  bool converged = false;
  std::size_t seeds = 0;
  std::uint64_t steps = 0;
  Rational tol;
  double max_deviation = 0.0;   // largest distance (mod 1) from a seed's final point to the cycle
  Rational max_deviation_upper; // same, rounded up and exact
  double lambda_pow_n = 0.0;
  PeriodicOrbit cycle;
  std::vector<std::string> failures;
};

UniquenessReport uniqueness_probe(const ContractedRotation& map, const std::vector<Rational>& seeds,
                                  std::uint64_t n, const Rational& tol,
                                  long precision_bits = BigFloat::kDefaultPrecision);

struct ContractionReport {
  bool holds = true;
  std::uint64_t steps_checked = 0;
  std::optional<std::uint64_t> branch_split;  // first k with [F^k x] != [F^k y]
  std::string failure;
};

// Checks 0 <= F^k(y) - F^k(x) <= lambda^k (y - x) exactly for k <= steps while
// the two orbits stay in the same unit interval. Requires x <= y < [x] + 1.
ContractionReport contraction_check(const ContractedRotation& map, const Rational& x, const Rational& y,
                                    std::uint64_t steps);

// Burn-in length 4 q log(1/tol) / log(1/lambda), rounded up.
std::uint64_t burn_in_steps(const Rational& lambda, std::uint64_t q, const Rational& tol);

}  // namespace rotkit
