#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotkit/exact_core.hpp"
#include "rotkit/rational.hpp"
#include "rotkit/series.hpp"

namespace rotkit {

// Open gap between the plateau of node j and the left end of node j+1 on a
// row of the lambda-tree.
struct GapInterval {
  std::uint64_t j = 0;
  unsigned k = 0;
  Fraction left{0, 1};
  Fraction right{1, 1};
  Rational lo;
  Rational hi;
  Rational length;
};

// The 2^(k-1) gaps whose union is E_k.
struct CoverRow {
  unsigned k = 0;
  Rational lambda;
  std::vector<GapInterval> gaps;

  Rational total_length() const;
};

// Builds row k with exact endpoints and checks the closed-form gap length;
// when verify_nesting is set and k > 1, row k-1 is built and the nesting
// checked as well. Throws VerificationFailed on any violation.
CoverRow cover_row(const Rational& lambda, unsigned k, bool verify_nesting = true,
                   std::size_t cap = kDefaultRowCap);

// Rows 1..kmax with nesting checked between consecutive rows.
std::vector<CoverRow> cover_rows(const Rational& lambda, unsigned kmax, std::size_t cap = kDefaultRowCap);

// Every gap of `fine` lies in exactly one gap of `coarse` and every gap of
// `coarse` holds exactly two. Returns an empty string when it holds.
std::string nesting_violation(const CoverRow& coarse, const CoverRow& fine);

struct Lemma9Report {
  unsigned k = 0;
  Rational sigma;
  Rational max_length;
  Rational lambda_k;
  bool max_ok = false;
  std::uint64_t min_q_sum = 0;  // min over j of q_j + q_{j+1}
  bool q_ok = false;            // min_q_sum >= k + 1
  Rational total_length;        // exact sum of |I|
  std::string sum_upper;        // outward-rounded sum of |I|^sigma
  std::string bound_lower;      // outward-rounded sum_{n>=k} n lambda^(sigma n)
  double margin = 0.0;          // bound_lower - sum_upper
  bool sum_ok = false;

  bool ok() const { return max_ok && q_ok && sum_ok; }
};

Lemma9Report lemma9_certificate(const CoverRow& row, const Rational& sigma, long precision_bits = 128);
Lemma9Report lemma9_certificate(const Rational& lambda, unsigned k, const Rational& sigma,
                                long precision_bits = 128);

struct NestInterval {
  unsigned l = 0;
  Fraction left{0, 1};   // F_l/F_{l+1} or F_{l+1}/F_{l+2}, whichever supplies lo
  Fraction right{1, 1};
  Rational lo;
  Rational hi;
  Rational length;
  std::uint64_t exponent = 0;  // F_{l+1} + F_{l+2} - 1
  Rational exponent_ratio;     // (F_{l+1} + F_{l+2}) / F_{l+2}
  bool exponent_ok = false;    // |ratio - gamma| <= 1/F_{l+2}^2, exact
};

struct GoldenNest {
  Rational lambda;
  std::vector<NestInterval> intervals;  // I_0 ... I_L
  bool nested = false;
  bool delta_inside = false;
  SeriesValue delta;   // delta(lambda, gamma - 1)
  Rational delta_eps;  // tolerance that separated delta from every endpoint
  std::string failure;
};

// Throws ResourceLimit when F_{L+2} exceeds max_q.
GoldenNest golden_nest(const Rational& lambda, unsigned L, std::uint64_t max_q = 1u << 14);

}  // namespace rotkit
