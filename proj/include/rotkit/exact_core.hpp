#pragma once

#include <cstddef>
#include <vector>

#include "rotkit/rational.hpp"

namespace rotkit {

// Rows larger than this many entries are refused (row index 21).
inline constexpr std::size_t kDefaultRowCap = std::size_t{1} << 20;

// (p+p')/(q+q'). Requires left < right; throws InvalidArgument otherwise and
// ResourceLimit if the denominator overflows 64 bits.
Fraction mediant(const Fraction& left, const Fraction& right);

// Number of entries on Stern-Brocot row k, 2^(k-1)+1. Throws ResourceLimit
// when it exceeds `cap`.
std::size_t row_size(unsigned k, std::size_t cap = kDefaultRowCap);

// Row k of the Stern-Brocot tree restricted to [0,1]: 0/1, ..., 1/1.
std::vector<Fraction> stern_brocot_row(unsigned k, std::size_t cap = kDefaultRowCap);

// Row on which p/q first appears: the sum of its partial quotients, with 0/1
// and 1/1 on row 1.
std::uint64_t stern_brocot_depth(const Fraction& f);

// F_0 = 0, F_1 = 1.
BigInt fibonacci(unsigned long l);

struct Convergent {
  BigInt p;
  BigInt q;
};

// [a0; a1, a2, ...]. For values in [0,1) the first term is 0.
struct ContinuedFraction {
  std::vector<BigInt> terms;
  // True when `terms` is the complete expansion of a rational; false for a
  // prefix of an irrational.
  bool exact = true;

  std::vector<Convergent> convergents() const;
  // Value of the (finite) term sequence.
  Rational value() const;
  std::string str() const;
};

// Canonical expansion of 0 <= x < 1: last term >= 2 unless x = 0 ([0]).
ContinuedFraction continued_fraction_of(const Rational& x);

}  // namespace rotkit
