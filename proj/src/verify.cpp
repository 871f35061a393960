#include "rotkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "rotkit/cantor.hpp"
#include "rotkit/dynamics.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/exact_core.hpp"
#include "rotkit/lambda_tree.hpp"
#include "rotkit/series.hpp"

namespace rotkit {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr std::size_t kMaxReported = 10;

class Collector {
 public:
  explicit Collector(SuiteResult& r) : r_(r) {}
  template <class Msg>
  bool check(bool ok, Msg&& msg) {
    ++r_.checks;
    if (!ok) {
      ++failed_;
      if (r_.failures.size() < kMaxReported) r_.failures.push_back(msg());
    }
    return ok;
  }
  std::uint64_t failed() const { return failed_; }

 private:
  SuiteResult& r_;
  std::uint64_t failed_ = 0;
};

Rational sample_lambda(std::mt19937_64& rng, unsigned max_den) {
  std::uniform_int_distribution<unsigned> den(2, max_den);
  for (;;) {
    const unsigned b = den(rng);
    const unsigned a = std::uniform_int_distribution<unsigned>(1, b - 1)(rng);
    if (std::gcd(a, b) == 1) return Rational(BigInt(a), BigInt(b));
  }
}

Rational sample_unit(std::mt19937_64& rng, unsigned max_den) {
  const unsigned s = std::uniform_int_distribution<unsigned>(1, max_den)(rng);
  return Rational(BigInt(std::uniform_int_distribution<unsigned>(0, s - 1)(rng)), BigInt(s));
}

RhoSpec sample_quadratic(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dd(2, 200), pp(-30, 30), qq(2, 40);
  for (;;) {
    const long D = dd(rng);
    if (mpz_perfect_square_p(BigInt(D).get_mpz_t())) continue;
    const long p = pp(rng), q = qq(rng);
    const double v = (static_cast<double>(p) + std::sqrt(static_cast<double>(D))) / static_cast<double>(q);
    if (v <= 0.01 || v >= 0.99) continue;
    return RhoSpec::quadratic(BigInt(p), BigInt(D), BigInt(q));
  }
}

std::vector<Rational> lambda_grid() {
  std::vector<Rational> g;
  for (int i = 1; i <= 25; ++i) g.emplace_back(BigInt(i), BigInt(26));
  return g;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// ---- shared checks -----------------------------------------------------

// Gap identity, plateau ordering, unimodularity and (optionally) agreement of
// the mediant construction with the direct sum on rows 1..depth.
void check_tree_structure(Collector& c, const Rational& l, unsigned depth, bool mediant_agreement,
                          bool gap = true, bool ordering = true, bool unimodular = true) {
  for (unsigned k = 1; k <= depth; ++k) {
    const auto row = tree_row(l, k);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      const FareyNode& a = row[j];
      const FareyNode& b = row[j + 1];
      const std::string where = "lambda=" + l.str() + " row " + std::to_string(k) + " pair " + a.frac.str() + "," +
                                b.frac.str();
      if (gap) {
        c.check(b.value() - a.value() == l.pow(a.frac.q() - 1) / (a.qval * b.qval),
                [&] { return "gap identity fails at " + where; });
      }
      if (ordering) {
        const Plateau pa = plateau(a);
        c.check(pa.lo <= pa.hi && pa.hi < b.value(), [&] { return "plateau ordering fails at " + where; });
      }
      if (unimodular) {
        c.check(b.frac.p() * a.frac.q() - a.frac.p() * b.frac.q() == 1,
                [&] { return "unimodularity fails at " + where; });
      }
    }
    if (mediant_agreement) {
      for (std::size_t j = 1; j + 1 < row.size(); j += 2) {
        const FareyNode direct = make_node(l, row[j].frac);
        c.check(direct.cval == row[j].cval && direct.qval == row[j].qval,
                [&] { return "mediant/direct mismatch at lambda=" + l.str() + " " + row[j].frac.str(); });
      }
    }
  }
}

// ---- invariant suites ----------------------------------------------------

void suite_unimodularity(Collector& c, const VerifyOptions&) {
  for (unsigned k = 1; k <= 14; ++k) {
    const auto row = stern_brocot_row(k);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      c.check(row[j + 1].p() * row[j].q() - row[j].p() * row[j + 1].q() == 1,
              [&] { return "row " + std::to_string(k) + ": " + row[j].str() + ", " + row[j + 1].str(); });
    }
  }
}

void suite_row_completeness(Collector& c, const VerifyOptions&) {
  for (unsigned k = 1; k <= 16; ++k) {
    const auto row = stern_brocot_row(k);
    const std::set<std::pair<std::uint64_t, std::uint64_t>> have = [&] {
      std::set<std::pair<std::uint64_t, std::uint64_t>> s;
      for (const auto& f : row) s.emplace(f.p(), f.q());
      return s;
    }();
    for (std::uint64_t q = 1; q <= k; ++q) {
      for (std::uint64_t p = 0; p <= q; ++p) {
        if (std::gcd(p, q) != 1) continue;
        c.check(have.count({p, q}) == 1,
                [&] { return std::to_string(p) + "/" + std::to_string(q) + " missing from row " + std::to_string(k); });
      }
    }
  }
}

void suite_cf_roundtrip(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<long> d(1, 999999);
  for (int i = 0; i < 1000; ++i) {
    const long den = d(rng);
    const long num = std::uniform_int_distribution<long>(0, den - 1)(rng);
    const Rational x{BigInt(num), BigInt(den)};
    const ContinuedFraction cf = continued_fraction_of(x);
    c.check(cf.value() == x, [&] { return "cf round trip fails for " + x.str(); });
  }
}

void suite_gap_identity(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < 20; ++i) check_tree_structure(c, sample_lambda(rng, 40), 10, false, true, false, false);
}

void suite_plateau_ordering(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 1);
  for (int i = 0; i < 20; ++i) check_tree_structure(c, sample_lambda(rng, 40), 10, false, false, true, false);
}

void suite_mediant_agreement(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 2);
  for (int i = 0; i < 50; ++i) check_tree_structure(c, sample_lambda(rng, 30), 12, true, false, false, false);
}

void suite_rho_monotone(Collector& c, const VerifyOptions&) {
  for (const char* ls : {"1/2", "2/3", "7/10", "1/5"}) {
    const Rational l = Rational::parse(ls);
    Fraction prev(0, 1);
    for (int i = 0; i < 1000; ++i) {
      const Rational d(BigInt(i), BigInt(1000));
      const Fraction cur = rho_exact(l, d, 100000).rho;
      c.check(prev <= cur, [&] { return "rho decreases at lambda=" + l.str() + ", delta=" + d.str(); });
      prev = cur;
    }
  }
}

void suite_theorem2(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 3);
  int done = 0;
  while (done < 1000) {
    const Rational l = sample_lambda(rng, 50);
    const Rational d = sample_unit(rng, 50);
    if (d.sign() == 0 || golden_hypothesis(l.num(), l.den(), o.precision_bits) != GoldenHypothesis::holds) continue;
    ++done;
    const Theorem2Bound t = theorem2_bound(l.num(), l.den(), d.num(), d.den(), o.precision_bits);
    const RhoResult r = rho_exact(l, d);
    c.check(to_bigint(r.rho.q()) <= t.max_q && r.depth <= t.level_k + 2, [&] {
      return "lambda=" + l.str() + " delta=" + d.str() + ": q=" + std::to_string(r.rho.q()) +
             " depth=" + std::to_string(r.depth) + " bound=" + t.bound_decimal + " k=" + std::to_string(t.level_k);
    });
  }
}

void suite_specialization(Collector& c, const VerifyOptions&) {
  for (unsigned k = 1; k <= 12; ++k) {
    const auto classical = stern_brocot_row(k);
    const auto deformed = tree_row(Rational(1), k);
    c.check(classical.size() == deformed.size(), [&] { return "row sizes differ at k=" + std::to_string(k); });
    for (std::size_t i = 0; i < std::min(classical.size(), deformed.size()); ++i) {
      c.check(deformed[i].value() == classical[i].value(),
              [&] { return "lambda=1 row " + std::to_string(k) + " differs at " + classical[i].str(); });
    }
  }
}

void suite_lift_commutation(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 4);
  std::uniform_int_distribution<long> shift(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const ContractedRotation m(sample_lambda(rng, 40), sample_unit(rng, 40));
    const Rational x = sample_unit(rng, 1000) + Rational(shift(rng));
    c.check(lift_apply(m, x).frac() == m.apply(x.frac()),
            [&] { return "{F(x)} != f({x}) at x=" + x.str(); });
  }
}

void suite_monotone_contraction(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 5);
  std::uniform_int_distribution<long> shift(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const Rational l = sample_lambda(rng, 40);
    const ContractedRotation m(l, sample_unit(rng, 40));
    const Rational x = sample_unit(rng, 1000) + Rational(shift(rng));
    const Rational y = x + (Rational(x.floor()) + Rational(1) - x) * sample_unit(rng, 50);
    const Rational diff = lift_apply(m, y) - lift_apply(m, x);
    c.check(diff.sign() >= 0 && diff <= l * (y - x), [&] { return "monotone contraction fails at x=" + x.str() + ", y=" + y.str(); });
  }
}

void suite_rho_oracle(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 6);
  for (int i = 0; i < 500; ++i) {
    const Rational l = sample_lambda(rng, 12);
    const Rational d = sample_unit(rng, 12);
    const RhoResult r = rho_exact(l, d, 100000);
    const RhoEstimate e = rho_estimate(ContractedRotation(l, d), Rational(0), 10000, o.precision_bits);
    c.check(e.consistent_with(r.rho.value()), [&] {
      return "lambda=" + l.str() + " delta=" + d.str() + ": estimate " + e.estimate.to_fixed(8) + " vs " + r.rho.str();
    });
  }
}

void suite_orbit_identity(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 7);
  for (int i = 0; i < 40; ++i) {
    const ContractedRotation m(sample_lambda(rng, 30), sample_unit(rng, 30));
    const Orbit orb = iterate(m, sample_unit(rng, 30), 60);
    const auto f = orbit_identity_failure(m, orb);
    c.check(!f.has_value(), [&] { return "closed form fails at index " + std::to_string(*f); });
  }
}

void suite_orbit_determinism(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 8);
  for (int i = 0; i < 100; ++i) {
    const ContractedRotation m(sample_lambda(rng, 25), sample_unit(rng, 25));
    const Fraction rho = rho_exact(m.lambda(), m.delta(), 100000).rho;
    PeriodicOrbitOptions a, b;
    b.tol = Rational::pow2(-200);
    b.precision_bits = 256;
    c.check(find_periodic_orbit(m, rho, a).points == find_periodic_orbit(m, rho, b).points,
            [&] { return "cycle depends on burn-in at lambda=" + m.lambda().str() + ", delta=" + m.delta().str(); });
  }
}

void suite_sturmian(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 9);
  for (int i = 0; i < 50; ++i) {
    const RhoSpec q = sample_quadratic(rng);
    const auto w = SturmianWord(q).prefix(500);
    long ones = 0;
    for (int t : w) {
      c.check(t == 0 || t == 1, [&] { return "term outside {0,1} for " + q.str(); });
      ones += t;
    }
    const auto [lo, hi] = q.enclosure(128);
    const Rational density(BigInt(ones), BigInt(500));
    c.check((density - lo.to_rational()).abs() <= Rational(BigInt(1), BigInt(500)) + (hi.to_rational() - lo.to_rational()),
            [&] { return "density off for " + q.str(); });
  }
  for (std::uint64_t qq = 2; qq <= 15; ++qq) {
    for (std::uint64_t p = 1; p < qq; ++p) {
      if (std::gcd(p, qq) != 1) continue;
      const auto w = SturmianWord(RhoSpec::rational(Fraction(p, qq))).prefix(3 * qq);
      std::uint64_t ones = 0;
      for (std::uint64_t k = 0; k < qq; ++k) ones += static_cast<std::uint64_t>(w[k]);
      c.check(ones == p, [&] { return "period count wrong for " + std::to_string(p) + "/" + std::to_string(qq); });
      for (std::uint64_t k = 0; k + qq < w.size(); ++k) {
        c.check(w[k] == w[k + qq], [&] { return "word not periodic for " + std::to_string(p) + "/" + std::to_string(qq); });
      }
    }
  }
}

void suite_delta_forms(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 10);
  for (int i = 0; i < 100; ++i) {
    const Rational l = sample_lambda(rng, 30);
    const RhoSpec rho = sample_quadratic(rng);
    try {
      const DeltaForms f = delta_forms(rho, l, Rational::pow2(-64));
      c.check(f.discrepancy <= f.sturmian.tail_bound + f.floors.tail_bound, [&] { return "forms disagree"; });
    } catch (const VerificationFailed& e) {
      c.check(false, [&] { return std::string(e.what()); });
    }
  }
}

void suite_delta_monotone(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 11);
  for (int i = 0; i < 30; ++i) {
    const Rational l = sample_lambda(rng, 20);
    RhoSpec a = sample_quadratic(rng), b = sample_quadratic(rng);
    const auto ea = a.enclosure(128), eb = b.enclosure(128);
    if (!(ea.second < eb.first) && !(eb.second < ea.first)) continue;
    if (eb.second < ea.first) std::swap(a, b);
    const SeriesValue da = delta_of_rho(a, l, Rational::pow2(-96));
    const SeriesValue db = delta_of_rho(b, l, Rational::pow2(-96));
    c.check(da.upper() < db.lower(), [&] { return "delta not increasing: " + a.str() + " vs " + b.str(); });
  }
}

void suite_phi_monotone(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 12);
  for (int i = 0; i < 10; ++i) {
    const Rational l = sample_lambda(rng, 20);
    const RhoSpec rho = sample_quadratic(rng);
    const Rational eps = Rational::pow2(-64);
    Rational prev_upper(-100);
    Rational prev_t(-100);
    for (int j = -12; j <= 12; ++j) {
      const Rational t(BigInt(j), BigInt(5));
      const SeriesValue v = conjugacy_phi(rho, l, t, eps);
      // Separation is only claimed once eps < (t2 - t1)(1 - lambda).
      if (eps < (t - prev_t) * (Rational(1) - l)) {
        c.check(prev_upper <= v.upper() && prev_upper - Rational(2) * eps < v.lower(),
                [&] { return "phi decreases near t=" + t.str() + " for " + rho.str(); });
      }
      prev_upper = v.upper();
      prev_t = t;
    }
  }
}

void suite_gap_length(Collector& c, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 13);
  for (int i = 0; i < 10; ++i) {
    const Rational l = sample_lambda(rng, 30);
    try {
      const auto rows = cover_rows(l, 12);
      c.check(true, [] { return std::string(); });
      for (const auto& r : rows) c.check(!r.gaps.empty(), [] { return std::string("empty row"); });
    } catch (const VerificationFailed& e) {
      c.check(false, [&] { return std::string(e.what()); });
    }
  }
}

void suite_nesting(Collector& c, const VerifyOptions&) {
  for (const auto& l : lambda_grid()) {
    std::vector<CoverRow> rows;
    for (unsigned k = 1; k <= 12; ++k) rows.push_back(cover_row(l, k, false));
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const std::string v = nesting_violation(rows[k - 1], rows[k]);
      c.check(v.empty(), [&] { return "lambda=" + l.str() + ": " + v; });
    }
  }
}

// Strict decrease holds exactly; the per-row ratio <= lambda + margin clause
// is checked as stated (it fails on early rows, where the ratio is
// 2 lambda / (1 + lambda) at k = 2).
void suite_measure_decay(Collector& c, const VerifyOptions&) {
  const Rational margin(BigInt(1), BigInt(20));
  for (const auto& l : lambda_grid()) {
    Rational prev(0);
    for (unsigned k = 1; k <= 14; ++k) {
      const Rational total = cover_row(l, k, false).total_length();
      if (k > 1) {
        c.check(total < prev, [&] { return "measure not decreasing at lambda=" + l.str() + ", k=" + std::to_string(k); });
        const Rational ratio = total / prev;
        c.check(ratio <= l + margin, [&] {
          return "lambda=" + l.str() + " k=" + std::to_string(k) + ": |E_k|/|E_k-1| = " + fmt(ratio.to_double()) +
                 " > lambda + 0.05";
        });
      }
      prev = total;
    }
  }
}

void suite_lemma9(Collector& c, const VerifyOptions& o) {
  for (const auto& l : lambda_grid()) {
    for (unsigned k = 1; k <= 12; ++k) {
      const CoverRow row = cover_row(l, k, false);
      for (const char* s : {"1/4", "1/2", "1"}) {
        const Lemma9Report r = lemma9_certificate(row, Rational::parse(s), o.precision_bits);
        c.check(r.ok(), [&] {
          return "lambda=" + l.str() + " k=" + std::to_string(k) + " sigma=" + s + " max_ok=" + std::to_string(r.max_ok) +
                 " q_ok=" + std::to_string(r.q_ok) + " sum_ok=" + std::to_string(r.sum_ok);
        });
      }
    }
  }
}

void suite_golden_nest(Collector& c, const VerifyOptions&) {
  for (const char* ls : {"1/2", "1/3", "2/5", "3/4"}) {
    const GoldenNest n = golden_nest(Rational::parse(ls), 14);
    c.check(n.nested, [&] { return std::string("lambda=") + ls + ": " + n.failure; });
    c.check(n.delta_inside, [&] { return std::string("lambda=") + ls + ": " + n.failure; });
    for (const auto& iv : n.intervals) {
      c.check(iv.exponent_ok, [&] { return "exponent ratio check fails at l=" + std::to_string(iv.l); });
    }
  }
}

struct SuiteEntry {
  const char* name;
  const char* description;
  void (*fn)(Collector&, const VerifyOptions&);
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {"unimodularity", "Stern-Brocot rows 1..14: adjacent p/q < p'/q' satisfy p'q - pq' = 1", suite_unimodularity},
      {"row-completeness", "rows k <= 16 contain every reduced fraction with denominator <= k", suite_row_completeness},
      {"cf-roundtrip", "continued fraction expansion and reconstruction on 1000 random rationals", suite_cf_roundtrip},
      {"gap-identity", "right.lo - left.lo = lambda^(q-1)/(Q Q') on rows <= 10 for 20 random lambda", suite_gap_identity},
      {"plateau-ordering", "left.lo <= left.hi < right.lo on rows <= 10 for 20 random lambda", suite_plateau_ordering},
      {"mediant-agreement", "lambda-mediant nodes equal direct c-sums at depth <= 12 for 50 lambda", suite_mediant_agreement},
      {"rho-monotone", "rho_exact non-decreasing over a 1000-point delta grid", suite_rho_monotone},
      {"theorem2", "q <= theorem2 bound and depth <= k+2 over 1000 certified samples", suite_theorem2},
      {"specialization", "lambda = 1 rows equal the classical Stern-Brocot rows", suite_specialization},
      {"lift-commutation", "{F(x)} = f({x}) for 10^4 random rationals", suite_lift_commutation},
      {"monotone-contraction", "0 <= F(y) - F(x) <= lambda (y - x) within a unit interval", suite_monotone_contraction},
      {"rho-oracle", "rho_estimate(n=10^4) encloses rho_exact within 1/n for 500 maps", suite_rho_oracle},
      {"orbit-identity", "closed-form orbit formula holds exactly on exact orbits", suite_orbit_identity},
      {"orbit-determinism", "periodic orbit independent of the float burn-in length", suite_orbit_determinism},
      {"sturmian", "Sturmian terms in {0,1}, density and rational periodicity", suite_sturmian},
      {"delta-forms", "Sturmian and floor forms of delta agree within tail bounds", suite_delta_forms},
      {"delta-monotone", "delta(lambda, rho) strictly increasing in rho", suite_delta_monotone},
      {"phi-monotone", "conjugacy phi increasing on sampled t", suite_phi_monotone},
      {"gap-length", "closed-form gap lengths and nesting verified while building rows <= 12", suite_gap_length},
      {"nesting", "each row-k gap holds exactly two row-(k+1) gaps, 25-point grid", suite_nesting},
      {"measure-decay", "|E_k| strictly decreasing and |E_k|/|E_k-1| <= lambda + 0.05 for k <= 14", suite_measure_decay},
      {"lemma9", "lemma9 gap-sum certificates on the 25-point grid, k <= 12, sigma in {1/4, 1/2, 1}", suite_lemma9},
      {"golden-nest", "golden-ratio nest is nested, contains delta(lambda, gamma-1), exponents -> gamma", suite_golden_nest},
  };
  return r;
}

}  // namespace

std::vector<SuiteInfo> suite_catalog() {
  std::vector<SuiteInfo> out;
  for (const auto& e : registry()) out.push_back({e.name, e.description});
  return out;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  for (const auto& e : registry()) {
    if (name != e.name) continue;
    SuiteResult r;
    r.name = e.name;
    r.description = e.description;
    const auto t0 = Clock::now();
    Collector c(r);
    e.fn(c, opts);
    r.seconds = since(t0);
    r.passed = c.failed() == 0;
    if (c.failed() > r.failures.size()) {
      r.note = std::to_string(c.failed()) + " failures, first " + std::to_string(r.failures.size()) + " shown";
    }
    return r;
  }
  throw InvalidArgument("unknown suite '" + name + "'");
}

// ---- acceptance criteria ---------------------------------------------------

namespace {

CriterionResult criterion1(const VerifyOptions& o) {
  CriterionResult r{"1", "plateau oracle agreement, 500 maps, n = 10^4", false, "", 0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed);
  const std::uint64_t n = 10000;
  int bad = 0;
  double worst = 0.0;
  std::string first;
  for (int i = 0; i < 500; ++i) {
    const Rational l = sample_lambda(rng, 50);
    const Rational d = sample_unit(rng, 50);
    const RhoResult exact = rho_exact(l, d, 1u << 20);
    const RhoEstimate e = rho_estimate(ContractedRotation(l, d), Rational(0), n, 128);
    const Rational p = exact.rho.value();
    const Rational dev = max(e.upper.to_rational() - p, p - e.lower.to_rational());
    worst = std::max(worst, dev.to_double());
    if (dev > e.error_bar) {
      if (first.empty()) first = " first: lambda=" + l.str() + " delta=" + d.str();
      ++bad;
    }
  }
  r.seconds = since(t0);
  r.passed = bad == 0 && r.seconds < 60.0;
  r.detail = std::to_string(500 - bad) + "/500 within 1/n; max |F^n(0)/n - p/q| <= " + fmt(worst) + first +
             "; runtime " + fmt(r.seconds, 3) + " s (limit 60 s)";
  return r;
}

CriterionResult criterion2(const VerifyOptions&) {
  CriterionResult r{"2", "worked instance lambda=1/2, delta=3/4", false, "", 0};
  const auto t0 = Clock::now();
  const Rational l = Rational::parse("1/2"), d = Rational::parse("3/4");
  const RhoResult rho = rho_exact(l, d);
  const ContractedRotation m(l, d);
  const PeriodicOrbit orb = find_periodic_orbit(m, rho.rho);
  // Hand-solved x = lambda (lambda x + delta) + delta - 1.
  const Rational x = (d * (Rational(1) + l) - Rational(1)) / (Rational(1) - l * l);
  const bool rho_ok = rho.rho == Fraction(1, 2);
  const bool plateau_ok = rho.plateau.lo == Rational::parse("2/3") && rho.plateau.hi == Rational::parse("5/6");
  const bool orbit_ok = orb.points == std::vector<Rational>{Rational::parse("1/6"), Rational::parse("5/6")} &&
                        orb.wrap_word == std::vector<int>{0, 1} && x == orb.points[0];
  const bool f2_ok = m.apply(m.apply(orb.points[0])) == orb.points[0] && m.apply(m.apply(orb.points[1])) == orb.points[1];
  r.passed = rho_ok && plateau_ok && orbit_ok && f2_ok;
  r.detail = "rho=" + rho.rho.str() + " plateau=[" + rho.plateau.lo.str() + ", " + rho.plateau.hi.str() + "] orbit={" +
             orb.points[0].str() + ", " + (orb.points.size() > 1 ? orb.points[1].str() : "?") + "} word=(" +
             std::to_string(orb.wrap_word[0]) + (orb.wrap_word.size() > 1 ? "," + std::to_string(orb.wrap_word[1]) : "") +
             ") f^2 fixed=" + (f2_ok ? "yes" : "no");
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion3(const VerifyOptions& o) {
  CriterionResult r{"3", "theorem2 height bound on 200 certified samples", false, "", 0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 3);
  int done = 0, bad = 0;
  std::uint64_t max_q = 0;
  std::string first;
  while (done < 200) {
    const Rational l = sample_lambda(rng, 50);
    const Rational d = sample_unit(rng, 50);
    if (d.sign() == 0 || golden_hypothesis(l.num(), l.den(), o.precision_bits) != GoldenHypothesis::holds) continue;
    ++done;
    const Theorem2Bound t = theorem2_bound(l.num(), l.den(), d.num(), d.den(), o.precision_bits);
    const RhoResult res = rho_exact(l, d);
    max_q = std::max(max_q, res.rho.q());
    if (!(to_bigint(res.rho.q()) <= t.max_q && res.depth <= t.level_k + 2)) {
      ++bad;
      if (first.empty()) first = " first: lambda=" + l.str() + " delta=" + d.str();
    }
  }
  r.passed = bad == 0;
  r.detail = std::to_string(200 - bad) + "/200 satisfy q <= bound and depth <= k+2; largest q " +
             std::to_string(max_q) + first;
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion4(const VerifyOptions&) {
  CriterionResult r{"4", "exact structural identities, 25 lambda, depth <= 12", false, "", 0};
  const auto t0 = Clock::now();
  SuiteResult s;
  Collector c(s);
  for (const auto& l : lambda_grid()) check_tree_structure(c, l, 12, true);
  r.seconds = since(t0);
  r.passed = c.failed() == 0 && r.seconds < 30.0;
  r.detail = std::to_string(s.checks) + " exact checks, " + std::to_string(c.failed()) + " failures" +
             (s.failures.empty() ? "" : " (" + s.failures.front() + ")") + "; runtime " + fmt(r.seconds, 3) +
             " s (limit 30 s)";
  return r;
}

CriterionResult criterion5(const VerifyOptions& o) {
  CriterionResult r{"5", "series identities and conjugacy properties, eps = 2^-64", false, "", 0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 5);
  const Rational eps = Rational::pow2(-64);
  int id_bad = 0, forms_bad = 0, c1_bad = 0, c2_bad = 0, c3_bad = 0, c1_skipped = 0;
  for (int i = 0; i < 100; ++i) {
    const Rational l = sample_lambda(rng, 30);
    const RhoSpec rho = i % 4 == 3 ? [&] {
      for (;;) {
        const Rational x = sample_unit(rng, 40);
        if (x.sign() > 0) return RhoSpec::rational(Fraction::from_rational(x));
      }
    }()
                                   : sample_quadratic(rng);
    const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(0, 64)(rng);
    if (!identity2_check(rho, l, n).holds) ++id_bad;
    try {
      delta_forms(rho, l, eps);
    } catch (const VerificationFailed&) {
      ++forms_bad;
    }
    if (rho.kind() == RhoSpec::Kind::rational) continue;  // phi is built for irrational rho
    const Rational t = sample_unit(rng, 50) * Rational(3) - Rational(1);
    if (check_c2(rho, l, t, eps).status != CheckStatus::pass) ++c2_bad;
    if (check_c3(rho, l, eps).status != CheckStatus::pass) ++c3_bad;
    const PropertyCheck c1 = check_c1(rho, l, t, eps);
    if (c1.status == CheckStatus::fail) ++c1_bad;
    if (c1.status == CheckStatus::skipped) ++c1_skipped;
  }
  r.passed = id_bad + forms_bad + c1_bad + c2_bad + c3_bad == 0;
  r.detail = "identity2 failures " + std::to_string(id_bad) + "/100, Sturmian vs floor form failures " + std::to_string(forms_bad) +
             "/100, C1 failures " + std::to_string(c1_bad) + " (skipped near integers " + std::to_string(c1_skipped) +
             "), C2 failures " + std::to_string(c2_bad) + ", C3 failures " + std::to_string(c3_bad);
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion6(const VerifyOptions&) {
  CriterionResult r{"6", "staircase inversion at rho = gamma-1, eps = 2^-80", false, "", 0};
  const auto t0 = Clock::now();
  const RhoSpec g = RhoSpec::golden();
  const Rational tol = Rational::pow2(-20);
  bool all = true;
  std::string detail;
  for (const char* ls : {"1/2", "1/3", "2/5"}) {
    const Rational l = Rational::parse(ls);
    const Rational dstar = delta_of_rho(g, l, Rational::pow2(-80)).partial_sum;
    const RhoResult res = rho_exact(l, dstar, 1u << 20);
    const Rational p = res.rho.value();
    // |p/q - rho| <= tol decided by exact sign tests against sqrt 5.
    const bool close = g.floor_affine(p + tol, -1) >= 0 && g.floor_affine(tol - p, 1) >= 0;
    const bool deep = res.rho.q() >= 100;
    const auto enc = g.enclosure(128);
    const double diff = std::abs(p.to_double() - enc.first.to_double());
    all = all && close && deep;
    if (!detail.empty()) detail += "; ";
    detail += "lambda=" + std::string(ls) + " -> " + res.rho.str() + " (|p/q - rho| = 2^" + fmt(std::log2(diff), 4) +
              ", q " + (deep ? ">=" : "<") + " 100)";
  }
  r.passed = all;
  r.detail = detail + (all ? "" : "; a rational within 2^-80 of delta only reaches a shallow convergent");
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion7a(const VerifyOptions& o) {
  CriterionResult r{"7a", "lemma9 gap-sum certificates, 25-point grid, k <= 12, sigma in {1/4,1/2,1}", false, "", 0};
  const auto t0 = Clock::now();
  int total = 0, bad = 0;
  double min_margin = 1e300;
  for (const auto& l : lambda_grid()) {
    for (unsigned k = 1; k <= 12; ++k) {
      const CoverRow row = cover_row(l, k, false);
      for (const char* s : {"1/4", "1/2", "1"}) {
        const Lemma9Report rep = lemma9_certificate(row, Rational::parse(s), o.precision_bits);
        ++total;
        if (!rep.ok()) ++bad;
        min_margin = std::min(min_margin, rep.margin);
      }
    }
  }
  r.passed = bad == 0;
  r.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " certificates pass; smallest sigma-sum margin " +
             fmt(min_margin);
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion7b(const VerifyOptions&) {
  CriterionResult r{"7b", "|E_k| shrinks by a factor <= lambda + 0.05 per row", false, "", 0};
  const auto t0 = Clock::now();
  const Rational margin(BigInt(1), BigInt(20));
  int rows = 0, bad = 0;
  double worst_excess = -1.0;
  std::string worst;
  for (const auto& l : lambda_grid()) {
    Rational prev(0);
    for (unsigned k = 1; k <= 12; ++k) {
      const Rational total = cover_row(l, k, false).total_length();
      if (k > 1) {
        ++rows;
        const Rational ratio = total / prev;
        const double excess = (ratio - l).to_double();
        if (ratio > l + margin) ++bad;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = "lambda=" + l.str() + " k=" + std::to_string(k) + " ratio " + fmt(ratio.to_double(), 4);
        }
      }
      prev = total;
    }
  }
  r.passed = bad == 0;
  r.detail = std::to_string(rows - bad) + "/" + std::to_string(rows) + " row ratios within lambda + 0.05; worst " + worst +
             (bad ? "; early rows exceed it (k=2 ratio is 2 lambda/(1+lambda))" : "");
  r.seconds = since(t0);
  return r;
}

CriterionResult criterion8(const VerifyOptions& o) {
  CriterionResult r{"8", "uniqueness probe, 100 maps x 8 seeds, tol lambda^64; exact contraction k <= 40", false, "", 0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 8);
  int probe_bad = 0, contraction_bad = 0, contraction_skipped = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    const Rational l = sample_lambda(rng, 20);
    const ContractedRotation m(l, sample_unit(rng, 20));
    const Fraction rho = rho_exact(m.lambda(), m.delta()).rho;
    const Rational tol = l.pow(64);
    std::vector<Rational> seeds{Rational(0)};
    while (seeds.size() < 8) seeds.push_back(sample_unit(rng, 1000));
    const std::uint64_t n = 64 + burn_in_steps(l, rho.q(), tol);
    const UniquenessReport u = uniqueness_probe(m, seeds, n, tol, o.precision_bits);
    if (!u.converged) {
      ++probe_bad;
      if (first.empty()) first = " first: lambda=" + l.str() + " delta=" + m.delta().str();
    }
    // y within 1 - max(cycle) of the smallest cycle point keeps both orbits in
    // the same unit interval, where the contraction identity applies.
    const PeriodicOrbit& cyc = u.cycle;
    if (cyc.left_limit) {
      ++contraction_skipped;
      continue;
    }
    const Rational x = cyc.points.front();
    const Rational window = Rational(1) - *std::max_element(cyc.points.begin(), cyc.points.end());
    const Rational y = x + window * sample_unit(rng, 97);
    const ContractionReport cr = contraction_check(m, x, y, 40);
    if (!cr.holds || cr.steps_checked != 40) ++contraction_bad;
  }
  r.passed = probe_bad == 0 && contraction_bad == 0;
  r.detail = std::to_string(100 - probe_bad) + "/100 maps converge to one cycle; contraction check failures " +
             std::to_string(contraction_bad) + " (left-limit cycles skipped " + std::to_string(contraction_skipped) + ")" +
             first;
  r.seconds = since(t0);
  return r;
}

}  // namespace

std::vector<std::string> criterion_ids() { return {"1", "2", "3", "4", "5", "6", "7a", "7b", "8"}; }

CriterionResult run_criterion(const std::string& id, const VerifyOptions& o) {
  static const std::map<std::string, std::function<CriterionResult(const VerifyOptions&)>> table{
      {"1", criterion1}, {"2", criterion2}, {"3", criterion3},   {"4", criterion4},   {"5", criterion5},
      {"6", criterion6}, {"7a", criterion7a}, {"7b", criterion7b}, {"8", criterion8},
  };
  const auto it = table.find(id);
  if (it == table.end()) throw InvalidArgument("unknown acceptance criterion '" + id + "'");
  try {
    return it->second(o);
  } catch (const Error& e) {
    CriterionResult r;
    r.id = id;
    r.title = "criterion " + id;
    r.passed = false;
    r.detail = std::string("raised: ") + e.what();
    return r;
  }
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& o) {
  std::vector<CriterionResult> out;
  for (const auto& id : criterion_ids()) out.push_back(run_criterion(id, o));
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " :: " << r.detail << " (" << r.seconds
     << " s)";
  return os.str();
}

}  // namespace rotkit
