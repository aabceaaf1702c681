#pragma once

#include "arctelescope/exactnum.hpp"
#include "arctelescope/rigor.hpp"
#include "arctelescope/seq_core.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arctelescope {

// Series of the form
//   sum_{r >= p} atan( lambda (G_{mr+n} - G_{mr+n-m}) / (G_{mr+n} G_{mr+n-m} + lambda^2) )
// whose partial sums collapse to atan(lambda / G_{mp+n-m}) - atan(lambda / G_{mN+n}).

enum class SummandForm { RawLemma, Thm1, Thm2, Thm3, Thm4 };

std::string_view to_string(SummandForm form);

struct TheoremParams {
  SeqIndex j = 0;
  SeqIndex k = 0;
};

struct SeriesSpec {
  SeqFamily family = SeqFamily::fibonacci();
  SeqIndex m = 1;
  SeqIndex n = 0;
  SeqIndex p = 1;
  Surd lambda = BigRational(1);
  SummandForm form = SummandForm::RawLemma;
  std::optional<TheoremParams> params;

  /// Index of the closed-form denominator, m p + n - m.
  SeqIndex closed_index() const { return m * p + n - m; }
  std::string describe() const;
};

SeriesSpec make_lemma_spec(SeqFamily family, SeqIndex m, SeqIndex n, SeqIndex p, Surd lambda);

/// Applies the theorem substitution:
///   Thm1: F, m = 4j,     n = 2k + 2j      (j != 0)
///   Thm2: F, m = 4j - 2, n = 2k + 2j - 2
///   Thm3: L, m = 4j,     n = 2k + 2j - 1  (j != 0)
///   Thm4: L, m = 4j - 2, n = 2k + 2j - 1
SeriesSpec make_theorem_spec(SummandForm form, SeqIndex j, SeqIndex k, SeqIndex p, Surd lambda);

/// Throws ConstraintError unless m != 0 and theorem forms carry their forced (m, n, family).
void validate_spec(const SeriesSpec& spec);

enum class Validity { Ok, ViolatesCondition };

/// One summand. `argument` is exact; `enclosure` contains atan(argument).
struct TermValue {
  Surd argument;
  Validity validity = Validity::Ok;
  FixedInterval enclosure;
};

/// Whether atan(lambda/x) - atan(lambda/y) equals the principal atan of the combined
/// argument: xy > 0, or xy < 0 with lambda^2 < -xy. With the convention
/// atan(lambda/0) = sign(lambda) pi/2 a zero x (resp. y) is fine iff lambda y > 0
/// (resp. lambda x > 0).
Validity addition_validity(const BigInt& x, const BigInt& y, const Surd& lambda);
Validity term_validity(const SeriesSpec& spec, SeqIndex r);

Surd raw_argument(const SeriesSpec& spec, SeqIndex r);
Surd simplified_argument(const SeriesSpec& spec, SeqIndex r);

TermValue term_raw(const SeriesSpec& spec, SeqIndex r, unsigned B = 128);
TermValue term_simplified(const SeriesSpec& spec, SeqIndex r, unsigned B = 128);
/// The summand in the spec's own form.
TermValue term(const SeriesSpec& spec, SeqIndex r, unsigned B = 128);

/// atan(lambda / G_{mN+n}): the exact tail beyond N.
FixedInterval remainder_exact(const SeriesSpec& spec, SeqIndex N, unsigned B);
/// atan(lambda / G_{mp+n-m}).
FixedInterval closed_form(const SeriesSpec& spec, unsigned B);

/// Smallest N >= p with sup |remainder_exact(N)| < tol (doubling, then bisection).
SeqIndex choose_term_count(const SeriesSpec& spec, const FixedInterval& tol);

struct SumReport {
  unsigned bits = 0;
  SeqIndex first = 0;
  SeqIndex last = 0;  // N
  FixedInterval partial;
  FixedInterval remainder;
  FixedInterval total;
  FixedInterval closed;
  std::vector<Validity> validity;  // one per r in [first, last]
  bool all_valid = true;
  bool overlap = false;
  BigInt distance_ulps;       // Hausdorff distance total vs closed
  bool within_budget = false; // distance <= (N - p + 3) 2^(6 - B)

  SeqIndex terms_used() const { return last - first + 1; }
  bool consistent() const { return all_valid && overlap && within_budget; }
};

/// Partial sum over [p, N] plus the exact remainder at N.
SumReport sum_to(const SeriesSpec& spec, SeqIndex N, unsigned B, unsigned threads = 1);
/// Picks N from the tolerance, then sums. Terms may be evaluated on several threads;
/// the reduction always runs in increasing r, so the result is bit-identical.
SumReport sum_series(const SeriesSpec& spec, unsigned B, const FixedInterval& tol, unsigned threads = 1);

struct EquivalenceMismatch {
  SeqIndex r = 0;
  std::optional<Surd> raw;         // nullopt: term undefined
  std::optional<Surd> simplified;  // nullopt: term undefined
};

struct EquivalenceReport {
  SeqIndex checked = 0;
  SeqIndex undefined_in_both = 0;
  std::vector<EquivalenceMismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
};

/// Exact comparison of the theorem summand with the raw lemma summand for r in [r_lo, r_hi].
EquivalenceReport validate_term_equivalence(const SeriesSpec& spec, SeqIndex r_lo, SeqIndex r_hi);

}  // namespace arctelescope
