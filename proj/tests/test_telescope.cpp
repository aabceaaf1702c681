#include "arctelescope/errors.hpp"
#include "arctelescope/telescope.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arctelescope;

namespace {

BigRational q(long n, long d = 1) { return make_rational(n, d); }

SeriesSpec lehmer() { return make_lemma_spec(SeqFamily::fibonacci(), 2, 1, 1, Surd(q(1))); }

FixedInterval tol_pow2(long e, unsigned B = 128) { return iv_pow2(e, B); }

// Raw lemma argument from the plain recurrence: lambda (y - x) / (x y + lambda^2),
// x = G_{mr+n-m}, y = G_{mr+n}; returned as (rational part, radicand).
Surd oracle_raw(long g0, long g1, long m, long n, const Surd& lambda, long r) {
  const mpz_class x = oracle::recurrence(g0, g1, m * r + n - m);
  const mpz_class y = oracle::recurrence(g0, g1, m * r + n);
  const BigRational den = BigRational(x * y) + surd_square(lambda);
  return surd_mul_rat(lambda, BigRational(y - x) / den);
}

}  // namespace

TEST(Validity, AdditionCondition) {
  const Surd one(q(1));
  EXPECT_EQ(addition_validity(2, 3, one), Validity::Ok);
  EXPECT_EQ(addition_validity(-2, -3, one), Validity::Ok);
  EXPECT_EQ(addition_validity(-2, 3, one), Validity::Ok);                    // 1 < 6
  EXPECT_EQ(addition_validity(-2, 3, surd_make(q(1), 6)), Validity::ViolatesCondition);  // 6 = 6
  EXPECT_EQ(addition_validity(-2, 3, surd_make(q(1), 7)), Validity::ViolatesCondition);
  EXPECT_EQ(addition_validity(-2, 3, Surd(q(0))), Validity::Ok);
  EXPECT_EQ(addition_validity(0, 3, one), Validity::Ok);
  EXPECT_EQ(addition_validity(0, -3, one), Validity::ViolatesCondition);
  EXPECT_EQ(addition_validity(3, 0, one), Validity::Ok);
  EXPECT_EQ(addition_validity(-3, 0, one), Validity::ViolatesCondition);
  EXPECT_EQ(addition_validity(0, 0, one), Validity::Ok);
}

TEST(TermRaw, Examples) {
  const SeriesSpec s = make_lemma_spec(SeqFamily::fibonacci(), 2, 1, 1, Surd(q(1)));
  const TermValue t1 = term_raw(s, 1);
  EXPECT_EQ(t1.argument, Surd(q(1, 3)));
  EXPECT_EQ(t1.validity, Validity::Ok);
  EXPECT_EQ(term_raw(s, 2).argument, Surd(q(3, 11)));
  const SeriesSpec zero = make_lemma_spec(SeqFamily::lucas(), 3, 2, 1, Surd(q(0)));
  const TermValue t0 = term_raw(zero, 5);
  EXPECT_TRUE(t0.argument.is_zero());
  EXPECT_EQ(t0.enclosure, FixedInterval::zero(128));
}

TEST(TermRaw, MatchesRecurrenceOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> seed(-9, 9), mm(-5, 5), nn(-10, 10), rr(-6, 12), lam(1, 12);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const long g0 = seed(rng), g1 = seed(rng), m = mm(rng), n = nn(rng), r = rr(rng);
    if (m == 0) continue;
    const Surd lambda = surd_make(q(lam(rng), lam(rng)), lam(rng));
    const SeriesSpec spec = make_lemma_spec(SeqFamily::general(g0, g1), m, n, 1, lambda);
    const mpz_class x = oracle::recurrence(g0, g1, m * r + n - m), y = oracle::recurrence(g0, g1, m * r + n);
    if (BigRational(x * y) + surd_square(lambda) == 0) {
      EXPECT_THROW(raw_argument(spec, r), TermUndefinedError);
      continue;
    }
    ASSERT_EQ(raw_argument(spec, r), oracle_raw(g0, g1, m, n, lambda, r));
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(TermRaw, UndefinedWhenDenominatorVanishes) {
  // F_{-1} F_{-2} = -1, so with lambda = 1 the r = 0 term of (m=1, n=-1) has 0 denominator.
  const SeriesSpec s = make_lemma_spec(SeqFamily::fibonacci(), 1, -1, 0, Surd(q(1)));
  EXPECT_THROW(raw_argument(s, 0), TermUndefinedError);
  EXPECT_THROW(term_raw(s, 0), TermUndefinedError);
}

TEST(TermSimplified, Examples) {
  const SeriesSpec t2 = make_theorem_spec(SummandForm::Thm2, 1, 1, 1, Surd(q(1)));
  EXPECT_EQ(term_simplified(t2, 1).argument, Surd(q(1, 2)));
  const SeriesSpec t1 = make_theorem_spec(SummandForm::Thm1, 1, 0, 1, Surd(q(1)));
  EXPECT_EQ(term_simplified(t1, 1).argument, Surd(q(7, 9)));
  const SeriesSpec t3 = make_theorem_spec(SummandForm::Thm3, 1, 0, 1, surd_make(q(1), 7));
  EXPECT_EQ(term_simplified(t3, 1).argument, surd_make(q(5, 9), 7));
  EXPECT_EQ(term(t3, 1).argument, term_simplified(t3, 1).argument);
}

TEST(TheoremSpec, SubstitutionAndConstraints) {
  const SeriesSpec t1 = make_theorem_spec(SummandForm::Thm1, 2, 3, 1, Surd(q(1)));
  EXPECT_EQ(t1.m, 8);
  EXPECT_EQ(t1.n, 10);
  EXPECT_EQ(t1.family.kind, SeqFamily::Kind::Fibonacci);
  const SeriesSpec t4 = make_theorem_spec(SummandForm::Thm4, 0, 0, 1, surd_make(q(1), 3));
  EXPECT_EQ(t4.m, -2);
  EXPECT_EQ(t4.n, -1);
  EXPECT_EQ(t4.family.kind, SeqFamily::Kind::Lucas);
  EXPECT_THROW(make_theorem_spec(SummandForm::Thm1, 0, 1, 1, Surd(q(1))), ConstraintError);
  EXPECT_THROW(make_theorem_spec(SummandForm::Thm3, 0, 1, 1, Surd(q(1))), ConstraintError);
  EXPECT_THROW(validate_spec(make_lemma_spec(SeqFamily::fibonacci(), 0, 1, 1, Surd(q(1)))), ConstraintError);
  SeriesSpec tampered = t1;
  tampered.n += 1;
  EXPECT_THROW(validate_spec(tampered), ConstraintError);
}

TEST(Remainder, Examples) {
  const FixedInterval r = remainder_exact(lehmer(), 5, 128);
  EXPECT_TRUE(overlaps(r, iv_arctan(iv_from_rational(q(1, 89), 140), 128)));
  const SeriesSpec l = make_lemma_spec(SeqFamily::lucas(), 2, 0, 1, surd_make(q(1), 3));
  EXPECT_EQ(remainder_exact(l, 3, 128), iv_arctan_surd(surd_make(q(1, 18), 3), 128));
  EXPECT_THROW(remainder_exact(lehmer(), 0, 128), DomainError);
  for (SeqIndex N = 1; N < 30; ++N) {
    EXPECT_LT(remainder_exact(lehmer(), N + 1, 128).hi, remainder_exact(lehmer(), N, 128).lo);
  }
}

TEST(TermCount, Examples) {
  const SeqIndex n20 = choose_term_count(lehmer(), tol_pow2(-20));
  EXPECT_GE(n20, 14);
  EXPECT_LE(n20, 16);
  // smallest: the remainder at n20 is below tol, at n20 - 1 it is not
  EXPECT_LT(remainder_exact(lehmer(), n20, 148).hi, iv_pow2(-20, 148).lo);
  EXPECT_GE(remainder_exact(lehmer(), n20 - 1, 148).hi, iv_pow2(-20, 148).lo);

  const FixedInterval half_pi_tol{iv_pi(128).lo / 2, iv_pi(128).lo / 2, 128};
  EXPECT_EQ(choose_term_count(lehmer(), half_pi_tol), 1);

  const SeriesSpec t1 = make_theorem_spec(SummandForm::Thm1, 1, 0, 1, Surd(q(1)));
  const SeqIndex n100 = choose_term_count(t1, tol_pow2(-100));
  EXPECT_GE(n100, 35);
  EXPECT_LE(n100, 38);
}

TEST(TermCount, Errors) {
  const SeriesSpec zero = make_lemma_spec(SeqFamily::general(0, 0), 1, 0, 1, Surd(q(1)));
  EXPECT_THROW(choose_term_count(zero, tol_pow2(-10)), NoConvergenceError);
  EXPECT_THROW(choose_term_count(lehmer(), FixedInterval::zero(64)), DomainError);
  // negative m walks G toward negative indices, where |G| also grows
  const SeriesSpec back = make_lemma_spec(SeqFamily::lucas(), -3, 2, 1, Surd(q(2)));
  EXPECT_GT(choose_term_count(back, tol_pow2(-60)), 1);
}

TEST(Sum, Examples) {
  const SumReport s = sum_series(lehmer(), 128, tol_pow2(-100));
  EXPECT_TRUE(s.consistent());
  EXPECT_TRUE(overlaps(s.total, iv_arctan(iv_from_rational(q(1), 128), 128)));

  const SeriesSpec t1 = make_theorem_spec(SummandForm::Thm1, 1, 0, 1, Surd(q(1)));
  const SumReport a = sum_series(t1, 128, tol_pow2(-100));
  EXPECT_TRUE(a.consistent());
  const FixedInterval pi = iv_pi(128);
  EXPECT_TRUE(overlaps(a.total, FixedInterval{pi.lo >> 2, (pi.hi >> 2) + 1, 128}));

  // shifting p by one drops the first term
  SeriesSpec shifted = t1;
  shifted.p = 2;
  const SumReport b = sum_to(shifted, a.last, 128);
  const FixedInterval expected = a.total - term(t1, 1, 128).enclosure;
  EXPECT_TRUE(overlaps(b.total, expected));
  EXPECT_LE(hausdorff_ulps(b.total, expected), 3 * (a.total.width() + b.total.width() + 1));
}

TEST(Sum, ThreadCountDoesNotChangeResult) {
  const SeriesSpec t3 = make_theorem_spec(SummandForm::Thm3, 2, 1, 1, Surd(q(3)));
  const SumReport one = sum_to(t3, 60, 256, 1);
  const SumReport four = sum_to(t3, 60, 256, 4);
  EXPECT_EQ(one.partial, four.partial);
  EXPECT_EQ(one.total, four.total);
  EXPECT_EQ(one.validity, four.validity);
}

TEST(Sum, FiniteFormOnRandomSpecs) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> seed(-20, 20), mm(-6, 6), nn(-15, 15), pp(-5, 5), lam(1, 30), extra(3, 25);
  int done = 0;
  for (int attempt = 0; done < 40 && attempt < 2000; ++attempt) {
    const long m = mm(rng);
    if (m == 0) continue;
    const long g0 = seed(rng), g1 = seed(rng);
    if (g0 == 0 && g1 == 0) continue;
    const SeriesSpec spec =
        make_lemma_spec(SeqFamily::general(g0, g1), m, nn(rng), pp(rng), surd_make(q(lam(rng), lam(rng)), lam(rng)));
    const SeqIndex N = spec.p + extra(rng);
    SumReport s;
    try {
      s = sum_to(spec, N, 128);
    } catch (const TermUndefinedError&) {
      continue;
    }
    if (!s.all_valid) continue;
    EXPECT_TRUE(s.overlap) << spec.describe();
    EXPECT_TRUE(s.within_budget) << spec.describe();
    ++done;
  }
  EXPECT_EQ(done, 40);
}

TEST(Sum, InvalidTermsShiftByMultiplesOfPi) {
  // When the addition condition fails the finite sum and closed form differ by k pi.
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> seed(-20, 20), mm(-4, 4), nn(-8, 8), lam(1, 40);
  const FixedInterval pi = iv_pi(128);
  int seen = 0;
  for (int attempt = 0; seen < 10 && attempt < 5000; ++attempt) {
    const long m = mm(rng);
    const long g0 = seed(rng), g1 = seed(rng);
    if (m == 0 || (g0 == 0 && g1 == 0)) continue;
    const SeriesSpec spec = make_lemma_spec(SeqFamily::general(g0, g1), m, nn(rng), -2, Surd(q(lam(rng))));
    SumReport s;
    try {
      s = sum_to(spec, 6, 128);
    } catch (const TermUndefinedError&) {
      continue;
    }
    if (s.all_valid) continue;
    const FixedInterval diff = s.total - s.closed;
    bool multiple = false;
    for (long k = -10; k <= 10 && !multiple; ++k) {
      const FixedInterval kpi = mul_int(pi, k);
      multiple = overlaps(diff, kpi) && hausdorff_ulps(diff, kpi) <= 4096;
    }
    EXPECT_TRUE(multiple) << spec.describe();
    ++seen;
  }
  EXPECT_EQ(seen, 10);
}

TEST(Equivalence, Examples) {
  const auto r1 = validate_term_equivalence(make_theorem_spec(SummandForm::Thm1, 1, 0, 1, Surd(q(1))), 1, 40);
  EXPECT_TRUE(r1.ok());
  EXPECT_EQ(r1.checked, 40);
  const auto r4 = validate_term_equivalence(make_theorem_spec(SummandForm::Thm4, 0, 0, 1, surd_make(q(1), 3)), 1, 40);
  EXPECT_TRUE(r4.ok());
  const auto r2 = validate_term_equivalence(make_theorem_spec(SummandForm::Thm2, 1, 0, 1, Surd(q(1))), 1, 40);
  EXPECT_TRUE(r2.ok());
}

TEST(Equivalence, RawSpecHasNoSimplifiedForm) {
  const auto raw = make_lemma_spec(SeqFamily::fibonacci(), 4, 2, 1, Surd(q(1)));
  EXPECT_THROW(validate_term_equivalence(raw, 1, 5), ConstraintError);
}

TEST(Equivalence, AllTheoremsOnSmallGrid) {
  const Surd lambdas[] = {Surd(q(1)), Surd(q(-3, 2)), surd_make(q(1), 5), surd_make(q(2, 7), 11)};
  for (auto form : {SummandForm::Thm1, SummandForm::Thm2, SummandForm::Thm3, SummandForm::Thm4}) {
    for (SeqIndex j = -2; j <= 2; ++j) {
      if (j == 0 && (form == SummandForm::Thm1 || form == SummandForm::Thm3)) continue;
      for (SeqIndex k = -2; k <= 2; ++k) {
        for (const Surd& lambda : lambdas) {
          const auto rep = validate_term_equivalence(make_theorem_spec(form, j, k, 1, lambda), -3, 10);
          EXPECT_TRUE(rep.ok()) << to_string(form) << " j=" << j << " k=" << k << " lambda=" << lambda.to_string();
        }
      }
    }
  }
}

TEST(Describe, Names) {
  EXPECT_EQ(to_string(SummandForm::RawLemma), "raw");
  EXPECT_EQ(to_string(SummandForm::Thm3), "thm3");
  EXPECT_FALSE(lehmer().describe().empty());
}
