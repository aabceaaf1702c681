#pragma once
// Independent reference computations used only by the tests.

#include "arctelescope/rigor.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <map>
#include <string>

namespace oracle {

/// G_n for seeds (g0, g1) by plain forward/backward recurrence.
inline mpz_class recurrence(const mpz_class& g0, const mpz_class& g1, long n) {
  mpz_class a = g0, b = g1;  // G_i, G_{i+1}
  if (n >= 0) {
    for (long i = 0; i < n; ++i) {
      mpz_class c = a + b;
      a = b;
      b = c;
    }
    return a;
  }
  for (long i = 0; i > n; --i) {  // G_{i-1} = G_{i+1} - G_i
    mpz_class prev = b - a;
    b = a;
    a = prev;
  }
  return a;
}

inline mpz_class F(long n) { return recurrence(0, 1, n); }
inline mpz_class L(long n) { return recurrence(2, 1, n); }

/// MPFR value with `prec` bits, freed on scope exit.
class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// True when [lo_value, hi_value] lies inside the interval.
inline bool interval_contains(const arctelescope::FixedInterval& iv, mpfr_srcptr lo_value, mpfr_srcptr hi_value) {
  Real t(mpfr_get_prec(lo_value) + 8);
  mpz_class lo_scaled, hi_scaled;
  mpfr_mul_2ui(t.get(), lo_value, iv.frac_bits, MPFR_RNDN);
  mpfr_get_z(lo_scaled.get_mpz_t(), t.get(), MPFR_RNDD);
  mpfr_mul_2ui(t.get(), hi_value, iv.frac_bits, MPFR_RNDN);
  mpfr_get_z(hi_scaled.get_mpz_t(), t.get(), MPFR_RNDU);
  return iv.lo <= lo_scaled && hi_scaled <= iv.hi;
}

/// Sets `out` to num/den with directed rounding.
inline void set_ratio(mpfr_ptr out, const mpz_class& num, const mpz_class& den, mpfr_rnd_t rnd) {
  mpq_class q(num, den);
  q.canonicalize();
  mpfr_set_q(out, q.get_mpq_t(), rnd);
}

}  // namespace oracle
