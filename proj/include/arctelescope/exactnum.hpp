#pragma once

#include "arctelescope/seq_core.hpp"

#include <compare>
#include <string>

namespace arctelescope {

/// Canonical rational: positive denominator, reduced. Every mpq_class arithmetic
/// result is canonical already; make_rational canonicalizes raw pairs.
using BigRational = mpq_class;

BigRational make_rational(const BigInt& num, const BigInt& den);
std::string to_string(const BigRational& q);

/// The number coeff * sqrt(radicand), radicand >= 1 with square factors moved into coeff.
/// A zero surd always has radicand 1.
class Surd {
 public:
  Surd() : coeff_(0), radicand_(1) {}
  /* implicit */ Surd(const BigRational& q) : coeff_(q), radicand_(1) {}

  const BigRational& coeff() const { return coeff_; }
  const BigInt& radicand() const { return radicand_; }

  int sign() const { return sgn(coeff_); }
  bool is_zero() const { return sgn(coeff_) == 0; }
  bool is_rational() const { return radicand_ == 1; }

  friend bool operator==(const Surd& a, const Surd& b) {
    return a.coeff_ == b.coeff_ && a.radicand_ == b.radicand_;
  }

  std::string to_string() const;

 private:
  friend Surd surd_make(const BigRational&, const BigInt&);
  friend Surd surd_mul_rat(const Surd&, const BigRational&);

  BigRational coeff_;
  BigInt radicand_;
};

/// c * sqrt(d), normalized. Throws DomainError when d <= 0.
Surd surd_make(const BigRational& c, const BigInt& d);
/// coeff^2 * radicand.
BigRational surd_square(const Surd& s);
Surd surd_mul_rat(const Surd& s, const BigRational& q);
Surd surd_neg(const Surd& s);
/// Exact three-way comparison; no floating point involved.
std::strong_ordering surd_cmp(const Surd& a, const Surd& b);

/// Largest k with k^2 dividing d among trial divisors <= 10^6; the cofactor
/// d / k^2 is additionally checked for being a perfect square.
struct SquareSplit {
  BigInt outside;  // k
  BigInt inside;   // d / k^2
};
SquareSplit extract_square_factors(const BigInt& d);

}  // namespace arctelescope
