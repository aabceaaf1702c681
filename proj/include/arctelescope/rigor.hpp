#pragma once

#include "arctelescope/exactnum.hpp"

#include <string>

namespace arctelescope {

/// The closed interval [lo * 2^-frac_bits, hi * 2^-frac_bits]. Every operation
/// below returns an interval containing the exact image of its inputs.
struct FixedInterval {
  BigInt lo = 0;
  BigInt hi = 0;
  unsigned frac_bits = 0;

  static FixedInterval point(const BigInt& scaled, unsigned frac_bits) { return {scaled, scaled, frac_bits}; }
  static FixedInterval zero(unsigned frac_bits) { return {0, 0, frac_bits}; }

  BigInt width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
  bool contains(const BigRational& q) const;
  /// True when the other interval, of any scale, lies inside this one.
  bool encloses(const FixedInterval& other) const;

  friend bool operator==(const FixedInterval&, const FixedInterval&) = default;
};

FixedInterval operator-(const FixedInterval& x);
FixedInterval operator+(const FixedInterval& a, const FixedInterval& b);
FixedInterval operator-(const FixedInterval& a, const FixedInterval& b);
/// Product of two intervals, outward-rounded to B fractional bits.
FixedInterval mul(const FixedInterval& a, const FixedInterval& b, unsigned B);
FixedInterval mul_int(const FixedInterval& a, const BigInt& k);
FixedInterval abs(const FixedInterval& x);
FixedInterval hull(const FixedInterval& a, const FixedInterval& b);
/// Re-express at B fractional bits, rounding lo down and hi up.
FixedInterval round_outward(const FixedInterval& x, unsigned B);

bool overlaps(const FixedInterval& a, const FixedInterval& b);
/// Hausdorff distance max(|lo_a - lo_b|, |hi_a - hi_b|) in units of 2^-frac_bits
/// (both operands must share frac_bits).
BigInt hausdorff_ulps(const FixedInterval& a, const FixedInterval& b);
/// ulps * 2^-frac_bits < 2^exponent
bool ulps_below_pow2(const BigInt& ulps, unsigned frac_bits, long exponent);

/// Tightest enclosure of q at B fractional bits. Requires B >= 8.
FixedInterval iv_from_rational(const BigRational& q, unsigned B);
/// Point interval 2^exponent (B + exponent >= 0).
FixedInterval iv_pow2(long exponent, unsigned B);
/// Enclosure of sqrt(d), width <= 2^-B.
FixedInterval iv_sqrt_nat(const BigInt& d, unsigned B);
/// Enclosure of pi by Machin's formula 16 atan(1/5) - 4 atan(1/239); width <= 2^(2-B).
FixedInterval iv_pi(unsigned B);
/// Enclosure of the principal arctangent over x.
FixedInterval iv_arctan(const FixedInterval& x, unsigned B);
/// Enclosure of arctan(x) for an exact surd x.
FixedInterval iv_arctan_surd(const Surd& x, unsigned B);
/// arctan(num / den); den = 0 gives sign(num) * pi/2. Throws DomainError on 0/0.
FixedInterval iv_arctan_surd_ratio(const Surd& num, const BigInt& den, unsigned B);
/// Enclosure of phi^k, phi = (1 + sqrt 5) / 2, using phi^k = (L_k + F_k sqrt 5) / 2.
FixedInterval iv_golden_ratio_power(SeqIndex k, unsigned B);

enum class Rounding { Down, Up };
/// Decimal rendering of scaled * 2^-frac_bits with `digits` fractional digits,
/// rounded in the given direction (so [Down(lo), Up(hi)] still encloses).
std::string to_decimal(const BigInt& scaled, unsigned frac_bits, unsigned digits, Rounding dir);
/// Fractional decimal digits that resolve one unit at B bits.
unsigned decimal_digits_for_bits(unsigned B);
/// Nearest double to the midpoint; for diagnostics only.
double approx_midpoint(const FixedInterval& x);

}  // namespace arctelescope
