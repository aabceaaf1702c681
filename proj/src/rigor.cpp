#include "arctelescope/rigor.hpp"

#include "arctelescope/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace arctelescope {

namespace {

BigInt shl(const BigInt& x, unsigned bits) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), bits);
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt floor_shr(const BigInt& a, unsigned bits) {
  BigInt r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), bits);
  return r;
}

BigInt ceil_shr(const BigInt& a, unsigned bits) {
  BigInt r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), bits);
  return r;
}

BigInt isqrt(const BigInt& a) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

void require_same_scale(const FixedInterval& a, const FixedInterval& b) {
  if (a.frac_bits != b.frac_bits) throw std::invalid_argument("interval scales differ");
}

// Guard bits for internal evaluation. The series below loses at most ~4 ulps per
// term over <= W/2 terms, so bit_width(B) + 32 extra bits keep all of it below 2^-B.
unsigned working_bits(unsigned B) { return B + 32 + static_cast<unsigned>(std::bit_width(B)); }

struct SeriesValue {
  BigInt value;
  BigInt err;  // |value - atan(t) 2^W| < err
};

// Alternating Taylor series of atan(t), t = a 2^-W with 0 <= t <= 1/2.
// Powers are carried with floor rounding; each lags the true power by < 3 ulps,
// each divided term by < 4 ulps, and the tail after the last nonzero power by < 3 ulps.
SeriesValue atan_taylor(const BigInt& a, unsigned W) {
  SeriesValue out{0, 0};
  const BigInt square = floor_shr(a * a, W);
  BigInt power = a;
  unsigned long k = 0;
  BigInt term;
  while (power != 0) {
    mpz_tdiv_q_ui(term.get_mpz_t(), power.get_mpz_t(), 2 * k + 1);
    if (k % 2 == 0) {
      out.value += term;
    } else {
      out.value -= term;
    }
    power = floor_shr(power * square, W);
    ++k;
  }
  out.err = BigInt(4) * k + 8;
  return out;
}

// atan(num/den) at W bits for 0 <= num <= den.
FixedInterval atan_unit(const BigInt& num, const BigInt& den, unsigned W) {
  if (num == 0) return FixedInterval::zero(W);
  if (2 * num <= den) {
    const BigInt scaled = shl(num, W);
    const SeriesValue lo = atan_taylor(floor_div(scaled, den), W);
    const SeriesValue hi = atan_taylor(ceil_div(scaled, den), W);
    return {lo.value - lo.err, hi.value + hi.err, W};
  }
  // Halving: atan(q) = 2 atan(q / (1 + sqrt(1 + q^2))), and the reduced argument
  // is increasing in q, so rounding it down/up bounds atan from below/above.
  const BigInt target = shl(num * num + den * den, 2 * W);
  const BigInt root_lo = isqrt(target);
  const BigInt root_hi = root_lo * root_lo == target ? root_lo : root_lo + 1;
  const BigInt base = shl(den, W);
  const BigInt scaled = shl(num, 2 * W);
  const SeriesValue lo = atan_taylor(floor_div(scaled, base + root_hi), W);
  const SeriesValue hi = atan_taylor(ceil_div(scaled, base + root_lo), W);
  return {2 * (lo.value - lo.err), 2 * (hi.value + hi.err), W};
}

FixedInterval machin_pi(unsigned W) {
  static std::mutex mutex;
  static std::map<unsigned, FixedInterval> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(W); it != cache.end()) return it->second;
  }
  const FixedInterval a = atan_unit(1, 5, W);
  const FixedInterval b = atan_unit(1, 239, W);
  FixedInterval pi{16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo, W};
  std::lock_guard lock(mutex);
  cache.emplace(W, pi);
  return pi;
}

FixedInterval half_pi(unsigned W) {
  const FixedInterval pi = machin_pi(W);
  return {floor_shr(pi.lo, 1), ceil_shr(pi.hi, 1), W};
}

// atan(num/den) at W bits, den > 0, any sign of num.
FixedInterval atan_rational(const BigInt& num, const BigInt& den, unsigned W) {
  if (num < 0) return -atan_rational(-num, den, W);
  if (num <= den) return atan_unit(num, den, W);
  return half_pi(W) - atan_unit(den, num, W);
}

// atan(q sqrt d) for q > 0, d > 1, q^2 d <= 1.
FixedInterval atan_surd_unit(const BigRational& q, const BigInt& d, unsigned W) {
  const unsigned W2 = W + 4;
  const FixedInterval root = iv_sqrt_nat(d, W2);
  const BigInt one = shl(BigInt(1), W2);
  BigInt x_lo = floor_div(q.get_num() * root.lo, q.get_den());
  BigInt x_hi = ceil_div(q.get_num() * root.hi, q.get_den());
  if (x_hi > one) x_hi = one;
  const FixedInterval lo = atan_unit(x_lo, one, W);
  const FixedInterval hi = atan_unit(x_hi, one, W);
  return {lo.lo, hi.hi, W};
}

FixedInterval atan_surd(const Surd& x, unsigned W) {
  if (x.is_zero()) return FixedInterval::zero(W);
  if (x.is_rational()) return atan_rational(x.coeff().get_num(), x.coeff().get_den(), W);
  if (x.sign() < 0) return -atan_surd(surd_neg(x), W);
  if (surd_square(x) <= 1) return atan_surd_unit(x.coeff(), x.radicand(), W);
  // atan(x) = pi/2 - atan(1/x) with 1/(q sqrt d) = sqrt(d) / (q d).
  const BigRational inv = 1 / (x.coeff() * BigRational(x.radicand()));
  return half_pi(W) - atan_surd_unit(inv, x.radicand(), W);
}

}  // namespace

bool FixedInterval::contains(const BigRational& q) const {
  // lo 2^-B <= num/den <= hi 2^-B  <=>  lo den <= num 2^B <= hi den
  const BigInt scaled = shl(q.get_num(), frac_bits);
  return lo * q.get_den() <= scaled && scaled <= hi * q.get_den();
}

bool FixedInterval::encloses(const FixedInterval& other) const {
  const unsigned f = std::max(frac_bits, other.frac_bits);
  const FixedInterval a = round_outward(*this, f);
  const FixedInterval b = round_outward(other, f);
  return a.lo <= b.lo && b.hi <= a.hi;
}

FixedInterval operator-(const FixedInterval& x) { return {-x.hi, -x.lo, x.frac_bits}; }

FixedInterval operator+(const FixedInterval& a, const FixedInterval& b) {
  require_same_scale(a, b);
  return {a.lo + b.lo, a.hi + b.hi, a.frac_bits};
}

FixedInterval operator-(const FixedInterval& a, const FixedInterval& b) {
  require_same_scale(a, b);
  return {a.lo - b.hi, a.hi - b.lo, a.frac_bits};
}

FixedInterval mul(const FixedInterval& a, const FixedInterval& b, unsigned B) {
  const BigInt products[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  BigInt lo = products[0];
  BigInt hi = products[0];
  for (const BigInt& p : products) {
    if (p < lo) lo = p;
    if (p > hi) hi = p;
  }
  return round_outward({lo, hi, a.frac_bits + b.frac_bits}, B);
}

FixedInterval mul_int(const FixedInterval& a, const BigInt& k) {
  if (k >= 0) return {a.lo * k, a.hi * k, a.frac_bits};
  return {a.hi * k, a.lo * k, a.frac_bits};
}

FixedInterval abs(const FixedInterval& x) {
  if (x.lo >= 0) return x;
  if (x.hi <= 0) return -x;
  BigInt m = -x.lo > x.hi ? BigInt(-x.lo) : x.hi;
  return {0, m, x.frac_bits};
}

FixedInterval hull(const FixedInterval& a, const FixedInterval& b) {
  require_same_scale(a, b);
  return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi, a.frac_bits};
}

FixedInterval round_outward(const FixedInterval& x, unsigned B) {
  if (B >= x.frac_bits) return {shl(x.lo, B - x.frac_bits), shl(x.hi, B - x.frac_bits), B};
  const unsigned drop = x.frac_bits - B;
  return {floor_shr(x.lo, drop), ceil_shr(x.hi, drop), B};
}

bool overlaps(const FixedInterval& a, const FixedInterval& b) {
  const unsigned f = std::max(a.frac_bits, b.frac_bits);
  const FixedInterval x = round_outward(a, f);
  const FixedInterval y = round_outward(b, f);
  return x.lo <= y.hi && y.lo <= x.hi;
}

BigInt hausdorff_ulps(const FixedInterval& a, const FixedInterval& b) {
  require_same_scale(a, b);
  BigInt d_lo = a.lo - b.lo;
  BigInt d_hi = a.hi - b.hi;
  if (d_lo < 0) d_lo = -d_lo;
  if (d_hi < 0) d_hi = -d_hi;
  return d_lo > d_hi ? d_lo : d_hi;
}

bool ulps_below_pow2(const BigInt& ulps, unsigned frac_bits, long exponent) {
  const long shift = static_cast<long>(frac_bits) + exponent;
  if (shift < 0) return ulps <= 0;
  return ulps < shl(BigInt(1), static_cast<unsigned>(shift));
}

FixedInterval iv_from_rational(const BigRational& q, unsigned B) {
  if (B < 8) throw DomainError("iv_from_rational requires at least 8 fractional bits");
  const BigInt scaled = shl(q.get_num(), B);
  return {floor_div(scaled, q.get_den()), ceil_div(scaled, q.get_den()), B};
}

FixedInterval iv_pow2(long exponent, unsigned B) {
  const long shift = static_cast<long>(B) + exponent;
  if (shift < 0) throw DomainError("2^" + std::to_string(exponent) + " is not representable at " + std::to_string(B) + " bits");
  return FixedInterval::point(shl(BigInt(1), static_cast<unsigned>(shift)), B);
}

FixedInterval iv_sqrt_nat(const BigInt& d, unsigned B) {
  if (d < 0) throw DomainError("square root of a negative integer");
  const BigInt target = shl(d, 2 * B);
  const BigInt root = isqrt(target);
  return {root, root * root == target ? root : root + 1, B};
}

FixedInterval iv_pi(unsigned B) {
  if (B < 8) throw DomainError("iv_pi requires at least 8 fractional bits");
  return round_outward(machin_pi(working_bits(B)), B);
}

FixedInterval iv_arctan(const FixedInterval& x, unsigned B) {
  const unsigned W = working_bits(B);
  const BigInt den = shl(BigInt(1), x.frac_bits);
  const FixedInterval lo = atan_rational(x.lo, den, W);
  const FixedInterval hi = x.is_point() ? lo : atan_rational(x.hi, den, W);
  return round_outward({lo.lo, hi.hi, W}, B);
}

FixedInterval iv_arctan_surd(const Surd& x, unsigned B) {
  return round_outward(atan_surd(x, working_bits(B)), B);
}

FixedInterval iv_arctan_surd_ratio(const Surd& num, const BigInt& den, unsigned B) {
  if (den == 0) {
    if (num.is_zero()) throw DomainError("arctan(0/0) is undefined");
    const FixedInterval quarter_turn = round_outward(half_pi(working_bits(B)), B);
    return num.sign() > 0 ? quarter_turn : -quarter_turn;
  }
  return iv_arctan_surd(surd_mul_rat(num, make_rational(1, den)), B);
}

FixedInterval iv_golden_ratio_power(SeqIndex k, unsigned B) {
  if (k == 0) return iv_pow2(0, B);
  const SeqIndex n = k < 0 ? -k : k;
  const BigInt f = fib(n);
  const BigInt l = lucas(n);
  const unsigned W = working_bits(B) + static_cast<unsigned>(mpz_sizeinbase(f.get_mpz_t(), 2));
  const FixedInterval root5 = iv_sqrt_nat(5, W);
  const BigInt whole = shl(l, W);
  FixedInterval power{floor_shr(whole + f * root5.lo, 1), ceil_shr(whole + f * root5.hi, 1), W};
  if (k < 0) {
    const BigInt one_sq = shl(BigInt(1), 2 * W);
    power = {floor_div(one_sq, power.hi), ceil_div(one_sq, power.lo), W};
  }
  return round_outward(power, B);
}

std::string to_decimal(const BigInt& scaled, unsigned frac_bits, unsigned digits, Rounding dir) {
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
  const BigInt numer = scaled * ten_pow;
  const BigInt value = dir == Rounding::Down ? floor_shr(numer, frac_bits) : ceil_shr(numer, frac_bits);
  const bool negative = value < 0;
  const BigInt mag = negative ? BigInt(-value) : value;
  std::string s = mag.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = negative ? "-" : "";
  out += s.substr(0, s.size() - digits);
  if (digits > 0) {
    out += '.';
    out += s.substr(s.size() - digits);
  }
  return out;
}

unsigned decimal_digits_for_bits(unsigned B) { return static_cast<unsigned>((B * 30103UL) / 100000UL) + 1; }

double approx_midpoint(const FixedInterval& x) {
  mpq_class mid(x.lo + x.hi, shl(BigInt(1), x.frac_bits + 1));
  mid.canonicalize();
  return mid.get_d();
}

}  // namespace arctelescope
