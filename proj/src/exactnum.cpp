#include "arctelescope/exactnum.hpp"

#include "arctelescope/errors.hpp"

#include <cstdint>
#include <vector>

namespace arctelescope {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

SquareSplit extract_square_factors(const BigInt& d) {
  SquareSplit out{1, d};
  if (d <= 1) return out;
  for (std::uint32_t p : small_primes()) {
    const unsigned long sq = static_cast<unsigned long>(p) * p;
    if (mpz_cmp_ui(out.inside.get_mpz_t(), sq) < 0) break;
    while (mpz_divisible_ui_p(out.inside.get_mpz_t(), sq) != 0) {
      mpz_divexact_ui(out.inside.get_mpz_t(), out.inside.get_mpz_t(), sq);
      out.outside *= p;
    }
  }
  if (out.inside > 1 && mpz_perfect_square_p(out.inside.get_mpz_t()) != 0) {
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), out.inside.get_mpz_t());
    out.outside *= root;
    out.inside = 1;
  }
  return out;
}

Surd surd_make(const BigRational& c, const BigInt& d) {
  if (d <= 0) throw DomainError("surd radicand must be a positive integer, got " + d.get_str());
  Surd s;
  if (sgn(c) == 0) return s;
  SquareSplit split = extract_square_factors(d);
  s.coeff_ = c * BigRational(split.outside);
  s.radicand_ = std::move(split.inside);
  return s;
}

BigRational surd_square(const Surd& s) { return s.coeff() * s.coeff() * BigRational(s.radicand()); }

Surd surd_mul_rat(const Surd& s, const BigRational& q) {
  Surd out;
  if (sgn(q) == 0 || s.is_zero()) return out;
  out.coeff_ = s.coeff() * q;
  out.radicand_ = s.radicand();
  return out;
}

Surd surd_neg(const Surd& s) { return surd_mul_rat(s, BigRational(-1)); }

std::strong_ordering surd_cmp(const Surd& a, const Surd& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  const int c = cmp(surd_square(a), surd_square(b));
  const int ordered = sa > 0 ? c : -c;
  return ordered <=> 0;
}

std::string Surd::to_string() const {
  if (radicand_ == 1) return arctelescope::to_string(coeff_);
  std::string root = "sqrt(" + radicand_.get_str() + ")";
  if (coeff_ == 1) return root;
  if (coeff_ == -1) return "-" + root;
  return arctelescope::to_string(coeff_) + "*" + root;
}

}  // namespace arctelescope
