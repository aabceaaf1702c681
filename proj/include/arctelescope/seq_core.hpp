#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace arctelescope {

using BigInt = mpz_class;
using SeqIndex = std::int64_t;

/// (-1)^n for any integer n.
inline int neg_one_pow(SeqIndex n) { return (n % 2 == 0) ? 1 : -1; }

/// A sequence obeying G_i = G_{i-1} + G_{i-2}, fixed by its seeds G_0, G_1.
struct SeqFamily {
  enum class Kind { Fibonacci, Lucas, General };

  Kind kind = Kind::Fibonacci;
  BigInt g0 = 0;
  BigInt g1 = 1;

  static SeqFamily fibonacci() { return {Kind::Fibonacci, 0, 1}; }
  static SeqFamily lucas() { return {Kind::Lucas, 2, 1}; }
  static SeqFamily general(BigInt g0, BigInt g1) { return {Kind::General, std::move(g0), std::move(g1)}; }

  /// True when every term is zero (G_0 = G_1 = 0).
  bool is_zero() const { return g0 == 0 && g1 == 0; }
  char symbol() const;
  std::string describe() const;
};

/// F_n for any integer n, by fast doubling and reflection.
BigInt fib(SeqIndex n);
/// L_n for any integer n, by fast doubling and reflection.
BigInt lucas(SeqIndex n);
/// G_n = g0 * F_{n-1} + g1 * F_n.
BigInt gen_fib(const SeqFamily& family, SeqIndex n);

struct ExactCheckResult {
  BigInt lhs;
  BigInt rhs;
  bool pass = false;
};

// Product identities, keyed as in the literature: 2a..2f.
enum class ProductIdentity { A, B, C, D, E, F };
// Connecting identities 3a..3d.
enum class ConnectingIdentity { A, B, C, D };

ProductIdentity parse_product_identity(std::string_view id);
ConnectingIdentity parse_connecting_identity(std::string_view id);

ExactCheckResult check_product_identity(ProductIdentity id, SeqIndex u, SeqIndex v);
ExactCheckResult check_product_identity(std::string_view id, SeqIndex u, SeqIndex v);
ExactCheckResult check_connecting_identity(ConnectingIdentity id, SeqIndex u);
ExactCheckResult check_connecting_identity(std::string_view id, SeqIndex u);

}  // namespace arctelescope
