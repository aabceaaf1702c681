#include "arctelescope/seq_core.hpp"

#include "arctelescope/errors.hpp"

#include <bit>
#include <utility>

namespace arctelescope {

namespace {

// (F_n, L_n) for n >= 0. Doubling uses F_2k = F_k L_k and L_2k = L_k^2 - 2(-1)^k;
// the odd step uses F_{k+1} = (F_k + L_k)/2 and L_{k+1} = (5F_k + L_k)/2.
std::pair<BigInt, BigInt> fib_lucas_nonneg(std::uint64_t n) {
  BigInt f = 0;
  BigInt l = 2;
  bool odd = false;
  for (int bit = std::bit_width(n) - 1; bit >= 0; --bit) {
    BigInt f2 = f * l;
    BigInt l2 = l * l;
    l2 += odd ? 2 : -2;
    f = std::move(f2);
    l = std::move(l2);
    odd = false;
    if ((n >> bit) & 1U) {
      BigInt fn = f + l;
      BigInt ln = 5 * f + l;
      mpz_divexact_ui(fn.get_mpz_t(), fn.get_mpz_t(), 2);
      mpz_divexact_ui(ln.get_mpz_t(), ln.get_mpz_t(), 2);
      f = std::move(fn);
      l = std::move(ln);
      odd = true;
    }
  }
  return {std::move(f), std::move(l)};
}

std::uint64_t magnitude(SeqIndex n) {
  return n < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
}

}  // namespace

char SeqFamily::symbol() const {
  switch (kind) {
    case Kind::Fibonacci: return 'F';
    case Kind::Lucas: return 'L';
    case Kind::General: return 'G';
  }
  return 'G';
}

std::string SeqFamily::describe() const {
  switch (kind) {
    case Kind::Fibonacci: return "F";
    case Kind::Lucas: return "L";
    case Kind::General: return "G(" + g0.get_str() + "," + g1.get_str() + ")";
  }
  return "G";
}

BigInt fib(SeqIndex n) {
  auto [f, l] = fib_lucas_nonneg(magnitude(n));
  // F_{-n} = (-1)^{n+1} F_n
  if (n < 0 && magnitude(n) % 2 == 0) f = -f;
  return f;
}

BigInt lucas(SeqIndex n) {
  auto [f, l] = fib_lucas_nonneg(magnitude(n));
  // L_{-n} = (-1)^n L_n
  if (n < 0 && magnitude(n) % 2 == 1) l = -l;
  return l;
}

BigInt gen_fib(const SeqFamily& family, SeqIndex n) {
  switch (family.kind) {
    case SeqFamily::Kind::Fibonacci: return fib(n);
    case SeqFamily::Kind::Lucas: return lucas(n);
    case SeqFamily::Kind::General: break;
  }
  return family.g0 * fib(n - 1) + family.g1 * fib(n);
}

ProductIdentity parse_product_identity(std::string_view id) {
  if (id == "2a") return ProductIdentity::A;
  if (id == "2b") return ProductIdentity::B;
  if (id == "2c") return ProductIdentity::C;
  if (id == "2d") return ProductIdentity::D;
  if (id == "2e") return ProductIdentity::E;
  if (id == "2f") return ProductIdentity::F;
  throw UsageError("unknown product identity '" + std::string(id) + "' (expected 2a..2f)");
}

ConnectingIdentity parse_connecting_identity(std::string_view id) {
  if (id == "3a") return ConnectingIdentity::A;
  if (id == "3b") return ConnectingIdentity::B;
  if (id == "3c") return ConnectingIdentity::C;
  if (id == "3d") return ConnectingIdentity::D;
  throw UsageError("unknown connecting identity '" + std::string(id) + "' (expected 3a..3d)");
}

ExactCheckResult check_product_identity(ProductIdentity id, SeqIndex u, SeqIndex v) {
  ExactCheckResult out;
  const int s_uv = neg_one_pow(u - v);
  const int s_u = neg_one_pow(u);
  switch (id) {
    case ProductIdentity::A:  // F_{u-v} F_{u+v} = F_u^2 - (-1)^{u-v} F_v^2
      out.lhs = fib(u - v) * fib(u + v);
      out.rhs = fib(u) * fib(u) - s_uv * (fib(v) * fib(v));
      break;
    case ProductIdentity::B:  // L_{u-v} L_{u+v} = L_2u + (-1)^{u-v} L_2v
      out.lhs = lucas(u - v) * lucas(u + v);
      out.rhs = lucas(2 * u) + s_uv * lucas(2 * v);
      break;
    case ProductIdentity::C:  // L_u F_v = F_{v+u} + (-1)^u F_{v-u}
      out.lhs = lucas(u) * fib(v);
      out.rhs = fib(v + u) + s_u * fib(v - u);
      break;
    case ProductIdentity::D:  // F_u L_v = F_{v+u} - (-1)^u F_{v-u}
      out.lhs = fib(u) * lucas(v);
      out.rhs = fib(v + u) - s_u * fib(v - u);
      break;
    case ProductIdentity::E:  // L_u L_v = L_{u+v} + (-1)^u L_{v-u}
      out.lhs = lucas(u) * lucas(v);
      out.rhs = lucas(u + v) + s_u * lucas(v - u);
      break;
    case ProductIdentity::F:  // 5 F_{u-v} F_{u+v} = L_2u - (-1)^{u-v} L_2v
      out.lhs = 5 * fib(u - v) * fib(u + v);
      out.rhs = lucas(2 * u) - s_uv * lucas(2 * v);
      break;
  }
  out.pass = out.lhs == out.rhs;
  return out;
}

ExactCheckResult check_product_identity(std::string_view id, SeqIndex u, SeqIndex v) {
  return check_product_identity(parse_product_identity(id), u, v);
}

ExactCheckResult check_connecting_identity(ConnectingIdentity id, SeqIndex u) {
  ExactCheckResult out;
  const int s_u = neg_one_pow(u);
  switch (id) {
    case ConnectingIdentity::A:  // F_2u = F_u L_u
      out.lhs = fib(2 * u);
      out.rhs = fib(u) * lucas(u);
      break;
    case ConnectingIdentity::B:  // L_2u - 2(-1)^u = 5 F_u^2
      out.lhs = lucas(2 * u) - 2 * s_u;
      out.rhs = 5 * fib(u) * fib(u);
      break;
    case ConnectingIdentity::C:  // 5 F_u^2 - L_u^2 = 4 (-1)^{u+1}
      out.lhs = 5 * fib(u) * fib(u) - lucas(u) * lucas(u);
      out.rhs = 4 * neg_one_pow(u + 1);
      break;
    case ConnectingIdentity::D:  // L_2u + 2(-1)^u = L_u^2
      out.lhs = lucas(2 * u) + 2 * s_u;
      out.rhs = lucas(u) * lucas(u);
      break;
  }
  out.pass = out.lhs == out.rhs;
  return out;
}

ExactCheckResult check_connecting_identity(std::string_view id, SeqIndex u) {
  return check_connecting_identity(parse_connecting_identity(id), u);
}

}  // namespace arctelescope
