#include "arctelescope/telescope.hpp"

#include "arctelescope/errors.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace arctelescope {

namespace {

bool is_theorem(SummandForm form) { return form != SummandForm::RawLemma; }

const TheoremParams& theorem_params(const SeriesSpec& spec) {
  if (!spec.params) throw ConstraintError("theorem form without (j, k) parameters");
  return *spec.params;
}

Surd combine(const Surd& lambda, const BigInt& numer, const BigRational& denom, SeqIndex r) {
  if (sgn(denom) == 0) {
    throw TermUndefinedError("summand denominator vanishes at r = " + std::to_string(r));
  }
  return surd_mul_rat(lambda, BigRational(numer) / denom);
}

TermValue make_term(const SeriesSpec& spec, SeqIndex r, Surd argument, unsigned B) {
  TermValue t;
  t.validity = term_validity(spec, r);
  t.enclosure = iv_arctan_surd(argument, B);
  t.argument = std::move(argument);
  return t;
}

bool remainder_below(const SeriesSpec& spec, SeqIndex N, const FixedInterval& tol, unsigned bits) {
  const FixedInterval rem = abs(remainder_exact(spec, N, bits));
  const FixedInterval t = round_outward(tol, bits);
  return rem.hi < t.lo;
}

}  // namespace

std::string_view to_string(SummandForm form) {
  switch (form) {
    case SummandForm::RawLemma: return "raw";
    case SummandForm::Thm1: return "thm1";
    case SummandForm::Thm2: return "thm2";
    case SummandForm::Thm3: return "thm3";
    case SummandForm::Thm4: return "thm4";
  }
  return "raw";
}

std::string SeriesSpec::describe() const {
  std::ostringstream os;
  os << to_string(form);
  if (params) os << "[j=" << params->j << ",k=" << params->k << "]";
  os << " G=" << family.describe() << " m=" << m << " n=" << n << " p=" << p << " lambda=" << lambda.to_string();
  return os.str();
}

SeriesSpec make_lemma_spec(SeqFamily family, SeqIndex m, SeqIndex n, SeqIndex p, Surd lambda) {
  SeriesSpec spec;
  spec.family = std::move(family);
  spec.m = m;
  spec.n = n;
  spec.p = p;
  spec.lambda = std::move(lambda);
  validate_spec(spec);
  return spec;
}

SeriesSpec make_theorem_spec(SummandForm form, SeqIndex j, SeqIndex k, SeqIndex p, Surd lambda) {
  SeriesSpec spec;
  spec.form = form;
  spec.params = TheoremParams{j, k};
  spec.p = p;
  spec.lambda = std::move(lambda);
  switch (form) {
    case SummandForm::Thm1:
      spec.family = SeqFamily::fibonacci();
      spec.m = 4 * j;
      spec.n = 2 * k + 2 * j;
      break;
    case SummandForm::Thm2:
      spec.family = SeqFamily::fibonacci();
      spec.m = 4 * j - 2;
      spec.n = 2 * k + 2 * j - 2;
      break;
    case SummandForm::Thm3:
      spec.family = SeqFamily::lucas();
      spec.m = 4 * j;
      spec.n = 2 * k + 2 * j - 1;
      break;
    case SummandForm::Thm4:
      spec.family = SeqFamily::lucas();
      spec.m = 4 * j - 2;
      spec.n = 2 * k + 2 * j - 1;
      break;
    case SummandForm::RawLemma:
      throw ConstraintError("make_theorem_spec needs a theorem form");
  }
  validate_spec(spec);
  return spec;
}

void validate_spec(const SeriesSpec& spec) {
  if (!is_theorem(spec.form)) {
    if (spec.m == 0) throw ConstraintError("m must be nonzero");
    return;
  }
  const auto [j, k] = theorem_params(spec);
  if ((spec.form == SummandForm::Thm1 || spec.form == SummandForm::Thm3) && j == 0) {
    throw ConstraintError(std::string(to_string(spec.form)) + " requires j != 0");
  }
  SeqIndex m = 0;
  SeqIndex n = 0;
  SeqFamily::Kind kind = SeqFamily::Kind::Fibonacci;
  switch (spec.form) {
    case SummandForm::Thm1: m = 4 * j; n = 2 * k + 2 * j; break;
    case SummandForm::Thm2: m = 4 * j - 2; n = 2 * k + 2 * j - 2; break;
    case SummandForm::Thm3: m = 4 * j; n = 2 * k + 2 * j - 1; kind = SeqFamily::Kind::Lucas; break;
    case SummandForm::Thm4: m = 4 * j - 2; n = 2 * k + 2 * j - 1; kind = SeqFamily::Kind::Lucas; break;
    case SummandForm::RawLemma: break;
  }
  if (spec.m != m || spec.n != n || spec.family.kind != kind) {
    throw ConstraintError(std::string(to_string(spec.form)) + " forces m=" + std::to_string(m) + " n=" +
                          std::to_string(n) + ", spec has m=" + std::to_string(spec.m) + " n=" + std::to_string(spec.n));
  }
}

Validity addition_validity(const BigInt& x, const BigInt& y, const Surd& lambda) {
  const int ls = lambda.sign();
  if (ls == 0) return Validity::Ok;
  const int sx = sgn(x);
  const int sy = sgn(y);
  if (sx == 0 && sy == 0) return Validity::Ok;
  if (sx == 0) return ls * sy > 0 ? Validity::Ok : Validity::ViolatesCondition;
  if (sy == 0) return ls * sx > 0 ? Validity::Ok : Validity::ViolatesCondition;
  if (sx == sy) return Validity::Ok;
  const BigInt neg_xy = -(x * y);
  return surd_square(lambda) < BigRational(neg_xy) ? Validity::Ok : Validity::ViolatesCondition;
}

Validity term_validity(const SeriesSpec& spec, SeqIndex r) {
  const SeqIndex iy = spec.m * r + spec.n;
  return addition_validity(gen_fib(spec.family, iy - spec.m), gen_fib(spec.family, iy), spec.lambda);
}

Surd raw_argument(const SeriesSpec& spec, SeqIndex r) {
  const SeqIndex iy = spec.m * r + spec.n;
  const BigInt x = gen_fib(spec.family, iy - spec.m);
  const BigInt y = gen_fib(spec.family, iy);
  const BigRational denom = BigRational(x * y) + surd_square(spec.lambda);
  return combine(spec.lambda, y - x, denom, r);
}

Surd simplified_argument(const SeriesSpec& spec, SeqIndex r) {
  if (!is_theorem(spec.form)) throw ConstraintError("simplified summand requires a theorem form");
  const auto [j, k] = theorem_params(spec);
  const BigRational lambda_sq = surd_square(spec.lambda);
  switch (spec.form) {
    case SummandForm::Thm1: {
      const SeqIndex u = 4 * j * r + 2 * k;
      const BigInt fu = fib(u);
      const BigInt f2j = fib(2 * j);
      return combine(spec.lambda, f2j * lucas(u), BigRational(fu * fu - f2j * f2j) + lambda_sq, r);
    }
    case SummandForm::Thm2: {
      const SeqIndex u = 4 * j * r - 2 * r + 2 * k - 1;
      const BigInt fu = fib(u);
      const BigInt f = fib(2 * j - 1);
      return combine(spec.lambda, lucas(2 * j - 1) * fu, BigRational(fu * fu - f * f) + lambda_sq, r);
    }
    case SummandForm::Thm3: {
      const BigInt numer = 5 * fib(2 * j) * fib(4 * j * r + 2 * k - 1);
      const BigInt base = lucas(8 * j * r + 4 * k - 2) - lucas(4 * j);
      return combine(spec.lambda, numer, BigRational(base) + lambda_sq, r);
    }
    case SummandForm::Thm4: {
      const BigInt numer = lucas(2 * j - 1) * lucas(4 * j * r - 2 * r + 2 * k);
      const BigInt base = lucas(8 * j * r - 4 * r + 4 * k) - lucas(4 * j - 2);
      return combine(spec.lambda, numer, BigRational(base) + lambda_sq, r);
    }
    case SummandForm::RawLemma: break;
  }
  throw ConstraintError("simplified summand requires a theorem form");
}

TermValue term_raw(const SeriesSpec& spec, SeqIndex r, unsigned B) { return make_term(spec, r, raw_argument(spec, r), B); }

TermValue term_simplified(const SeriesSpec& spec, SeqIndex r, unsigned B) {
  return make_term(spec, r, simplified_argument(spec, r), B);
}

TermValue term(const SeriesSpec& spec, SeqIndex r, unsigned B) {
  return is_theorem(spec.form) ? term_simplified(spec, r, B) : term_raw(spec, r, B);
}

FixedInterval remainder_exact(const SeriesSpec& spec, SeqIndex N, unsigned B) {
  if (N < spec.p) throw DomainError("remainder index N precedes the start index p");
  return iv_arctan_surd_ratio(spec.lambda, gen_fib(spec.family, spec.m * N + spec.n), B);
}

FixedInterval closed_form(const SeriesSpec& spec, unsigned B) {
  return iv_arctan_surd_ratio(spec.lambda, gen_fib(spec.family, spec.closed_index()), B);
}

SeqIndex choose_term_count(const SeriesSpec& spec, const FixedInterval& tol) {
  if (tol.lo <= 0) throw DomainError("tolerance must be positive");
  if (spec.family.is_zero() && !spec.lambda.is_zero()) {
    throw NoConvergenceError("G vanishes identically; the remainder stays at pi/2");
  }
  const unsigned bits = tol.frac_bits + 16;
  if (remainder_below(spec, spec.p, tol, bits)) return spec.p;

  // |G_i| grows geometrically in both index directions for a nonzero integer-seeded G,
  // so a passing N exists; the cap only guards against pathological requests.
  constexpr SeqIndex kMaxStep = SeqIndex{1} << 32;
  SeqIndex failing = spec.p;
  SeqIndex step = 1;
  SeqIndex passing = 0;
  for (;;) {
    const SeqIndex candidate = spec.p + step;
    if (remainder_below(spec, candidate, tol, bits)) {
      passing = candidate;
      break;
    }
    failing = candidate;
    if (step >= kMaxStep) throw NoConvergenceError("remainder did not fall below tolerance for " + spec.describe());
    step *= 2;
  }
  while (passing - failing > 1) {
    const SeqIndex mid = failing + (passing - failing) / 2;
    if (remainder_below(spec, mid, tol, bits)) {
      passing = mid;
    } else {
      failing = mid;
    }
  }
  return passing;
}

SumReport sum_to(const SeriesSpec& spec, SeqIndex N, unsigned B, unsigned threads) {
  validate_spec(spec);
  if (B < 16) throw DomainError("sum precision must be at least 16 bits");
  if (N < spec.p) throw DomainError("last index precedes the start index");

  const auto count = static_cast<std::size_t>(N - spec.p + 1);
  std::vector<TermValue> terms(count);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) terms[i] = term(spec, spec.p + static_cast<SeqIndex>(i), B);
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, count);
  if (workers == 1) {
    fill(0, count);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t begin = 0; begin < count; begin += chunk) {
      jobs.push_back(std::async(std::launch::async, fill, begin, std::min(count, begin + chunk)));
    }
    for (auto& job : jobs) job.get();
  }

  SumReport out;
  out.bits = B;
  out.first = spec.p;
  out.last = N;
  out.partial = FixedInterval::zero(B);
  out.validity.reserve(count);
  for (const TermValue& t : terms) {
    out.partial = out.partial + t.enclosure;
    out.validity.push_back(t.validity);
    if (t.validity != Validity::Ok) out.all_valid = false;
  }
  out.remainder = remainder_exact(spec, N, B);
  out.total = out.partial + out.remainder;
  out.closed = closed_form(spec, B);
  out.overlap = overlaps(out.total, out.closed);
  out.distance_ulps = hausdorff_ulps(out.total, out.closed);
  out.within_budget = out.distance_ulps <= BigInt(N - spec.p + 3) * 64;
  return out;
}

SumReport sum_series(const SeriesSpec& spec, unsigned B, const FixedInterval& tol, unsigned threads) {
  validate_spec(spec);
  if (B < 16) throw DomainError("sum precision must be at least 16 bits");
  return sum_to(spec, choose_term_count(spec, tol), B, threads);
}

EquivalenceReport validate_term_equivalence(const SeriesSpec& spec, SeqIndex r_lo, SeqIndex r_hi) {
  EquivalenceReport report;
  auto attempt = [](auto&& f) -> std::optional<Surd> {
    try {
      return f();
    } catch (const TermUndefinedError&) {
      return std::nullopt;
    }
  };
  for (SeqIndex r = r_lo; r <= r_hi; ++r) {
    ++report.checked;
    std::optional<Surd> raw = attempt([&] { return raw_argument(spec, r); });
    std::optional<Surd> simplified = attempt([&] { return simplified_argument(spec, r); });
    if (!raw && !simplified) {
      ++report.undefined_in_both;
      continue;
    }
    if (raw != simplified) report.mismatches.push_back({r, std::move(raw), std::move(simplified)});
  }
  return report;
}

}  // namespace arctelescope
