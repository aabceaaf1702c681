#include "arctelescope/catalog.hpp"

#include "arctelescope/errors.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace arctelescope {

namespace {

using C = ParamConstraint;

BigInt F(SeqIndex i) { return fib(i); }
BigInt L(SeqIndex i) { return lucas(i); }
BigRational Q(const BigInt& num, const BigInt& den = 1) { return make_rational(num, den); }
Surd S(const BigRational& c, const BigInt& d) { return surd_make(c, d); }
Surd R(const BigInt& num, const BigInt& den = 1) { return Surd(Q(num, den)); }

ClosedForm ratio(Surd num, BigInt den) { return {ClosedForm::ArctanRatio{std::move(num), std::move(den)}}; }
ClosedForm pi_over(int b) { return {ClosedForm::PiFraction{1, b}}; }
ClosedForm atan_of(Surd value) { return {ClosedForm::ArctanSurd{std::move(value)}}; }
ClosedForm golden(SeqIndex power) { return {ClosedForm::GoldenLimit{power}}; }

SeqIndex arg(const ParamMap& params, const char* name) { return params.at(name); }

Instance make(SummandForm form, SeqIndex j, SeqIndex k, SeqIndex p, Surd lambda, ClosedForm rhs, const ParamMap& params,
              int orientation = 1) {
  return {make_theorem_spec(form, j, k, p, std::move(lambda)), std::move(rhs), orientation, params};
}

// Argument of the theorem's own closed form, atan(lambda / G_{mp+n-m}).
ClosedForm lemma_rhs(const SeriesSpec& spec) { return ratio(spec.lambda, gen_fib(spec.family, spec.closed_index())); }

const ParamSpec kJNonZero{"j", 1, C::NonZero};
const ParamSpec kJAny{"j", 1, C::Any};
const ParamSpec kJPositive{"j", 1, C::Positive};
const ParamSpec kK0{"k", 0, C::Any};
const ParamSpec kK1{"k", 1, C::Any};
const ParamSpec kP1{"p", 1, C::Any};

const char* const kStartNote =
    "printed sum starts at r=1 over the shifted index; it is the theorem sum from p=0 reindexed r -> r+1";
const char* const kOrientationNote =
    "printed identity is the termwise negation of the theorem instance (L_{-1} = -1 at j = 0)";

IdentityRecord theorem_record(SummandForm form, std::string source, std::string identity, bool j_nonzero) {
  std::vector<ParamSpec> params{j_nonzero ? kJNonZero : kJAny, kK0, kP1, {"lam_num", 1, C::Any},
                                {"lam_den", 1, C::Positive}, {"lam_rad", 1, C::Positive}};
  return IdentityRecord{
      .id = std::string(to_string(form)),
      .source = std::move(source),
      .identity = std::move(identity),
      .free_params = std::move(params),
      .build =
          [form](const ParamMap& ps) {
            Surd lambda = S(Q(arg(ps, "lam_num"), arg(ps, "lam_den")), arg(ps, "lam_rad"));
            SeriesSpec spec = make_theorem_spec(form, arg(ps, "j"), arg(ps, "k"), arg(ps, "p"), std::move(lambda));
            ClosedForm rhs = lemma_rhs(spec);
            return Instance{std::move(spec), std::move(rhs), 1, ps};
          },
  };
}

std::vector<IdentityRecord> builtin_records() {
  std::vector<IdentityRecord> rs;
  const auto T1 = SummandForm::Thm1;
  const auto T2 = SummandForm::Thm2;
  const auto T3 = SummandForm::Thm3;
  const auto T4 = SummandForm::Thm4;

  rs.push_back(theorem_record(T1, "Theorem 1 (G = F, m = 4j, n = 2k + 2j)",
                              "sum_{r>=p} atan(lambda F_{2j} L_{4jr+2k} / (F_{4jr+2k}^2 - F_{2j}^2 + lambda^2)) = atan(lambda / F_{4jp+2k-2j})",
                              true));
  rs.push_back(theorem_record(T2, "Theorem 2 (G = F, m = 4j - 2, n = 2k + 2j - 2)",
                              "sum_{r>=p} atan(lambda L_{2j-1} F_{4jr-2r+2k-1} / (F_{4jr-2r+2k-1}^2 - F_{2j-1}^2 + lambda^2)) = atan(lambda / F_{4jp-2p+2k-2j})",
                              false));
  rs.push_back(theorem_record(T3, "Theorem 3 (G = L, m = 4j, n = 2k + 2j - 1)",
                              "sum_{r>=p} atan(5 lambda F_{2j} F_{4jr+2k-1} / (L_{8jr+4k-2} - L_{4j} + lambda^2)) = atan(lambda / L_{4jp+2k-2j-1})",
                              true));
  rs.push_back(theorem_record(T4, "Theorem 4 (G = L, m = 4j - 2, n = 2k + 2j - 1)",
                              "sum_{r>=p} atan(lambda L_{2j-1} L_{4jr-2r+2k} / (L_{8jr-4r+4k} - L_{4j-2} + lambda^2)) = atan(lambda / L_{4jp-2p+2k-2j+1})",
                              false));

  // ---- Theorem 1 corollaries ----
  rs.push_back({.id = "eq10-Fj-family",
                .source = "Theorem 1 with lambda = F_j, k = 0, p = 1",
                .identity = "sum_{r>=1} atan(F_j^2 L_j L_{4jr} / (F_{4jr}^2 - F_{2j}^2 + F_j^2)) = atan(1/L_j)",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, 0, 1, R(F(j)), ratio(R(1), L(j)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  const BigInt fj = F(j), f4 = F(4 * j * r), f2 = F(2 * j);
                  return R(fj * fj * L(j) * L(4 * j * r), f4 * f4 - f2 * f2 + fj * fj);
                }});
  rs.push_back({.id = "eq11-pi4",
                .source = "Theorem 1 with lambda = F_j, k = 0, p = 1 at j = 1",
                .identity = "sum_{r>=1} atan(L_{4r} / F_{4r}^2) = pi/4",
                .build = [=](const ParamMap& ps) { return make(T1, 1, 0, 1, R(F(1)), pi_over(4), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return R(L(4 * r), F(4 * r) * F(4 * r)); }});
  rs.push_back({.id = "eq12-Lj-family",
                .source = "Theorem 1 with lambda = L_j, k = 0, p = 1",
                .identity = "sum_{r>=1} atan(L_j^2 F_j L_{4jr} / (F_{4jr}^2 - F_{2j}^2 + L_j^2)) = atan(1/F_j)",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, 0, 1, R(L(j)), ratio(R(1), F(j)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  const BigInt lj = L(j), f4 = F(4 * j * r), f2 = F(2 * j);
                  return R(lj * lj * F(j) * L(4 * j * r), f4 * f4 - f2 * f2 + lj * lj);
                }});
  rs.push_back({.id = "eq12-9L8r",
                .source = "Theorem 1 with lambda = L_j, k = 0, p = 1 at j = 2",
                .identity = "sum_{r>=1} atan(9 L_{8r} / F_{8r}^2) = pi/4",
                .build = [=](const ParamMap& ps) { return make(T1, 2, 0, 1, R(L(2)), pi_over(4), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return R(9 * L(8 * r), F(8 * r) * F(8 * r)); }});

  auto f2j_summand = [](SeqIndex j, SeqIndex idx) {
    const BigInt f2 = F(2 * j), fi = F(idx);
    return R(f2 * f2 * L(idx), fi * fi);
  };
  rs.push_back({.id = "eq15-F2j-family",
                .source = "Theorem 1 with lambda = F_{2j}, p = 1",
                .identity = "sum_{r>=1} atan(F_{2j}^2 L_{4jr+2k} / F_{4jr+2k}^2) = atan(F_{2j} / F_{2j+2k})",
                .free_params = {kJNonZero, kK0},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T1, j, k, 1, R(F(2 * j)), ratio(R(F(2 * j)), F(2 * j + 2 * k)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f2j_summand(j, 4 * j * r + 2 * arg(ps, "k"));
                }});
  rs.push_back({.id = "eq16-pi4-family",
                .source = "Theorem 1 with lambda = F_{2j}, p = 1, k = 0",
                .identity = "sum_{r>=1} atan(F_{2j}^2 L_{4jr} / F_{4jr}^2) = pi/4",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, 0, 1, R(F(2 * j)), pi_over(4), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f2j_summand(j, 4 * j * r);
                }});
  rs.push_back({.id = "eq13-kj-family",
                .source = "Theorem 1 with lambda = F_{2j}, p = 1, k = j",
                .identity = "sum_{r>=1} atan(F_{2j}^2 L_{4jr+2j} / F_{4jr+2j}^2) = atan(1/L_{2j})",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, j, 1, R(F(2 * j)), ratio(R(1), L(2 * j)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f2j_summand(j, 4 * j * r + 2 * j);
                }});
  rs.push_back({.id = "eq13-atan-1-3",
                .source = "Theorem 1 with lambda = F_{2j}, p = 1, k = j at j = 1",
                .identity = "sum_{r>=1} atan(L_{4r+2} / F_{4r+2}^2) = atan(1/3)",
                .build = [=](const ParamMap& ps) { return make(T1, 1, 1, 1, R(F(2)), atan_of(R(1, 3)), ps); },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return f2j_summand(1, 4 * r + 2); }});
  rs.push_back({.id = "eq14-golden-limit",
                .source = "Theorem 1 with lambda = F_{2j}, p = 1, limit j -> infinity",
                .identity = "lim_{j->inf} sum_{r>=1} atan(F_{2j}^2 L_{4jr+2k} / F_{4jr+2k}^2) = atan(1/phi^{2k})",
                .free_params = {kJPositive, kK1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T1, j, k, 1, R(F(2 * j)), golden(2 * k), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f2j_summand(j, 4 * j * r + 2 * arg(ps, "k"));
                },
                .is_limit = true});
  rs.push_back({.id = "eq17-pi2-family",
                .source = "Theorem 1 with lambda = F_{2j}, k = j, p = 0",
                .identity = "sum_{r>=1} atan(F_{2j}^2 L_{4jr-2j} / F_{4jr-2j}^2) = pi/2",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, j, 0, R(F(2 * j)), pi_over(2), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f2j_summand(j, 4 * j * r - 2 * j);
                },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  rs.push_back({.id = "eq18-pi2",
                .source = "Theorem 1 with lambda = F_{2j}, k = j, p = 0 at j = 1",
                .identity = "sum_{r>=1} atan(L_{4r-2} / F_{4r-2}^2) = pi/2",
                .build = [=](const ParamMap& ps) { return make(T1, 1, 1, 0, R(F(2)), pi_over(2), ps); },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return f2j_summand(1, 4 * r - 2); },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});

  // 5 lambda^2 = L_{4j}: lambda = sqrt(5 L_{4j}) / 5
  auto sqrt5l4j = [](SeqIndex j) { return S(Q(1, 5), 5 * L(4 * j)); };
  auto sqrt5l4j_summand = [](SeqIndex j, SeqIndex idx) {
    return S(Q(F(2 * j) * L(idx), L(2 * idx)), 5 * L(4 * j));
  };
  rs.push_back({.id = "eq19-sqrt5L4j-family",
                .source = "Theorem 1 with 5 lambda^2 = L_{4j}, k = j, p = 0",
                .identity = "sum_{r>=1} atan(F_{2j} sqrt(5 L_{4j}) L_{4jr-2j} / L_{2(4jr-2j)}) = pi/2",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, j, 0, sqrt5l4j(j), pi_over(2), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5l4j_summand(j, 4 * j * r - 2 * j);
                },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  rs.push_back({.id = "eq19-sqrt35",
                .source = "Theorem 1 with 5 lambda^2 = L_{4j}, k = j, p = 0 at j = 1",
                .identity = "sum_{r>=1} atan(sqrt(35) L_{4r-2} / L_{2(4r-2)}) = pi/2",
                .build = [=](const ParamMap& ps) { return make(T1, 1, 1, 0, sqrt5l4j(1), pi_over(2), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) {
                  return S(Q(L(4 * r - 2), L(2 * (4 * r - 2))), 35);
                },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  rs.push_back({.id = "eq20-sqrt7-5-family",
                .source = "Theorem 1 with 5 lambda^2 = L_{4j}, k = 2j, p = 0",
                .identity = "sum_{r>=1} atan(F_{2j} sqrt(5 L_{4j}) L_{4jr} / L_{8jr}) = atan(sqrt(L_{4j}) / (sqrt(5) F_{2j}))",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, 2 * j, 0, sqrt5l4j(j), ratio(sqrt5l4j(j), F(2 * j)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5l4j_summand(j, 4 * j * r);
                },
                .display_offset = 1});
  rs.push_back({.id = "eq20-sqrt7-5",
                .source = "Theorem 1 with 5 lambda^2 = L_{4j}, k = 2j, p = 0 at j = 1",
                .identity = "sum_{r>=1} atan(sqrt(35) L_{4r} / L_{8r}) = atan(sqrt(7/5))  [printed as sqrt(7/5)]",
                .build = [=](const ParamMap& ps) { return make(T1, 1, 2, 0, sqrt5l4j(1), atan_of(S(Q(1, 5), 35)), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(L(4 * r), L(8 * r)), 35); },
                .display_offset = 1,
                .literal_rhs = S(Q(1, 5), 35),
                .note = "printed right-hand side reads sqrt(7/5); the general identity gives atan(sqrt(7/5))"});

  // lambda = L_{2j} / sqrt 5
  auto l2j_sqrt5 = [](SeqIndex j) { return S(Q(L(2 * j), 5), 5); };
  auto sqrt5_f4j_summand = [](SeqIndex j, SeqIndex idx) { return S(Q(F(4 * j), L(idx)), 5); };
  rs.push_back({.id = "eq21-L2j-sqrt5-family",
                .source = "Theorem 1 with lambda = L_{2j}/sqrt(5), k = j",
                .identity = "sum_{r>=p} atan(sqrt(5) F_{4j} / L_{4jr+2j}) = atan(L_{2j} / (F_{4jp} sqrt(5)))",
                .free_params = {kJNonZero, kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), p = arg(ps, "p");
                  return make(T1, j, j, p, l2j_sqrt5(j), ratio(l2j_sqrt5(j), F(4 * j * p)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5_f4j_summand(j, 4 * j * r + 2 * j);
                }});
  rs.push_back({.id = "eq21-L2j-sqrt5-p1",
                .source = "Theorem 1 with lambda = L_{2j}/sqrt(5), k = j, p = 1",
                .identity = "sum_{r>=1} atan(sqrt(5) F_{4j} / L_{4jr+2j}) = atan(1 / (F_{2j} sqrt(5)))",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, j, 1, l2j_sqrt5(j), ratio(S(Q(1, 5), 5), F(2 * j)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5_f4j_summand(j, 4 * j * r + 2 * j);
                }});
  rs.push_back({.id = "eq21-pi2-family",
                .source = "Theorem 1 with lambda = L_{2j}/sqrt(5), k = j, p = 0",
                .identity = "sum_{r>=1} atan(sqrt(5) F_{4j} / L_{4jr-2j}) = pi/2",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, j, 0, l2j_sqrt5(j), pi_over(2), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5_f4j_summand(j, 4 * j * r - 2 * j);
                },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  rs.push_back({.id = "eq21-k2j-family",
                .source = "Theorem 1 with lambda = L_{2j}/sqrt(5), k = 2j, p = 0",
                .identity = "sum_{r>=1} atan(sqrt(5) F_{4j} / L_{4jr}) = atan(L_{2j} / (F_{2j} sqrt(5)))",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T1, j, 2 * j, 0, l2j_sqrt5(j), ratio(l2j_sqrt5(j), F(2 * j)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5_f4j_summand(j, 4 * j * r);
                },
                .display_offset = 1});

  // ---- Theorem 2 corollaries ----
  auto f4j2_summand = [](SeqIndex j, SeqIndex idx) { return R(F(2 * (2 * j - 1)), F(idx)); };
  rs.push_back({.id = "eq23-F2j-1-family",
                .source = "Theorem 2 with lambda = F_{2j-1}, p = 1",
                .identity = "sum_{r>=1} atan(F_{2(2j-1)} / F_{4jr-2r+2k-1}) = atan(F_{2j-1} / F_{2j+2k-2})",
                .free_params = {kJAny, kK0},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T2, j, k, 1, R(F(2 * j - 1)), ratio(R(F(2 * j - 1)), F(2 * j + 2 * k - 2)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f4j2_summand(j, 4 * j * r - 2 * r + 2 * arg(ps, "k") - 1);
                }});
  rs.push_back({.id = "eq23-inv-L2j-1",
                .source = "Theorem 2 with lambda = F_{2j-1}, p = 1, k = j",
                .identity = "sum_{r>=1} atan(F_{2(2j-1)} / F_{4jr-2r+2j-1}) = atan(1/L_{2j-1})",
                .free_params = {kJAny},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T2, j, j, 1, R(F(2 * j - 1)), ratio(R(1), L(2 * j - 1)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f4j2_summand(j, 4 * j * r - 2 * r + 2 * j - 1);
                }});
  rs.push_back({.id = "eq24-lehmer-family",
                .source = "Theorem 2 with lambda = F_{2j-1}, p = 1 at j = 1",
                .identity = "sum_{r>=1} atan(1 / F_{2r+2k-1}) = atan(1/F_{2k})",
                .free_params = {kK1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex k = arg(ps, "k");
                  return make(T2, 1, k, 1, R(F(1)), ratio(R(1), F(2 * k)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  return R(1, F(2 * r + 2 * arg(ps, "k") - 1));
                }});
  rs.push_back({.id = "eq24-lehmer",
                .source = "Theorem 2 with lambda = F_{2j-1}, p = 1 at j = 1, k = 1",
                .identity = "sum_{r>=1} atan(1 / F_{2r+1}) = pi/4",
                .build = [=](const ParamMap& ps) { return make(T2, 1, 1, 1, R(F(1)), pi_over(4), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return R(1, F(2 * r + 1)); }});
  rs.push_back({.id = "eq22-golden-limit",
                .source = "Theorem 2 with lambda = F_{2j-1}, p = 1, limit j -> infinity",
                .identity = "lim_{j->inf} sum_{r>=1} atan(F_{2(2j-1)} / F_{4jr-2r+2k-1}) = atan(1/phi^{2k-1})",
                .free_params = {kJPositive, kK1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T2, j, k, 1, R(F(2 * j - 1)), golden(2 * k - 1), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return f4j2_summand(j, 4 * j * r - 2 * r + 2 * arg(ps, "k") - 1);
                },
                .is_limit = true});

  // lambda = L_{2j-1} / sqrt 5
  auto l2j1_sqrt5 = [](SeqIndex j) { return S(Q(L(2 * j - 1), 5), 5); };
  auto l2j1_summand = [](SeqIndex j, SeqIndex idx) {
    const BigInt l = L(2 * j - 1), li = L(idx);
    return S(Q(l * l * F(idx), li * li), 5);
  };
  rs.push_back({.id = "eq25-L2j-1-sqrt5-family",
                .source = "Theorem 2 with lambda = L_{2j-1}/sqrt(5), k = j",
                .identity = "sum_{r>=p} atan(sqrt(5) L_{2j-1}^2 F_{4jr-2r+2j-1} / L_{4jr-2r+2j-1}^2) = atan(L_{2j-1} / (sqrt(5) F_{4jp-2p}))",
                .free_params = {kJAny, kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), p = arg(ps, "p");
                  return make(T2, j, j, p, l2j1_sqrt5(j), ratio(l2j1_sqrt5(j), F(4 * j * p - 2 * p)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return l2j1_summand(j, 4 * j * r - 2 * r + 2 * j - 1);
                }});
  rs.push_back({.id = "eq25-p1-family",
                .source = "Theorem 2 with lambda = L_{2j-1}/sqrt(5), k = j, p = 1",
                .identity = "sum_{r>=1} atan(sqrt(5) L_{2j-1}^2 F_{4jr-2r+2j-1} / L_{4jr-2r+2j-1}^2) = atan(1 / (sqrt(5) F_{2j-1}))",
                .free_params = {kJAny},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T2, j, j, 1, l2j1_sqrt5(j), ratio(S(Q(1, 5), 5), F(2 * j - 1)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return l2j1_summand(j, 4 * j * r - 2 * r + 2 * j - 1);
                }});
  rs.push_back({.id = "eq25-j1-family",
                .source = "Theorem 2 with lambda = L_{2j-1}/sqrt(5), k = j at j = 1",
                .identity = "sum_{r>=p} atan(sqrt(5) F_{2r+1} / L_{2r+1}^2) = atan(1 / (sqrt(5) F_{2p}))",
                .free_params = {kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex p = arg(ps, "p");
                  return make(T2, 1, 1, p, l2j1_sqrt5(1), ratio(S(Q(1, 5), 5), F(2 * p)), ps);
                },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return l2j1_summand(1, 2 * r + 1); }});
  rs.push_back({.id = "eq25-pi2",
                .source = "Theorem 2 with lambda = L_{2j-1}/sqrt(5), k = j at j = 1, p = 0",
                .identity = "sum_{r>=1} atan(sqrt(5) F_{2r-1} / L_{2r-1}^2) = pi/2",
                .build = [=](const ParamMap& ps) { return make(T2, 1, 1, 0, l2j1_sqrt5(1), pi_over(2), ps); },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return l2j1_summand(1, 2 * r - 1); },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});

  // 5 lambda^2 = L_{4j-2}: lambda = sqrt(5 L_{4j-2}) / 5
  auto sqrt5l4j2 = [](SeqIndex j) { return S(Q(1, 5), 5 * L(4 * j - 2)); };
  auto sqrt5l4j2_summand = [](SeqIndex j, SeqIndex idx) {
    return S(Q(L(2 * j - 1) * F(idx), L(2 * idx)), 5 * L(4 * j - 2));
  };
  rs.push_back({.id = "eq26-sqrt5L4j-2-family",
                .source = "Theorem 2 with 5 lambda^2 = L_{4j-2}, k = j",
                .identity = "sum_{r>=p} atan(sqrt(5 L_{4j-2}) L_{2j-1} F_{4jr-2r+2j-1} / L_{2(4jr-2r+2j-1)}) = atan(sqrt(5 L_{4j-2}) / (5 F_{4jp-2p}))",
                .free_params = {kJAny, kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), p = arg(ps, "p");
                  return make(T2, j, j, p, sqrt5l4j2(j), ratio(sqrt5l4j2(j), F(4 * j * p - 2 * p)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5l4j2_summand(j, 4 * j * r - 2 * r + 2 * j - 1);
                }});
  rs.push_back({.id = "eq26-pi2-family",
                .source = "Theorem 2 with 5 lambda^2 = L_{4j-2}, k = j, p = 0",
                .identity = "sum_{r>=1} atan(sqrt(5 L_{4j-2}) L_{2j-1} F_{4jr-2r-2j+1} / L_{2(4jr-2r-2j+1)}) = pi/2",
                .free_params = {kJPositive},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T2, j, j, 0, sqrt5l4j2(j), pi_over(2), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5l4j2_summand(j, 4 * j * r - 2 * r - 2 * j + 1);
                },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  rs.push_back({.id = "eq26-sqrt15-pi2",
                .source = "Theorem 2 with 5 lambda^2 = L_{4j-2}, k = j, p = 0 at j = 1",
                .identity = "sum_{r>=1} atan(sqrt(15) F_{2r-1} / L_{2(2r-1)}) = pi/2",
                .build = [=](const ParamMap& ps) { return make(T2, 1, 1, 0, sqrt5l4j2(1), pi_over(2), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(F(2 * r - 1), L(2 * (2 * r - 1))), 15); },
                .display_offset = 1,
                .start_candidates = {0, 1},
                .note = kStartNote});
  auto inv_sqrt = [](const BigInt& x) { return S(Q(1, x), x); };  // 1/sqrt(x) = sqrt(x)/x
  rs.push_back({.id = "eq26-p2-family",
                .source = "Theorem 2 with 5 lambda^2 = L_{4j-2}, k = j, p = 2",
                .identity = "sum_{r>=1} atan(sqrt(5 L_{4j-2}) L_{2j-1} F_{4jr-2r+6j-3} / L_{2(4jr-2r+6j-3)}) = atan(1 / sqrt(5 F_{4j-2} F_{8j-4}))",
                .free_params = {kJPositive},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T2, j, j, 2, sqrt5l4j2(j), atan_of(inv_sqrt(5 * F(4 * j - 2) * F(8 * j - 4))), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return sqrt5l4j2_summand(j, 4 * j * r - 2 * r + 6 * j - 3);
                },
                .display_offset = -1});
  rs.push_back({.id = "eq26-sqrt15-atan",
                .source = "Theorem 2 with 5 lambda^2 = L_{4j-2}, k = j, p = 2 at j = 1",
                .identity = "sum_{r>=1} atan(sqrt(15) F_{2r+3} / L_{2(2r+3)}) = atan(1/sqrt(15))",
                .build = [=](const ParamMap& ps) { return make(T2, 1, 1, 2, sqrt5l4j2(1), atan_of(inv_sqrt(15)), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(F(2 * r + 3), L(2 * (2 * r + 3))), 15); },
                .display_offset = -1});

  // ---- Theorem 3 corollaries ----
  rs.push_back({.id = "eq27-sqrtL4j-family",
                .source = "Theorem 3 with lambda = sqrt(L_{4j}), k = 0, p = 1",
                .identity = "sum_{r>=1} atan(5 sqrt(L_{4j}) F_{2j} F_{4jr-1} / L_{8jr-2}) = atan(sqrt(L_{4j}) / L_{2j-1})",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T3, j, 0, 1, S(Q(1), L(4 * j)), ratio(S(Q(1), L(4 * j)), L(2 * j - 1)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return S(Q(5 * F(2 * j) * F(4 * j * r - 1), L(8 * j * r - 2)), L(4 * j));
                }});
  rs.push_back({.id = "eq27-sqrt7",
                .source = "Theorem 3 with lambda = sqrt(L_{4j}), k = 0, p = 1 at j = 1",
                .identity = "sum_{r>=1} atan(5 sqrt(7) F_{4r-1} / L_{2(4r-1)}) = atan(sqrt(7))",
                .build = [=](const ParamMap& ps) { return make(T3, 1, 0, 1, S(Q(1), 7), atan_of(S(Q(1), 7)), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(5 * F(4 * r - 1), L(2 * (4 * r - 1))), 7); }});
  rs.push_back({.id = "eq28-L2j-family",
                .source = "Theorem 3 with lambda = L_{2j}, p = 1",
                .identity = "sum_{r>=1} atan(F_{4j} / F_{4jr+2k-1}) = atan(L_{2j} / L_{2j+2k-1})",
                .free_params = {kJNonZero, kK0},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T3, j, k, 1, R(L(2 * j)), ratio(R(L(2 * j)), L(2 * j + 2 * k - 1)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return R(F(4 * j), F(4 * j * r + 2 * arg(ps, "k") - 1));
                }});
  rs.push_back({.id = "eq28-golden-limit",
                .source = "Theorem 3 with lambda = L_{2j}, p = 1, limit j -> infinity",
                .identity = "lim_{j->inf} sum_{r>=1} atan(F_{4j} / F_{4jr+2k-1}) = atan(1/phi^{2k-1})",
                .free_params = {kJPositive, kK1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T3, j, k, 1, R(L(2 * j)), golden(2 * k - 1), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return R(F(4 * j), F(4 * j * r + 2 * arg(ps, "k") - 1));
                },
                .is_limit = true});
  rs.push_back({.id = "eq29-sqrt5F2j-family",
                .source = "Theorem 3 with lambda = sqrt(5) F_{2j}, k = 0, p = 1",
                .identity = "sum_{r>=1} atan(5 sqrt(5) F_{2j}^2 F_{4jr-1} / L_{4jr-1}^2) = atan(sqrt(5) F_{2j} / L_{2j-1})",
                .free_params = {kJNonZero},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T3, j, 0, 1, S(Q(F(2 * j)), 5), ratio(S(Q(F(2 * j)), 5), L(2 * j - 1)), ps);
                },
                .printed_summand = [](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  const BigInt f2 = F(2 * j), l = L(4 * j * r - 1);
                  return S(Q(5 * f2 * f2 * F(4 * j * r - 1), l * l), 5);
                }});
  rs.push_back({.id = "eq29-sqrt5",
                .source = "Theorem 3 with lambda = sqrt(5) F_{2j}, k = 0, p = 1 at j = 1",
                .identity = "sum_{r>=1} atan(5 sqrt(5) F_{4r-1} / L_{4r-1}^2) = atan(sqrt(5))",
                .build = [=](const ParamMap& ps) { return make(T3, 1, 0, 1, S(Q(1), 5), atan_of(S(Q(1), 5)), ps); },
                .printed_summand = [](const ParamMap&, SeqIndex r) {
                  const BigInt l = L(4 * r - 1);
                  return S(Q(5 * F(4 * r - 1), l * l), 5);
                }});

  // ---- Theorem 4 corollaries ----
  rs.push_back({.id = "eq30-sqrt3-family",
                .source = "Theorem 4 with lambda = sqrt(L_{4j-2}), j = 0, k = 0",
                .identity = "sum_{r>=p} atan(sqrt(3) L_{2r} / L_{4r}) = atan(sqrt(3) / L_{2p-1})",
                .free_params = {kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex p = arg(ps, "p");
                  return make(T4, 0, 0, p, S(Q(1), L(-2)), ratio(S(Q(1), 3), L(2 * p - 1)), ps, -1);
                },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(L(2 * r), L(4 * r)), 3); },
                .note = kOrientationNote});
  rs.push_back({.id = "eq30-pi3",
                .source = "Theorem 4 with lambda = sqrt(L_{4j-2}), j = 0, k = 0, p = 1",
                .identity = "sum_{r>=1} atan(sqrt(3) L_{2r} / L_{4r}) = pi/3",
                .build = [=](const ParamMap& ps) { return make(T4, 0, 0, 1, S(Q(1), 3), pi_over(3), ps, -1); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(L(2 * r), L(4 * r)), 3); },
                .note = kOrientationNote});
  auto l2j1_sq_summand = [](SeqIndex j, SeqIndex idx) {
    const BigInt l = L(2 * j - 1), fi = F(idx);
    return R(l * l * L(idx), 5 * fi * fi);
  };
  rs.push_back({.id = "eq31-L2j-1-family",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1",
                .identity = "sum_{r>=1} atan((L_{2j-1}^2 / 5) L_{4jr-2r+2k} / F_{4jr-2r+2k}^2) = atan(L_{2j-1} / L_{2j+2k-1})",
                .free_params = {kJAny, kK0},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T4, j, k, 1, R(L(2 * j - 1)), ratio(R(L(2 * j - 1)), L(2 * j + 2 * k - 1)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return l2j1_sq_summand(j, 4 * j * r - 2 * r + 2 * arg(ps, "k"));
                }});
  rs.push_back({.id = "eq31-pi4-family",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1, k = 0",
                .identity = "sum_{r>=1} atan((L_{2j-1}^2 / 5) L_{4jr-2r} / F_{4jr-2r}^2) = pi/4",
                .free_params = {kJAny},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j");
                  return make(T4, j, 0, 1, R(L(2 * j - 1)), pi_over(4), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return l2j1_sq_summand(j, 4 * j * r - 2 * r);
                }});
  rs.push_back({.id = "eq34-golden-limit",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1, limit j -> infinity",
                .identity = "lim_{j->inf} sum_{r>=1} atan((L_{2j-1}^2 / 5) L_{4jr-2r+2k} / F_{4jr-2r+2k}^2) = atan(1/phi^{2k})",
                .free_params = {kJPositive, kK1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex j = arg(ps, "j"), k = arg(ps, "k");
                  return make(T4, j, k, 1, R(L(2 * j - 1)), golden(2 * k), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  const SeqIndex j = arg(ps, "j");
                  return l2j1_sq_summand(j, 4 * j * r - 2 * r + 2 * arg(ps, "k"));
                },
                .is_limit = true});
  rs.push_back({.id = "eq35-pi4",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1, k = 0 at j = 1",
                .identity = "sum_{r>=1} atan((1/5) L_{2r} / F_{2r}^2) = pi/4",
                .build = [=](const ParamMap& ps) { return make(T4, 1, 0, 1, R(L(1)), pi_over(4), ps); },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return l2j1_sq_summand(1, 2 * r); }});
  rs.push_back({.id = "eq36-j1-family",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1 at j = 1",
                .identity = "sum_{r>=1} atan((1/5) L_{2r+2k} / F_{2r+2k}^2) = atan(1/L_{2k+1})",
                .free_params = {kK0},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex k = arg(ps, "k");
                  return make(T4, 1, k, 1, R(L(1)), ratio(R(1), L(2 * k + 1)), ps);
                },
                .printed_summand = [=](const ParamMap& ps, SeqIndex r) {
                  return l2j1_sq_summand(1, 2 * r + 2 * arg(ps, "k"));
                }});
  rs.push_back({.id = "eq36-atan-1-4",
                .source = "Theorem 4 with lambda = L_{2j-1}, p = 1 at j = 1, k = 1",
                .identity = "sum_{r>=1} atan((1/5) L_{2r+2} / F_{2r+2}^2) = atan(1/4)",
                .build = [=](const ParamMap& ps) { return make(T4, 1, 1, 1, R(L(1)), atan_of(R(1, 4)), ps); },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return l2j1_sq_summand(1, 2 * r + 2); }});
  rs.push_back({.id = "eq37-L-1-family",
                .source = "Theorem 4 with lambda = L_{2j-1}, j = 0, k = 0",
                .identity = "sum_{r>=p} atan((1/5) L_{2r} / F_{2r}^2) = atan(1/L_{2p-1})",
                .free_params = {kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex p = arg(ps, "p");
                  return make(T4, 0, 0, p, R(L(-1)), ratio(R(1), L(2 * p - 1)), ps);
                },
                .printed_summand = [=](const ParamMap&, SeqIndex r) { return l2j1_sq_summand(1, 2 * r); }});
  rs.push_back({.id = "eq38-sqrt5-family",
                .source = "Theorem 4 with lambda = sqrt(5) F_{2j-1}, j = 0, k = 0",
                .identity = "sum_{r>=p} atan(sqrt(5) / L_{2r}) = atan(sqrt(5) / L_{2p-1})",
                .free_params = {kP1},
                .build = [=](const ParamMap& ps) {
                  const SeqIndex p = arg(ps, "p");
                  return make(T4, 0, 0, p, S(Q(F(-1)), 5), ratio(S(Q(1), 5), L(2 * p - 1)), ps, -1);
                },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(1, L(2 * r)), 5); },
                .note = kOrientationNote});
  rs.push_back({.id = "eq38-atan-sqrt5",
                .source = "Theorem 4 with lambda = sqrt(5) F_{2j-1}, j = 0, k = 0, p = 1",
                .identity = "sum_{r>=1} atan(sqrt(5) / L_{2r}) = atan(sqrt(5))",
                .build = [=](const ParamMap& ps) { return make(T4, 0, 0, 1, S(Q(1), 5), atan_of(S(Q(1), 5)), ps, -1); },
                .printed_summand = [](const ParamMap&, SeqIndex r) { return S(Q(1, L(2 * r)), 5); },
                .note = kOrientationNote});
  return rs;
}

std::string validity_text(const SumReport& s) {
  std::string bad;
  for (std::size_t i = 0; i < s.validity.size(); ++i) {
    if (s.validity[i] == Validity::Ok) continue;
    bad += bad.empty() ? "violations:" : ",";
    bad += "r=" + std::to_string(s.first + static_cast<SeqIndex>(i));
  }
  return bad.empty() ? "ok:" + std::to_string(s.validity.size()) : bad;
}

FixedInterval oriented(const FixedInterval& x, int orientation) { return orientation < 0 ? -x : x; }

BigInt budget_ulps(const SumReport& s) { return BigInt(s.last - s.first + 3) * 64; }

std::string enclosure_text(const FixedInterval& x, unsigned digits = 30) {
  return "[" + to_decimal(x.lo, x.frac_bits, digits, Rounding::Down) + ", " +
         to_decimal(x.hi, x.frac_bits, digits, Rounding::Up) + "]";
}

// Printed summand at display index r + offset against the theorem summand at r.
std::optional<std::string> printed_summand_mismatch(const IdentityRecord& record, const Instance& inst) {
  if (!record.printed_summand) return std::nullopt;
  for (SeqIndex r = inst.spec.p; r <= inst.spec.p + 8; ++r) {
    Surd theorem = simplified_argument(inst.spec, r);
    if (inst.orientation < 0) theorem = surd_neg(theorem);
    const Surd printed = record.printed_summand(inst.params, r + record.display_offset);
    if (!(theorem == printed)) {
      return "printed summand differs from the theorem summand at r=" + std::to_string(r) + ": " + printed.to_string() +
             " vs " + theorem.to_string();
    }
  }
  return std::nullopt;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

std::string ClosedForm::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ArctanRatio>) {
          return "atan(" + k.num.to_string() + " / " + k.den.get_str() + ")";
        } else if constexpr (std::is_same_v<K, PiFraction>) {
          return (k.a == 1 ? std::string("pi") : std::to_string(k.a) + "*pi") + "/" + std::to_string(k.b);
        } else if constexpr (std::is_same_v<K, ArctanSurd>) {
          return "atan(" + k.value.to_string() + ")";
        } else {
          return "atan(phi^-" + std::to_string(k.power) + ")";
        }
      },
      kind);
}

FixedInterval evaluate(const ClosedForm& form, unsigned B) {
  return std::visit(
      [B](const auto& k) -> FixedInterval {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ClosedForm::ArctanRatio>) {
          return iv_arctan_surd_ratio(k.num, k.den, B);
        } else if constexpr (std::is_same_v<K, ClosedForm::PiFraction>) {
          if (k.b != 2 && k.b != 3 && k.b != 4) throw DomainError("pi fraction denominator must be 2, 3 or 4");
          // a pi / b from pi at B + 4 bits: multiply by a exactly, divide by b outward.
          const FixedInterval pi = mul_int(iv_pi(B + 4), k.a);
          BigInt lo, hi;
          mpz_fdiv_q_ui(lo.get_mpz_t(), pi.lo.get_mpz_t(), static_cast<unsigned long>(k.b));
          mpz_cdiv_q_ui(hi.get_mpz_t(), pi.hi.get_mpz_t(), static_cast<unsigned long>(k.b));
          return round_outward({lo, hi, B + 4}, B);
        } else if constexpr (std::is_same_v<K, ClosedForm::ArctanSurd>) {
          return iv_arctan_surd(k.value, B);
        } else {
          return iv_arctan(iv_golden_ratio_power(-k.power, B + 8), B);
        }
      },
      form.kind);
}

std::string to_string(const ParamMap& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) out += ",";
    out += name + "=" + std::to_string(value);
  }
  return out;
}

Registry::Registry(std::vector<IdentityRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i - 1].id == records_[i].id) throw ConstraintError("duplicate record id " + records_[i].id);
  }
  for (const IdentityRecord& r : records_) {
    const Instance inst = instantiate(r, {});
    validate_spec(inst.spec);
    (void)evaluate(inst.rhs, 64);
  }
}

const Registry& Registry::builtin() {
  static const Registry registry(builtin_records());
  return registry;
}

const IdentityRecord& Registry::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const IdentityRecord& r, std::string_view key) { return r.id < key; });
  if (it == records_.end() || it->id != id) throw UsageError("unknown identity id '" + std::string(id) + "'");
  return *it;
}

const std::vector<IdentityRecord>& registry_list() { return Registry::builtin().records(); }

ParamMap resolve_params(const IdentityRecord& record, const ParamMap& given) {
  for (const auto& [name, value] : given) {
    const bool known = std::any_of(record.free_params.begin(), record.free_params.end(),
                                   [&](const ParamSpec& p) { return p.name == name; });
    if (!known) throw UsageError("record '" + record.id + "' has no free parameter '" + name + "'");
  }
  ParamMap out;
  for (const ParamSpec& spec : record.free_params) {
    auto it = given.find(spec.name);
    const SeqIndex value = it == given.end() ? spec.default_value : it->second;
    if (spec.constraint == C::NonZero && value == 0) {
      throw ConstraintError(record.id + ": parameter " + spec.name + " must be nonzero");
    }
    if (spec.constraint == C::Positive && value <= 0) {
      throw ConstraintError(record.id + ": parameter " + spec.name + " must be positive");
    }
    out[spec.name] = value;
  }
  return out;
}

Instance instantiate(const IdentityRecord& record, const ParamMap& given) {
  return record.build(resolve_params(record, given));
}

Instance instantiate(std::string_view id, const ParamMap& given) {
  return instantiate(Registry::builtin().find(id), given);
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::PassWithNote: return "pass-with-note";
    case Status::Fail: return "fail";
  }
  return "fail";
}

std::string distance_bound_text(const BigInt& ulps, unsigned frac_bits) {
  if (ulps == 0) return "0";
  const long bits = static_cast<long>(mpz_sizeinbase(ulps.get_mpz_t(), 2));
  return "2^" + std::to_string(bits - static_cast<long>(frac_bits));
}

StartIndexResolution resolve_start_index(const IdentityRecord& record, const ParamMap& given, unsigned B,
                                         const FixedInterval& tol) {
  const Instance inst = instantiate(record, given);
  StartIndexResolution out;
  out.chosen = inst.spec.p;
  const FixedInterval rhs = evaluate(inst.rhs, B);
  std::vector<SeqIndex> candidates = record.start_candidates;
  if (candidates.empty()) candidates.push_back(inst.spec.p);
  bool registered_matches = false;
  std::optional<SeqIndex> first_match;
  std::ostringstream note;
  note << "start index check:";
  for (SeqIndex p : candidates) {
    SeriesSpec spec = inst.spec;
    spec.p = p;
    StartIndexProbe probe{p, false, {}};
    try {
      const SumReport s = sum_series(spec, B, tol);
      probe.lhs = oriented(s.total, inst.orientation);
      probe.matches = s.all_valid && overlaps(probe.lhs, rhs) && hausdorff_ulps(probe.lhs, rhs) <= budget_ulps(s);
    } catch (const std::exception&) {
      probe.matches = false;
    }
    note << " theorem p=" << p << (probe.matches ? " matches" : " does not match");
    if (!probe.matches && probe.lhs.frac_bits != 0) {
      note << " (sum " << to_decimal(probe.lhs.lo, B, 12, Rounding::Down) << "...)";
    }
    note << ";";
    if (probe.matches && p == inst.spec.p) registered_matches = true;
    if (probe.matches && !first_match) first_match = p;
    out.probes.push_back(std::move(probe));
  }
  if (!registered_matches && first_match) out.chosen = *first_match;
  note << " using p=" << out.chosen << " (printed r=1 corresponds to theorem r=" << 1 - record.display_offset << ")";
  out.note = note.str();
  return out;
}

RecordResult verify_record(const IdentityRecord& record, const ParamMap& given, unsigned B, const FixedInterval& tol) {
  RecordResult out;
  out.id = record.id;
  out.source = record.source;
  out.bits = B;
  try {
    Instance inst = instantiate(record, given);
    if (!record.start_candidates.empty()) {
      const StartIndexResolution res = resolve_start_index(record, given, B, tol);
      out.notes.push_back(res.note);
      inst.spec.p = res.chosen;
    }
    ParamMap shown = inst.params;
    shown["p"] = inst.spec.p;
    out.params = to_string(shown) + ";lambda=" + inst.spec.lambda.to_string();

    const SumReport s = sum_series(inst.spec, B, tol);
    out.terms_used = s.terms_used();
    out.lhs = oriented(s.total, inst.orientation);
    out.rhs = evaluate(inst.rhs, B);
    out.validity_flags = validity_text(s);

    if (!record.note.empty()) out.notes.push_back(record.note);
    if (inst.orientation < 0) {
      out.notes.push_back("lhs is the negated theorem total");
    }
    const auto printed_issue = printed_summand_mismatch(record, inst);
    if (printed_issue) out.notes.push_back(*printed_issue);

    const BigInt dist = hausdorff_ulps(out.lhs, out.rhs);
    const bool rhs_ok = overlaps(out.lhs, out.rhs) && dist <= budget_ulps(s);
    if (record.literal_rhs) {
      const FixedInterval literal = round_outward(
          mul(iv_sqrt_nat(record.literal_rhs->radicand(), B + 8), iv_from_rational(record.literal_rhs->coeff(), B + 8), B),
          B);
      const BigInt off = hausdorff_ulps(out.lhs, literal);
      out.notes.push_back("measured sum " + enclosure_text(out.lhs) + " agrees with " + ClosedForm{ClosedForm::ArctanSurd{*record.literal_rhs}}.describe() +
                          " to within " + distance_bound_text(dist, B) + "; the literal value " +
                          record.literal_rhs->to_string() + " = " + to_decimal(literal.lo, B, 12, Rounding::Down) +
                          "... is off by about " + to_decimal(off, B, 6, Rounding::Down));
    }
    const bool ok = s.consistent() && rhs_ok && !printed_issue;
    if (!s.all_valid) out.notes.push_back("addition-formula condition violated: " + out.validity_flags);
    if (!rhs_ok) {
      out.notes.push_back("sum " + enclosure_text(out.lhs) + " vs closed form " + enclosure_text(out.rhs));
    }
    out.status = !ok ? Status::Fail : (out.notes.empty() ? Status::Pass : Status::PassWithNote);
    out.sum = s;
  } catch (const std::exception& e) {
    out.status = Status::Fail;
    out.notes.push_back(std::string("error: ") + e.what());
  }
  return out;
}

TrendReport check_limit_trend(const IdentityRecord& record, const ParamMap& given, std::span<const SeqIndex> j_values,
                              unsigned B) {
  if (!record.is_limit) throw UsageError("'" + record.id + "' is not a limit record");
  if (j_values.size() < 2) throw UsageError("limit trend needs at least two j values");
  for (std::size_t i = 1; i < j_values.size(); ++i) {
    if (j_values[i] <= j_values[i - 1]) throw UsageError("j values must be increasing");
  }
  TrendReport out;
  out.id = record.id;
  const FixedInterval tol = iv_pow2(-static_cast<long>(B - 16), B);
  for (SeqIndex j : j_values) {
    ParamMap ps = given;
    ps["j"] = j;
    const Instance inst = instantiate(record, ps);
    if (out.entries.empty()) {
      out.params = inst.params;
      out.limit = evaluate(inst.rhs, B);
    }
    TrendEntry e;
    e.j = j;
    e.sum = sum_series(inst.spec, B, tol);
    e.lhs = oriented(e.sum.total, inst.orientation);
    e.deviation = abs(e.lhs - out.limit);
    if (!e.sum.consistent()) out.sums_consistent = false;
    out.entries.push_back(std::move(e));
  }
  out.strictly_decreasing = true;
  out.limit_attained = true;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    if (out.entries[i].deviation.lo != 0) out.limit_attained = false;
    if (i > 0 && !(out.entries[i].deviation.hi < out.entries[i - 1].deviation.lo)) out.strictly_decreasing = false;
  }
  return out;
}

TrendReport check_limit_trend(std::string_view id, const ParamMap& given, std::span<const SeqIndex> j_values,
                              unsigned B) {
  return check_limit_trend(Registry::builtin().find(id), given, j_values, B);
}

RecordResult trend_result(const IdentityRecord& record, const TrendReport& trend, unsigned B) {
  RecordResult out;
  out.id = record.id;
  out.source = record.source;
  out.bits = B;
  ParamMap shown = trend.params;
  shown.erase("j");
  out.params = to_string(shown) + ";j=" + std::to_string(trend.entries.front().j) + ".." +
               std::to_string(trend.entries.back().j);
  const TrendEntry& last = trend.entries.back();
  out.terms_used = last.sum.terms_used();
  out.lhs = last.lhs;
  out.rhs = trend.limit;
  std::string flags;
  for (const TrendEntry& e : trend.entries) {
    if (!flags.empty()) flags += ";";
    flags += "j=" + std::to_string(e.j) + ":" + validity_text(e.sum);
    out.notes.push_back("j=" + std::to_string(e.j) + " deviation from limit in " + enclosure_text(e.deviation, 20));
  }
  out.validity_flags = flags;
  if (trend.strictly_decreasing) {
    out.notes.push_back("deviation strictly decreasing in j");
  } else if (trend.limit_attained) {
    out.notes.push_back("limit value attained exactly at every j");
  } else {
    out.notes.push_back("deviation not strictly decreasing in j");
  }
  out.status = trend.pass() ? Status::Pass : Status::Fail;
  out.sum = last.sum;
  return out;
}

std::vector<RecordResult> verify_all(const Registry& registry, unsigned B, const FixedInterval& tol, unsigned threads) {
  std::vector<const IdentityRecord*> targets;
  for (const IdentityRecord& r : registry.records()) {
    if (!r.is_limit) targets.push_back(&r);
  }
  std::vector<RecordResult> out(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t i) { out[i] = verify_record(*targets[i], {}, B, tol); });
  return out;
}

std::vector<RecordResult> full_report(const Registry& registry, unsigned B, const FixedInterval& tol, unsigned threads) {
  const auto& records = registry.records();
  std::vector<RecordResult> out(records.size());
  static constexpr SeqIndex kTrendJ[] = {1, 2, 3, 4};
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const IdentityRecord& r = records[i];
    if (!r.is_limit) {
      out[i] = verify_record(r, {}, B, tol);
      return;
    }
    try {
      out[i] = trend_result(r, check_limit_trend(r, {}, kTrendJ, B), B);
    } catch (const std::exception& e) {
      out[i].id = r.id;
      out[i].source = r.source;
      out[i].bits = B;
      out[i].status = Status::Fail;
      out[i].notes.push_back(std::string("error: ") + e.what());
    }
  });
  return out;
}

}  // namespace arctelescope
