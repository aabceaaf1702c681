#pragma once

#include "arctelescope/exactnum.hpp"
#include "arctelescope/rigor.hpp"
#include "arctelescope/telescope.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arctelescope {

/// Right-hand side of a catalogued identity.
struct ClosedForm {
  struct ArctanRatio {  // atan(num / den); den = 0 means sign(num) pi/2
    Surd num;
    BigInt den;
  };
  struct PiFraction {  // a pi / b with b in {2, 3, 4}
    int a = 1;
    int b = 4;
  };
  struct ArctanSurd {
    Surd value;
  };
  struct GoldenLimit {  // atan(phi^-power)
    SeqIndex power = 0;
  };
  using Kind = std::variant<ArctanRatio, PiFraction, ArctanSurd, GoldenLimit>;

  Kind kind;

  std::string describe() const;
};

FixedInterval evaluate(const ClosedForm& form, unsigned B);

using ParamMap = std::map<std::string, SeqIndex>;
std::string to_string(const ParamMap& params);

enum class ParamConstraint { Any, NonZero, Positive };

struct ParamSpec {
  std::string name;
  SeqIndex default_value = 0;
  ParamConstraint constraint = ParamConstraint::Any;
};

/// A record bound to concrete parameters.
struct Instance {
  SeriesSpec spec;
  ClosedForm rhs;
  int orientation = 1;  // printed sum = orientation * (theorem sum)
  ParamMap params;
};

struct IdentityRecord {
  std::string id;
  std::string source;    // which theorem and substitution the identity comes from
  std::string identity;  // the printed identity, as text
  std::vector<ParamSpec> free_params;
  std::function<Instance(const ParamMap&)> build;
  /// Printed summand at display index r; display r = theorem r + display_offset.
  std::function<Surd(const ParamMap&, SeqIndex)> printed_summand;
  SeqIndex display_offset = 0;
  bool is_limit = false;
  /// Theorem start indices to try when the printed start index is ambiguous.
  std::vector<SeqIndex> start_candidates;
  /// Set when the printed right-hand side is this number rather than atan of it.
  std::optional<Surd> literal_rhs;
  std::string note;
};

class Registry {
 public:
  Registry() = default;
  /// Validates every record at its default parameters; throws ConstraintError on a bad record.
  explicit Registry(std::vector<IdentityRecord> records);

  static const Registry& builtin();

  const std::vector<IdentityRecord>& records() const { return records_; }
  /// Throws UsageError for an unknown id.
  const IdentityRecord& find(std::string_view id) const;

 private:
  std::vector<IdentityRecord> records_;  // sorted by id
};

const std::vector<IdentityRecord>& registry_list();

/// Fills defaults and checks constraints. Unknown names -> UsageError; out of domain -> ConstraintError.
ParamMap resolve_params(const IdentityRecord& record, const ParamMap& given);
Instance instantiate(const IdentityRecord& record, const ParamMap& given);
Instance instantiate(std::string_view id, const ParamMap& given);

enum class Status { Pass, PassWithNote, Fail };
std::string_view to_string(Status status);

struct RecordResult {
  std::string id;
  std::string source;
  std::string params;
  unsigned bits = 0;
  SeqIndex terms_used = 0;
  FixedInterval lhs;
  FixedInterval rhs;
  std::string validity_flags;
  Status status = Status::Fail;
  std::vector<std::string> notes;
  std::optional<SumReport> sum;
};

struct StartIndexProbe {
  SeqIndex p = 0;
  bool matches = false;
  FixedInterval lhs;
};

struct StartIndexResolution {
  SeqIndex chosen = 0;
  std::vector<StartIndexProbe> probes;
  std::string note;
};

/// Sums the record with each candidate start index and keeps the one whose
/// total matches the printed right-hand side.
StartIndexResolution resolve_start_index(const IdentityRecord& record, const ParamMap& given, unsigned B,
                                         const FixedInterval& tol);

RecordResult verify_record(const IdentityRecord& record, const ParamMap& given, unsigned B, const FixedInterval& tol);

struct TrendEntry {
  SeqIndex j = 0;
  SumReport sum;
  FixedInterval lhs;
  FixedInterval deviation;  // |lhs - limit|
};

struct TrendReport {
  std::string id;
  ParamMap params;
  FixedInterval limit;
  std::vector<TrendEntry> entries;
  bool sums_consistent = true;
  bool strictly_decreasing = false;
  bool limit_attained = false;  // every deviation enclosure touches zero

  bool pass() const { return sums_consistent && (strictly_decreasing || limit_attained); }
};

TrendReport check_limit_trend(const IdentityRecord& record, const ParamMap& given, std::span<const SeqIndex> j_values,
                              unsigned B);
TrendReport check_limit_trend(std::string_view id, const ParamMap& given, std::span<const SeqIndex> j_values,
                              unsigned B);
RecordResult trend_result(const IdentityRecord& record, const TrendReport& trend, unsigned B);

/// Every non-limit record at default parameters, ordered by id. Never throws for a single record.
std::vector<RecordResult> verify_all(const Registry& registry, unsigned B, const FixedInterval& tol,
                                     unsigned threads = 0);
/// verify_all plus the limit-trend records (j = 1..4), ordered by id.
std::vector<RecordResult> full_report(const Registry& registry, unsigned B, const FixedInterval& tol,
                                      unsigned threads = 0);

/// "2^-k" such that the distance is below it, or "0".
std::string distance_bound_text(const BigInt& ulps, unsigned frac_bits);

}  // namespace arctelescope
