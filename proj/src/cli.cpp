#include "arctelescope/cli.hpp"

#include "arctelescope/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <iomanip>
#include <ostream>

namespace arctelescope::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr SeqIndex kTrendJ[] = {1, 2, 3, 4};

struct RunConfig {
  std::string command;
  std::string id;
  ParamMap params;
  unsigned bits = 128;
  long tol_exponent = 0;
  std::string format = "text";
};

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("parameter '" + item + "' is not of the form name=value");
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    SeqIndex value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("parameter '" + name + "' needs an integer value, got '" + text + "'");
    }
    out[name] = value;
  }
  return out;
}

unsigned digits_for(unsigned bits) { return decimal_digits_for_bits(bits); }

std::string lo_text(const FixedInterval& x) { return to_decimal(x.lo, x.frac_bits, digits_for(x.frac_bits), Rounding::Down); }
std::string hi_text(const FixedInterval& x) { return to_decimal(x.hi, x.frac_bits, digits_for(x.frac_bits), Rounding::Up); }
std::string enclosure(const FixedInterval& x) { return "[" + lo_text(x) + ", " + hi_text(x) + "]"; }

FixedInterval tolerance(const RunConfig& cfg) { return iv_pow2(cfg.tol_exponent, cfg.bits); }

ordered_json entry_json(const RecordResult& r) {
  ordered_json e;
  e["id"] = r.id;
  e["source"] = r.source;
  e["params"] = r.params;
  e["bits"] = r.bits;
  e["terms_used"] = r.terms_used;
  const bool have = r.lhs.frac_bits != 0;
  e["lhs_lo"] = have ? lo_text(r.lhs) : "";
  e["lhs_hi"] = have ? hi_text(r.lhs) : "";
  e["rhs_lo"] = r.rhs.frac_bits != 0 ? lo_text(r.rhs) : "";
  e["rhs_hi"] = r.rhs.frac_bits != 0 ? hi_text(r.rhs) : "";
  e["validity_flags"] = r.validity_flags;
  e["status"] = std::string(to_string(r.status));
  e["notes"] = r.notes;
  return e;
}

bool all_pass(const std::vector<RecordResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const RecordResult& r) { return r.status != Status::Fail; });
}

std::string distance_text(const RecordResult& r) {
  if (r.lhs.frac_bits == 0 || r.rhs.frac_bits == 0) return "-";
  return "< " + distance_bound_text(hausdorff_ulps(r.lhs, r.rhs) + 1, r.bits);
}

void print_table(const std::vector<RecordResult>& results, std::ostream& out) {
  out << std::left << std::setw(26) << "id" << std::setw(16) << "status" << std::setw(7) << "terms" << std::setw(12)
      << "distance" << "lhs" << '\n';
  for (const RecordResult& r : results) {
    out << std::setw(26) << r.id << std::setw(16) << to_string(r.status) << std::setw(7) << r.terms_used
        << std::setw(12) << distance_text(r)
        << (r.lhs.frac_bits != 0 ? to_decimal(r.lhs.lo, r.bits, 20, Rounding::Down) + "..." : std::string("-")) << '\n';
  }
  std::size_t passed = 0;
  for (const RecordResult& r : results) passed += r.status != Status::Fail;
  out << passed << "/" << results.size() << " records pass\n";
  bool header = false;
  for (const RecordResult& r : results) {
    if (r.notes.empty()) continue;
    if (!header) out << "\nnotes:\n";
    header = true;
    for (const std::string& n : r.notes) out << "  " << r.id << ": " << n << '\n';
  }
}

void print_sum(const SumReport& s, std::ostream& out) {
  out << "terms used: " << s.terms_used() << " (r = " << s.first << ".." << s.last << ")\n";
  out << "per-term validity:";
  for (std::size_t i = 0; i < s.validity.size(); ++i) {
    out << (i % 8 == 0 ? "\n  " : " ") << "r=" << s.first + static_cast<SeqIndex>(i) << ":"
        << (s.validity[i] == Validity::Ok ? "ok" : "VIOLATED");
  }
  out << '\n';
  out << "partial sum:  " << enclosure(s.partial) << '\n';
  out << "remainder:    " << enclosure(s.remainder) << '\n';
  out << "total:        " << enclosure(s.total) << '\n';
  out << "closed form:  " << enclosure(s.closed) << '\n';
  out << "total vs closed form: distance < " << distance_bound_text(s.distance_ulps + 1, s.bits)
      << ", budget " << (s.last - s.first + 3) * 64 << " ulps, " << (s.consistent() ? "consistent" : "INCONSISTENT")
      << '\n';
}

int emit_results(const RunConfig& cfg, const std::vector<RecordResult>& results, std::ostream& out) {
  if (cfg.format == "json") {
    out << json_document(results, cfg.bits) << '\n';
  } else {
    print_table(results, out);
  }
  return all_pass(results) ? kPass : kFailure;
}

int cmd_list(const Registry& registry, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    ordered_json doc;
    doc["version"] = kVersion;
    doc["records"] = ordered_json::array();
    for (const IdentityRecord& r : registry.records()) {
      ordered_json e;
      e["id"] = r.id;
      e["source"] = r.source;
      e["identity"] = r.identity;
      ordered_json ps = ordered_json::object();
      for (const ParamSpec& p : r.free_params) ps[p.name] = p.default_value;
      e["params"] = ps;
      e["limit"] = r.is_limit;
      doc["records"].push_back(e);
    }
    out << doc.dump(2) << '\n';
    return kPass;
  }
  for (const IdentityRecord& r : registry.records()) {
    out << r.id << (r.is_limit ? "  [limit]" : "") << '\n';
    out << "    " << r.identity << '\n';
    out << "    from: " << r.source << '\n';
    if (!r.free_params.empty()) {
      out << "    params:";
      for (const ParamSpec& p : r.free_params) out << ' ' << p.name << '=' << p.default_value;
      out << '\n';
    }
  }
  return kPass;
}

void print_trend(const TrendReport& trend, std::ostream& out) {
  out << "limit: " << enclosure(trend.limit) << '\n';
  for (const TrendEntry& e : trend.entries) {
    out << "j=" << e.j << "  terms " << e.sum.terms_used() << "  sum " << enclosure(e.lhs) << '\n'
        << "      |sum - limit| in [" << to_decimal(e.deviation.lo, e.deviation.frac_bits, 20, Rounding::Down) << ", "
        << to_decimal(e.deviation.hi, e.deviation.frac_bits, 20, Rounding::Up) << "]\n";
  }
  out << "sums consistent: " << (trend.sums_consistent ? "yes" : "no") << '\n';
  out << "deviation strictly decreasing: " << (trend.strictly_decreasing ? "yes" : "no") << '\n';
  if (trend.limit_attained) out << "limit attained exactly at every j\n";
}

int cmd_verify(const Registry& registry, const RunConfig& cfg, std::ostream& out) {
  if (cfg.id.empty()) return emit_results(cfg, full_report(registry, cfg.bits, tolerance(cfg)), out);
  const IdentityRecord& record = registry.find(cfg.id);
  if (record.is_limit) {
    ParamMap given = cfg.params;
    if (given.count("j")) throw UsageError("limit records sweep j themselves; do not pass j");
    const TrendReport trend = check_limit_trend(record, given, kTrendJ, cfg.bits);
    const RecordResult result = trend_result(record, trend, cfg.bits);
    if (cfg.format == "json") return emit_results(cfg, {result}, out);
    out << "id: " << record.id << '\n' << "identity: " << record.identity << '\n' << "from: " << record.source << '\n';
    out << "params: " << result.params << '\n' << "bits: " << cfg.bits << '\n';
    print_trend(trend, out);
    out << "status: " << to_string(result.status) << '\n';
    return result.status == Status::Fail ? kFailure : kPass;
  }
  // Constraint violations surface as exit 3 before any summation happens.
  validate_spec(instantiate(record, cfg.params).spec);
  const RecordResult result = verify_record(record, cfg.params, cfg.bits, tolerance(cfg));
  if (cfg.format == "json") return emit_results(cfg, {result}, out);
  out << "id: " << record.id << '\n' << "identity: " << record.identity << '\n' << "from: " << record.source << '\n';
  out << "params: " << result.params << '\n';
  out << "bits: " << cfg.bits << "  tolerance: 2^" << cfg.tol_exponent << '\n';
  if (result.sum) print_sum(*result.sum, out);
  out << "lhs (printed sum): " << (result.lhs.frac_bits ? enclosure(result.lhs) : "-") << '\n';
  const Instance inst = instantiate(record, cfg.params);
  out << "rhs " << inst.rhs.describe() << ": " << (result.rhs.frac_bits ? enclosure(result.rhs) : "-") << '\n';
  out << "lhs vs rhs: distance " << distance_text(result) << '\n';
  for (const std::string& n : result.notes) out << "note: " << n << '\n';
  out << "status: " << to_string(result.status) << '\n';
  return result.status == Status::Fail ? kFailure : kPass;
}

SeqIndex param_or(const ParamMap& ps, const char* name, SeqIndex fallback) {
  auto it = ps.find(name);
  return it == ps.end() ? fallback : it->second;
}

SeriesSpec raw_spec(const ParamMap& ps) {
  static const char* const kNames[] = {"m", "n", "p", "g0", "g1", "lam_num", "lam_den", "lam_rad"};
  for (const auto& entry : ps) {
    const std::string& name = entry.first;
    if (std::find_if(std::begin(kNames), std::end(kNames), [&](const char* k) { return name == k; }) == std::end(kNames)) {
      throw UsageError("unknown lemma parameter '" + name + "'");
    }
  }
  const SeqIndex g0 = param_or(ps, "g0", 0), g1 = param_or(ps, "g1", 1);
  SeqFamily family = SeqFamily::general(g0, g1);
  if (g0 == 0 && g1 == 1) family = SeqFamily::fibonacci();
  if (g0 == 2 && g1 == 1) family = SeqFamily::lucas();
  const SeqIndex lam_den = param_or(ps, "lam_den", 1), lam_rad = param_or(ps, "lam_rad", 1);
  if (lam_den <= 0) throw ConstraintError("lam_den must be positive");
  if (lam_rad <= 0) throw ConstraintError("lam_rad must be positive");
  const Surd lambda = surd_make(make_rational(param_or(ps, "lam_num", 1), lam_den), lam_rad);
  SeriesSpec spec = make_lemma_spec(family, param_or(ps, "m", 1), param_or(ps, "n", 0), param_or(ps, "p", 1), lambda);
  validate_spec(spec);
  return spec;
}

int cmd_sum(const Registry& registry, const RunConfig& cfg, std::ostream& out) {
  SeriesSpec spec;
  int orientation = 1;
  std::string label;
  if (cfg.id.empty()) {
    spec = raw_spec(cfg.params);
    label = "lemma series";
  } else {
    const Instance inst = instantiate(registry.find(cfg.id), cfg.params);
    validate_spec(inst.spec);
    spec = inst.spec;
    orientation = inst.orientation;
    label = cfg.id + " (" + to_string(inst.params) + ")";
  }
  const SumReport s = sum_series(spec, cfg.bits, tolerance(cfg));
  const FixedInterval lhs = orientation < 0 ? -s.total : s.total;
  if (cfg.format == "json") {
    ordered_json doc;
    doc["version"] = kVersion;
    doc["bits"] = cfg.bits;
    doc["series"] = spec.describe();
    doc["terms_used"] = s.terms_used();
    doc["partial_lo"] = lo_text(s.partial);
    doc["partial_hi"] = hi_text(s.partial);
    doc["total_lo"] = lo_text(lhs);
    doc["total_hi"] = hi_text(lhs);
    doc["closed_lo"] = lo_text(s.closed);
    doc["closed_hi"] = hi_text(s.closed);
    doc["orientation"] = orientation;
    doc["consistent"] = s.consistent();
    out << doc.dump(2) << '\n';
  } else {
    out << label << '\n' << spec.describe() << '\n' << "bits: " << cfg.bits << "  tolerance: 2^" << cfg.tol_exponent
        << '\n';
    print_sum(s, out);
    if (orientation < 0) out << "printed sum (negated theorem total): " << enclosure(lhs) << '\n';
  }
  return s.consistent() ? kPass : kFailure;
}

std::string common_prefix(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return a.substr(0, i);
}

std::size_t digit_count(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }));
}

int cmd_pi(const Registry& registry, const RunConfig& cfg, std::ostream& out) {
  if (cfg.bits < 32) throw UsageError("pi needs --bits >= 32");
  const Instance inst = instantiate(registry.find("eq11-pi4"), {});
  const SumReport s = sum_series(inst.spec, cfg.bits, tolerance(cfg));
  const FixedInterval series_pi = mul_int(s.total, 4);
  const FixedInterval machin = iv_pi(cfg.bits);
  const unsigned digits = digits_for(cfg.bits);
  const std::string series_digits = common_prefix(to_decimal(series_pi.lo, cfg.bits, digits, Rounding::Down),
                                                  to_decimal(series_pi.hi, cfg.bits, digits, Rounding::Up));
  const std::string machin_digits = common_prefix(to_decimal(machin.lo, cfg.bits, digits, Rounding::Down),
                                                  to_decimal(machin.hi, cfg.bits, digits, Rounding::Up));
  const std::string agree = common_prefix(series_digits, machin_digits);
  const FixedInterval both = hull(series_pi, machin);
  const std::string bound = distance_bound_text(both.width() + 1, cfg.bits);
  const bool ok = s.consistent() && overlaps(series_pi, machin);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["version"] = kVersion;
    doc["bits"] = cfg.bits;
    doc["pi"] = series_digits;
    doc["certified_digits"] = digit_count(series_digits);
    doc["terms_used"] = s.terms_used();
    doc["series_lo"] = lo_text(series_pi);
    doc["series_hi"] = hi_text(series_pi);
    doc["machin_lo"] = lo_text(machin);
    doc["machin_hi"] = hi_text(machin);
    doc["agreeing_digits"] = digit_count(agree);
    doc["discrepancy_bound"] = bound;
    out << doc.dump(2) << '\n';
  } else {
    out << "pi = " << series_digits << "...\n";
    out << "certified digits: " << digit_count(series_digits) << " (4 x sum_{r>=1} atan(L_{4r}/F_{4r}^2), "
        << s.terms_used() << " terms plus exact remainder)\n";
    out << "series enclosure: " << enclosure(series_pi) << '\n';
    out << "Machin enclosure: " << enclosure(machin) << '\n';
    out << "digits agreeing with Machin: " << digit_count(agree) << '\n';
    out << "discrepancy bound: < " << bound << '\n';
  }
  return ok ? kPass : kFailure;
}

int dispatch(const Registry& registry, const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "list") return cmd_list(registry, cfg, out);
  if (cfg.command == "verify") return cmd_verify(registry, cfg, out);
  if (cfg.command == "sum") return cmd_sum(registry, cfg, out);
  if (cfg.command == "pi") return cmd_pi(registry, cfg, out);
  return emit_results(cfg, full_report(registry, cfg.bits, tolerance(cfg)), out);
}

}  // namespace

std::string json_document(const std::vector<RecordResult>& results, unsigned bits) {
  ordered_json doc;
  doc["version"] = kVersion;
  doc["bits"] = bits;
  doc["entries"] = ordered_json::array();
  for (const RecordResult& r : results) doc["entries"].push_back(entry_json(r));
  return doc.dump(2);
}

int run(const Registry& registry, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified evaluation of Fibonacci/Lucas arctangent series", "arctelescope"};
  RunConfig cfg;
  std::string id_option;
  std::vector<std::string> param_items;
  std::optional<long> tol_exp;
  app.add_option("command", cfg.command, "list, verify, sum, pi or report")
      ->required()
      ->check(CLI::IsMember({"list", "verify", "sum", "pi", "report"}));
  app.add_option("identity", cfg.id, "identity id (same as --id)");
  app.add_option("--id", id_option, "identity id");
  app.add_option("--param", param_items, "parameter assignment name=value")->take_all();
  app.add_option("--bits", cfg.bits, "fractional bits of the fixed-point enclosures")->check(CLI::Range(16U, 1U << 16));
  app.add_option("--tol-exp", tol_exp, "truncation tolerance exponent E, tol = 2^E");
  app.add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> argv_store{"arctelescope"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (!id_option.empty()) {
      if (!cfg.id.empty() && cfg.id != id_option) throw UsageError("conflicting identity ids");
      cfg.id = id_option;
    }
    cfg.params = parse_params(param_items);
    cfg.tol_exponent = tol_exp.value_or(-std::max(static_cast<long>(cfg.bits) - 16, 1L));
    if (cfg.tol_exponent >= 0) throw UsageError("--tol-exp must be negative");
    if ((cfg.command == "list" || cfg.command == "report" || cfg.command == "pi") && !cfg.id.empty()) {
      throw UsageError(cfg.command + " takes no identity id");
    }
    if ((cfg.command == "list" || cfg.command == "report" || cfg.command == "pi") && !cfg.params.empty()) {
      throw UsageError(cfg.command + " takes no parameters");
    }
    return dispatch(registry, cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstraintError& e) {
    err << "constraint violation: " << e.what() << '\n';
    return kConstraint;
  } catch (const DomainError& e) {
    err << "constraint violation: " << e.what() << '\n';
    return kConstraint;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(Registry::builtin(), args, out, err);
}

}  // namespace arctelescope::cli
