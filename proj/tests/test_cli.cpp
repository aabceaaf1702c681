#include "arctelescope/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <regex>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace arctelescope;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args, const Registry& registry = Registry::builtin()) {
  std::ostringstream out, err;
  const int code = cli::run(registry, args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t certified_digits(const std::string& text) {
  std::smatch m;
  EXPECT_TRUE(std::regex_search(text, m, std::regex("certified digits: (\\d+)")));
  return std::stoul(m[1]);
}

}  // namespace

TEST(CliVerify, Examples) {
  const Outcome pi4 = run_cli({"verify", "eq11-pi4", "--bits", "128"});
  EXPECT_EQ(pi4.code, cli::kPass);
  EXPECT_NE(pi4.out.find("status: pass"), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(pi4.out, m, std::regex("lhs vs rhs: distance < 2\\^(-?\\d+)")));
  EXPECT_LE(std::stol(m[1]), -100);
  EXPECT_NE(pi4.out.find("per-term validity"), std::string::npos);
  EXPECT_NE(pi4.out.find("partial sum:"), std::string::npos);
  EXPECT_NE(pi4.out.find("terms used:"), std::string::npos);

  EXPECT_EQ(run_cli({"verify", "thm1", "--param", "j=0"}).code, cli::kConstraint);

  const Outcome lehmer = run_cli({"verify", "eq24-lehmer-family", "--param", "k=1"});
  EXPECT_EQ(lehmer.code, cli::kPass);
  EXPECT_NE(lehmer.out.find("rhs atan(1 / 1)"), std::string::npos);
}

TEST(CliVerify, IdOptionEqualsPositional) {
  EXPECT_EQ(run_cli({"verify", "--id", "eq30-pi3"}).out, run_cli({"verify", "eq30-pi3"}).out);
  EXPECT_EQ(run_cli({"verify", "eq30-pi3", "--id", "eq11-pi4"}).code, cli::kUsage);
}

TEST(CliVerify, Deterministic) {
  const std::vector<std::string> args{"verify", "eq19-sqrt35", "--format", "json"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
  const std::vector<std::string> report{"report"};
  EXPECT_EQ(run_cli(report).out, run_cli(report).out);
}

TEST(CliVerify, LimitRecordRunsTrend) {
  const Outcome o = run_cli({"verify", "eq14-golden-limit"});
  EXPECT_EQ(o.code, cli::kPass);
  EXPECT_NE(o.out.find("deviation strictly decreasing: yes"), std::string::npos);
  EXPECT_EQ(run_cli({"verify", "eq14-golden-limit", "--param", "j=2"}).code, cli::kUsage);
}

TEST(CliExitCodes, Exhaustive) {
  // 0
  EXPECT_EQ(run_cli({"list"}).code, cli::kPass);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kPass);
  // 1: violated addition condition, sum off by -pi
  const Outcome bad = run_cli({"verify", "thm1", "--param", "j=-1", "--param", "k=1"});
  EXPECT_EQ(bad.code, cli::kFailure);
  EXPECT_NE(bad.out.find("violations:r=1"), std::string::npos);
  // 2
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "no-such-id"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "thm1", "--param", "j"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "thm1", "--param", "j=x"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "thm1", "--param", "zz=1"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "eq11-pi4", "--bits", "8"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "eq11-pi4", "--tol-exp", "0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "eq11-pi4", "--format", "xml"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"list", "eq11-pi4"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"pi", "--bits", "24"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"report", "--param", "j=1"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "--unknown-flag"}).code, cli::kUsage);
  // 3
  EXPECT_EQ(run_cli({"verify", "thm3", "--param", "j=0"}).code, cli::kConstraint);
  EXPECT_EQ(run_cli({"verify", "thm1", "--param", "lam_den=0"}).code, cli::kConstraint);
  EXPECT_EQ(run_cli({"verify", "eq14-golden-limit", "--param", "k=1", "--param", "j=0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"sum", "--param", "m=0"}).code, cli::kConstraint);
  EXPECT_EQ(run_cli({"sum", "eq26-pi2-family", "--param", "j=0"}).code, cli::kConstraint);
}

TEST(CliExitCodes, SixteenBitsUsesNegativeDefaultTolerance) {
  EXPECT_EQ(run_cli({"verify", "eq11-pi4", "--bits", "16"}).code, cli::kPass);
}

TEST(CliPi, Examples) {
  const Outcome p64 = run_cli({"pi", "--bits", "64"});
  EXPECT_EQ(p64.code, cli::kPass);
  EXPECT_EQ(p64.out.rfind("pi = 3.14159265358979", 0), 0U);
  EXPECT_GE(certified_digits(p64.out), 15U);
  const Outcome p32 = run_cli({"pi", "--bits", "32"});
  EXPECT_GE(certified_digits(p32.out), 6U);
  const Outcome p256 = run_cli({"pi", "--bits", "256"});
  EXPECT_GE(certified_digits(p256.out), 60U);
  EXPECT_NE(p256.out.find("Machin enclosure"), std::string::npos);
}

TEST(CliPi, DiscrepancyBoundBelowBitsMinusTwelve) {
  for (unsigned bits : {32U, 40U, 64U, 100U, 128U, 256U, 300U}) {
    const Outcome o = run_cli({"pi", "--bits", std::to_string(bits), "--format", "json"});
    ASSERT_EQ(o.code, cli::kPass);
    const auto doc = nlohmann::json::parse(o.out);
    const std::string bound = doc["discrepancy_bound"];
    ASSERT_EQ(bound.rfind("2^", 0), 0U);
    EXPECT_LE(std::stol(bound.substr(2)), -static_cast<long>(bits - 12)) << bits;
    EXPECT_GE(doc["agreeing_digits"].get<std::size_t>(), doc["certified_digits"].get<std::size_t>() - 1);
  }
}

TEST(CliReport, JsonDocument) {
  const Outcome o = run_cli({"report", "--format", "json", "--bits", "128"});
  EXPECT_EQ(o.code, cli::kPass);
  const auto doc = nlohmann::ordered_json::parse(o.out);
  EXPECT_EQ(doc["bits"], 128);
  EXPECT_TRUE(doc.contains("version"));
  const auto& entries = doc["entries"];
  EXPECT_GE(entries.size(), 25U);
  std::string prev;
  for (const auto& e : entries) {
    for (const char* field : {"id", "source", "params", "bits", "terms_used", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi",
                              "validity_flags", "status"}) {
      EXPECT_TRUE(e.contains(field)) << field;
    }
    const std::string status = e["status"];
    EXPECT_TRUE(status == "pass" || status == "pass-with-note") << e["id"];
    EXPECT_TRUE(e["lhs_lo"].is_string());
    EXPECT_LT(prev, e["id"].get<std::string>());
    prev = e["id"];
  }
}

TEST(CliReport, JsonRoundTripsByteForByte) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"report", "--format", "json"}, {"verify", "eq20-sqrt7-5", "--format", "json"},
        {"list", "--format", "json"}, {"pi", "--format", "json"}, {"sum", "thm3", "--format", "json"}}) {
    const Outcome o = run_cli(args);
    const std::string body = o.out.substr(0, o.out.size() - 1);  // trailing newline
    EXPECT_EQ(nlohmann::ordered_json::parse(o.out).dump(2), body) << args[0];
  }
}

TEST(CliReport, TextHasSamePassSet) {
  const auto doc = nlohmann::json::parse(run_cli({"report", "--format", "json"}).out);
  const Outcome text = run_cli({"report", "--format", "text"});
  std::set<std::string> json_ids, text_ids;
  for (const auto& e : doc["entries"]) json_ids.insert(e["id"].get<std::string>());
  std::istringstream lines(text.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream cols(line);
    std::string id, status;
    cols >> id >> status;
    if (status == "pass" || status == "pass-with-note") text_ids.insert(id);
  }
  EXPECT_EQ(json_ids, text_ids);
  EXPECT_NE(text.out.find("54/54 records pass"), std::string::npos);
}

TEST(CliReport, OpenQuestionNotesAppear) {
  const auto doc = nlohmann::json::parse(run_cli({"report", "--format", "json"}).out);
  bool sqrt75 = false, start = false;
  for (const auto& e : doc["entries"]) {
    for (const auto& n : e["notes"]) {
      const std::string s = n;
      if (e["id"] == "eq20-sqrt7-5" && s.find("measured sum") != std::string::npos) sqrt75 = true;
      if (e["id"] == "eq18-pi2" && s.find("using p=0") != std::string::npos) start = true;
    }
  }
  EXPECT_TRUE(sqrt75);
  EXPECT_TRUE(start);
}

TEST(CliReport, EmptyRegistry) {
  const Registry empty;
  const Outcome o = run_cli({"report", "--format", "json"}, empty);
  EXPECT_EQ(o.code, cli::kPass);
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_TRUE(doc["entries"].is_array());
  EXPECT_TRUE(doc["entries"].empty());
  EXPECT_EQ(run_cli({"report"}, empty).code, cli::kPass);
  EXPECT_EQ(run_cli({"list"}, empty).code, cli::kPass);
}

TEST(CliSum, RawLemmaAndRecord) {
  const Outcome raw = run_cli({"sum", "--param", "m=-3", "--param", "n=5", "--param", "g0=3", "--param", "g1=-2",
                               "--param", "p=2", "--bits", "96"});
  EXPECT_EQ(raw.code, cli::kPass);
  EXPECT_NE(raw.out.find("consistent"), std::string::npos);
  const Outcome rec = run_cli({"sum", "eq38-atan-sqrt5"});
  EXPECT_EQ(rec.code, cli::kPass);
  EXPECT_NE(rec.out.find("printed sum (negated theorem total)"), std::string::npos);
  EXPECT_EQ(run_cli({"sum", "--param", "g0=0", "--param", "g1=0"}).code, cli::kFailure);
}

TEST(CliList, MentionsEveryRecord) {
  const Outcome o = run_cli({"list"});
  for (const auto& r : registry_list()) EXPECT_NE(o.out.find(r.id + (r.is_limit ? "  [limit]\n" : "\n")), std::string::npos) << r.id;
}

TEST(CliBinary, ExitCodesThroughTheExecutable) {
  auto status_of = [](const std::string& args) {
    const std::string cmd = std::string(ARCTELESCOPE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status_of("verify eq11-pi4 --bits 128"), 0);
  EXPECT_EQ(status_of("verify thm1 --param j=-1 --param k=1"), 1);
  EXPECT_EQ(status_of("verify nope"), 2);
  EXPECT_EQ(status_of("verify thm1 --param j=0"), 3);
}
