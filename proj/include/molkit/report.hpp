#pragma once

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace molkit {

// Structured check report: every failure carries a witness string with exact
// rationals; no decimal rendering anywhere.
struct Check {
  enum Status { kPass, kFail, kInconclusive };
  std::string name;
  Status status = kPass;
  std::string witness;
};

struct Report {
  std::string command;
  std::vector<Check> checks;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void pass(std::string name, std::string witness = "") {
    checks.push_back({std::move(name), Check::kPass, std::move(witness)});
  }
  void fail(std::string name, std::string witness) {
    checks.push_back({std::move(name), Check::kFail, std::move(witness)});
  }
  void inconclusive(std::string name, std::string witness) {
    checks.push_back({std::move(name), Check::kInconclusive, std::move(witness)});
  }
  void add(std::string name, bool ok, std::string witness = "") {
    if (ok)
      pass(std::move(name), std::move(witness));
    else
      fail(std::move(name), witness.empty() ? "check failed" : std::move(witness));
  }

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.status == Check::kFail) return false;
    return true;
  }
  int exit_code() const { return all_pass() ? 0 : 1; }

  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 started)
        .count();
  }

  std::string text() const {
    std::ostringstream os;
    os << "# " << command << "\n";
    for (const auto& c : checks) {
      const char* tag = c.status == Check::kPass          ? "pass"
                        : c.status == Check::kFail        ? "FAIL"
                                                          : "inconclusive";
      os << "[" << tag << "] " << c.name;
      if (!c.witness.empty()) os << "  -- " << c.witness;
      os << "\n";
    }
    os << (all_pass() ? "ok" : "FAILED") << " (" << checks.size() << " checks, " << elapsed_ms()
       << " ms)\n";
    return os.str();
  }

  std::string json() const {
    nlohmann::json j;
    j["command"] = command;
    j["elapsed_ms"] = elapsed_ms();
    j["ok"] = all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json jc;
      jc["name"] = c.name;
      jc["status"] = c.status == Check::kPass          ? "pass"
                     : c.status == Check::kFail        ? "fail"
                                                       : "inconclusive";
      if (!c.witness.empty()) jc["witness"] = c.witness;
      j["checks"].push_back(jc);
    }
    return j.dump(2) + "\n";
  }

  int emit(bool as_json) const {
    std::cout << (as_json ? json() : text());
    return exit_code();
  }
};

}  // namespace molkit
