#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rotkit {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  long precision_bits = 128;
};

struct SuiteResult {
  std::string name;
  std::string description;
  bool passed = false;
  std::uint64_t checks = 0;
  std::vector<std::string> failures;  // first few only
  std::string note;
  double seconds = 0.0;
};

struct SuiteInfo {
  std::string name;
  std::string description;
};

// Invariant suites, in run order.
std::vector<SuiteInfo> suite_catalog();
// Throws InvalidArgument for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts = {});

struct CriterionResult {
  std::string id;  // "1" .. "8"; criterion 7 is split into "7a" and "7b"
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id, const VerifyOptions& opts = {});
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts = {});

// "PASS [7a] title :: detail (1.23 s)"
std::string format_line(const CriterionResult& r);

}  // namespace rotkit
