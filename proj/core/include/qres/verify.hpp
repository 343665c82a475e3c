#pragma once

#include <string>
#include <vector>

namespace qres::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double elapsed_ms = 0.0;
};

struct ChecksumRecord {
  std::string file;
  std::string computed;
  std::string expected;
  bool match = false;
};

struct Report {
  std::vector<ChecksumRecord> checksums;
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  double total_ms = 0.0;
};

// Runs the acceptance criteria against the shipped fixture (all nine when
// `which` is empty, otherwise the listed ids). Missing fixture files raise
// io_error("fixture not found: ...").
Report run_all(const std::string& fixture_dir, const std::vector<int>& which = {});

std::string report_to_json(const Report& report);

// QRES_FIXTURES, then the source-tree default when it exists, then
// "./fixtures".
std::string resolve_fixture_dir();

}  // namespace qres::verify
