#include <cstdio>
#include <exception>

#include "qres/verify.hpp"

// Runs every acceptance criterion against the shipped fixtures and prints one
// verdict line per criterion. Exit status 0 only when everything passes,
// checksums included.
int main() {
  try {
    const qres::verify::Report report = qres::verify::run_all(QRES_FIXTURE_DIR);
    for (const auto& c : report.checksums)
      std::printf("%s checksum %s\n", c.match ? "PASS" : "FAIL", c.file.c_str());
    for (const auto& c : report.criteria)
      std::printf("%s criterion %d (%s): %s [%.1f ms]\n", c.pass ? "PASS" : "FAIL", c.id,
                  c.name.c_str(), c.details.c_str(), c.elapsed_ms);
    std::printf("%s total %.1f ms\n", report.all_pass ? "PASS" : "FAIL", report.total_ms);
    return report.all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }
}
