#ifndef QMT_SELFTEST_HPP
#define QMT_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qmt {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;  // failure description or short stats
};

// Property suites shared by `qmt selftest` and the test binaries. Each is
// deterministic under the given seed.
std::vector<SuiteResult> selftest_quantale(std::uint64_t seed);
std::vector<SuiteResult> selftest_semantics(std::uint64_t seed);
std::vector<SuiteResult> selftest_distance(std::uint64_t seed);
std::vector<SuiteResult> selftest_certify(std::uint64_t seed);
std::vector<SuiteResult> selftest_cartesian(std::uint64_t seed);
std::vector<SuiteResult> selftest_all(std::uint64_t seed);

/// Named scope dispatch; throws on unknown scope.
std::vector<SuiteResult> run_selftest(const std::string& scope, std::uint64_t seed);

}  // namespace qmt

#endif
