#include <algorithm>
#include <cstring>

#include "doctest.h"
#include "qresum/verify.hpp"

using namespace qresum;

namespace {

bool same_bits(Complex a, Complex b) { return std::memcmp(&a, &b, sizeof(Complex)) == 0; }

}  // namespace

TEST_CASE("registry lists every suite") {
  std::vector<std::string> ids;
  for (const auto& s : suites()) ids.push_back(s.id);
  const std::vector<std::string> expected = {"lemma21",          "pq_identities",       "table1",
                                             "blpower",          "sw_orthogonality",    "uq_crossrep",
                                             "uq_ode_wronskian", "connection_infinity", "connection_confluent",
                                             "stokes_differences", "stokes_monodromy",  "error_bounds",
                                             "recurrences_cf",   "appendix"};
  CHECK(ids == expected);
  CHECK(suite_info("stokes_differences").difference);
  CHECK_FALSE(suite_info("lemma21").difference);
  try {
    run_suite("bogus", QContext::make(0.5));
    FAIL("expected UnknownSuite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownSuite);
  }
}

TEST_CASE("blpower and table1 suites pass") {
  const auto ctx = QContext::make(0.5);
  for (const char* id : {"blpower", "table1"}) {
    const auto r = run_suite(id, ctx);
    CHECK(r.summary.failed == 0);
    CHECK(r.summary.passed == static_cast<int>(r.reports.size()));
    CHECK(r.summary.passed > 0);
    for (const auto& [name, worst] : r.summary.worst_rel) CHECK_MESSAGE(worst < 1e-8, name);
  }
  // Row 8 is only checked for the E and theta kinds.
  for (const auto& rep : run_suite("table1", ctx).reports) {
    if (rep.identity_id == "table1.row8") CHECK(rep.point.real("kind") != 2.0);
  }
}

TEST_CASE("reports are bit-identical across runs and thread counts") {
  const auto ctx = QContext::make(0.5);
  const auto serial = run_suite("stokes_monodromy", ctx, {1, {}});
  const auto parallel = run_suite("stokes_monodromy", ctx, {4, {}});
  REQUIRE(serial.reports.size() == parallel.reports.size());
  for (std::size_t i = 0; i < serial.reports.size(); ++i) {
    const auto& a = serial.reports[i];
    const auto& b = parallel.reports[i];
    CHECK(a.identity_id == b.identity_id);
    CHECK(same_bits(a.lhs, b.lhs));
    CHECK(same_bits(a.rhs, b.rhs));
    CHECK(a.point.entries().size() == b.point.entries().size());
  }
}

TEST_CASE("difference suites cap q and say so") {
  const auto ctx = QContext::make(0.5);
  const auto r = run_suite("stokes_differences", ctx, {0, {0.5}});
  REQUIRE(r.summary.notes.size() == 1);
  CHECK(r.summary.notes[0].find("0.05") != std::string::npos);
  CHECK(r.summary.failed == 0);
  for (const auto& rep : r.reports) CHECK(rep.point.real("q") == kDifferenceQMax);

  const auto s = run_suite("lemma21", ctx, {0, {0.6}});
  CHECK(s.summary.notes.empty());
  for (const auto& rep : s.reports) CHECK(rep.point.real("q") == 0.6);

  const auto g = run_suite("blpower", ctx, {0, {0.2, 0.4}});
  CHECK(g.summary.failed == 0);
  CHECK(g.reports.front().point.real("q") == 0.2);
  CHECK(g.reports.back().point.real("q") == 0.4);
}

TEST_CASE("errors inside a check become failed reports") {
  // With a tiny term budget the series engines give up.
  const auto ctx = QContext::make(0.5, 1e-12, 64);
  const auto r = run_suite("connection_confluent", ctx, {1, {}});
  CHECK(r.summary.failed > 0);
  const auto bad = std::find_if(r.reports.begin(), r.reports.end(), [](const auto& x) { return !x.pass; });
  REQUIRE(bad != r.reports.end());
  CHECK_FALSE(bad->note.empty());
}
