// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <string>

#include "qcomp/qcomp.hpp"

using namespace qcomp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  bool pass = true;
  std::size_t assertions = 0;
  std::size_t failures = 0;
  double seconds = 0.0;
  std::string detail;
};

}  // namespace

int main() {
  Settings settings;
  settings.audit = std::make_shared<sdp::SolveAudit>();
  const std::uint64_t seed = 1;
  std::map<int, Line> lines;
  std::map<int, std::string> titles;
  const auto start = Clock::now();

  for (const auto& suite : verify::suites()) {
    Line& line = lines[suite.criterion];
    titles[suite.criterion] += (titles[suite.criterion].empty() ? "" : " / ") + suite.title;
    const auto t0 = Clock::now();
    CheckReport rep;
    try {
      rep = suite.run(seed, settings);
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail += " " + suite.name + " threw: " + e.what();
      continue;
    }
    const double dt = seconds_since(t0);
    line.seconds += dt;
    line.assertions += rep.assertions.size();
    line.failures += rep.failures();
    if (!rep.pass()) {
      line.pass = false;
      for (const auto& a : rep.assertions)
        if (!a.pass) {
          line.detail += " first failure [" + suite.name + "] " + a.name;
          break;
        }
    }
  }

  if (lines[1].seconds >= 5.0) {
    lines[1].pass = false;
    lines[1].detail += " runtime over 5 s";
  }
  if (lines[2].seconds >= 120.0) {
    lines[2].pass = false;
    lines[2].detail += " runtime over 2 min";
  }

  const CheckReport health = verify::solver_health(*settings.audit);
  Line& h = lines[10];
  titles[10] = "solver health";
  h.assertions = health.assertions.size();
  h.failures = health.failures();
  h.pass = health.pass();
  h.seconds = seconds_since(start);
  char buf[96];
  std::snprintf(buf, sizeof buf, " solves %zu, max gap %.3g", settings.audit->count(), settings.audit->max_gap());
  h.detail = buf;
  if (h.seconds >= 900.0) {
    h.pass = false;
    h.detail += ", total runtime over 15 min";
  }

  bool all = true;
  for (const auto& [criterion, line] : lines) {
    all = all && line.pass;
    std::printf("%s criterion %d: %s (%zu assertions, %zu failed, %.2f s)%s\n", line.pass ? "PASS" : "FAIL", criterion,
                titles[criterion].c_str(), line.assertions, line.failures, line.seconds, line.detail.c_str());
  }
  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
