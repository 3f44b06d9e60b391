// Runs every acceptance check once with pinned tolerances and prints one line per check.
// Exit status 0 only when all of them pass.

#include <cstdio>
#include <iostream>

#include "checks.hpp"

using namespace hypreg;
using namespace hypreg::checks;

namespace {

void line(const CheckResult &r) {
  std::printf("criterion %d %s | %s | %s | threshold %s | %.1f s\n", r.criterion, r.pass ? "PASS" : "FAIL", r.name.c_str(),
              r.measured.c_str(), r.threshold.c_str(), r.seconds);
  std::fflush(stdout);
}

} // namespace

int main() {
  CheckOptions o;
  o.tol_path = 1e-12;
  o.tol_surface = 1e-8;
  o.seed = 20240601;
  o.instances = 100;

  const HyperellipticModel g2 = standard_model(), g1 = genus_one_model();
  std::vector<CheckResult> results;
  auto run = [&](auto &&f) {
    try {
      results.push_back(f());
    } catch (const std::exception &e) {
      CheckResult r;
      r.criterion = static_cast<int>(results.size()) + 1;
      r.name = "exception";
      r.measured = e.what();
      r.threshold = "-";
      results.push_back(r);
    }
    line(results.back());
  };

  run([&] { return check_basic_properties({{"genus 1", &g1}, {"genus 2", &g2}}, o); });
  RegulatorSetup s = standard_setup(g2, o, o.tol_surface);
  run([&] { return check_disc_lemma(s); });
  run([&] { return check_rabi(o, 250); });
  run([&] { return check_carlson(o); });
  run([&] { return check_curve_analytics(g2, o); });
  run([&] { return check_main_theorem(s, 4); });
  run([&] { return check_colombo(s, 2); });
  run([&] { return check_modular(210, 100); });
  run([&] { return check_decomposable(s); });

  int failed = 0;
  for (auto &r : results) failed += !r.pass;
  std::printf("%d/%zu criteria pass\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
