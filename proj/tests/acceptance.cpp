// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. A criterion also fails when it exceeds its runtime budget.

#include <cstdio>
#include <ridgekit/verify.hpp>

using namespace ridgekit;

int main() {
  struct criterion {
    int id;
    check_result (*run)(const verify_scale&);
    double budget_seconds;
  };
  const criterion criteria[] = {
      {1, check_projector_fixed_point, 120.0}, {2, check_cesaro_identity, 120.0},
      {3, check_l1_flatness, 300.0},           {4, check_real_ridge, 300.0},
      {5, check_complex_ridge, 300.0},         {6, check_wirtinger, 60.0},
      {7, check_trig_reduction, 10.0},         {8, check_inner_product_expansion, 300.0},
      {9, check_counterexample, 60.0},         {10, check_bump_sobolev, 120.0},
      {11, check_network_emulation, 120.0},    {12, check_rate_ordering, 600.0},
  };
  verify_scale full{true};
  int failures = 0;
  for (const auto& c : criteria) {
    check_result res;
    std::string failure;
    try {
      res = c.run(full);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    bool in_time = res.seconds < c.budget_seconds;
    bool pass = failure.empty() && res.pass && in_time;
    failures += pass ? 0 : 1;
    if (!failure.empty()) {
      std::printf("FAIL %2d: exception: %s\n", c.id, failure.c_str());
      continue;
    }
    std::printf("%s %2d: %s | value %.6g %s %.6g | %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                res.name.c_str(), res.value, res.relation.c_str(), res.limit, res.seconds, c.budget_seconds,
                in_time ? "" : " OVER BUDGET");
    for (const auto& [key, value] : res.details.items()) {
      if (value.is_boolean()) {
        std::printf("         %s: %s\n", key.c_str(), value.get<bool>() ? "true" : "false");
      }
    }
  }
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
