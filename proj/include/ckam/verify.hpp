#pragma once

#include <string>
#include <vector>

namespace ckam {

/** @brief One named property check with its worst observed error. */
struct VerifyCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0;   ///< worst-case error or deviation over all samples
  std::string detail;   ///< human-readable context (tolerances, counts)
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  [[nodiscard]] bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/** @brief dalpha(a,b) = Omega(v,a,b) for both models at seeded random triples. */
VerifyReport verify_forms(unsigned seed, int n_points = 1000);

/** @brief FD curl v vs v and FD div v for Q-flows q in {4,5}, eps in {0.15, 0.5}. */
VerifyReport verify_beltrami_suite(unsigned seed, int n_points = 100);

/** @brief Analytic foliation gradients vs central FD, all seven kinds. */
VerifyReport verify_gradients(unsigned seed, int n_points = 1000);

/** @brief mu-halving residual exponents: s1 near 2, s2 near 3, plus the
 * deliberately singular first-order choice as a negative control. */
VerifyReport verify_residuals(unsigned seed, int n_samples = 50);

/** @brief Detector scale and flip invariance on seeded detected orbits. */
VerifyReport verify_invariances(unsigned seed, int n_orbits = 20);

/** @brief Dispatch by suite name (forms|beltrami|gradients|residuals|invariances|all). */
VerifyReport run_verify(const std::string& suite, unsigned seed);

/** @brief Print one line per check to stdout; returns 0 iff all pass. */
int print_verify_report(const VerifyReport& report);

}  // namespace ckam
