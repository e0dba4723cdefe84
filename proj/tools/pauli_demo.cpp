// Walks through the Z/X qubit example: complementarity, the critical
// inconclusiveness, and the encryption error on either side of it.

#include <cstdio>

#include "qcomp/qcomp.hpp"

int main() {
  using namespace qcomp;
  const MeasurementAssemblage zx = pauli_zx();

  const ComplementarityReport cp = c_povm(zx, {}, true);
  std::printf("C_POVM(Z, X)        = %.3e  (complementary: %s)\n", cp.value, cp.is_complementary ? "yes" : "no");
  std::printf("eta* over tuples    = %.10f\n", cp.eta_star_overall.value_or(0.0));

  const PauliExampleReport ex = pauli_example();
  std::printf("alpha_max           = %.10f\n", ex.alpha_max);
  std::printf("eta_min             = %.10f\n", ex.eta_min);
  std::printf("success at eta_min  = %.10f\n", ex.success);
  for (const auto& c : ex.cases)
    std::printf("  pi %-18s optimal error %.2e, closed form %.2e\n", c.pi.to_string().c_str(), c.optimal_error,
                c.closed_form.error);

  for (double eta : {0.0, 0.5, ex.eta_min, 0.95}) {
    const EncryptionResult r = p_error_encrypt({zx, eta});
    std::printf("eta %.4f: error %.3e  success %.4f  waive %.4f\n", eta, r.error, r.success, r.waive);
  }

  const IncompatibilityResult iw = incompatibility_weight(zx);
  std::printf("incompatibility weight = %.6f\n", iw.weight);
  return 0;
}
