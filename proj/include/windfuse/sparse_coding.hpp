#pragma once

#include "windfuse/types.hpp"

namespace windfuse {

struct CostBreakdown {
  double j_rec = 0.0;  // squared Frobenius reconstruction error
  double j_spa = 0.0;  // sum of complex magnitudes
  double total = 0.0;  // j_rec + lambda * j_spa
};

struct LipschitzStep {
  double lipschitz = 0.0;  // largest eigenvalue of D^H D
  double step = 0.0;       // 1 / lipschitz
};

struct SolverOptions {
  bool early_exit = true;
  double early_exit_tol = 1e-9;
  int num_threads = 1;
  // Columns are solved in fixed-size chunks so results do not depend on the
  // thread count.
  int column_chunk = 64;
};

/// Largest eigenvalue of D^H D by power iteration (deterministic all-ones
/// start, 200 iterations max, 1e-8 relative tolerance) and the matching
/// gradient step 1/L. Falls back to the Frobenius-norm upper bound on
/// stagnation. Throws on an all-zero dictionary.
LipschitzStep lipschitz_step(const CMat& dict);

/// Elementwise complex magnitude shrinkage: z -> (1 - tau/max(|z|, tau)) z.
/// Entries with |z| <= tau map to exactly zero; phase is preserved.
CMat complex_soft_threshold(const CMat& z, double tau);

/// Accelerated proximal gradient solve of the l1-regularised reconstruction
/// problem for a fixed dictionary, run for `iterations` steps from
/// `warm_start` (with the pre-start iterate equal to the warm start).
CMat sparse_code(const CMat& spectrum, const CMat& dict, double lambda,
                 const CMat& warm_start, int iterations,
                 const SolverOptions& opts = {});

CostBreakdown evaluate_cost(const CMat& spectrum, const CMat& dict,
                            const CMat& code, double lambda);

}  // namespace windfuse
