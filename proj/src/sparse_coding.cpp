#include "windfuse/sparse_coding.hpp"

#include <algorithm>
#include <cmath>

#include "windfuse/parallel.hpp"

namespace windfuse {

LipschitzStep lipschitz_step(const CMat& dict) {
  if (dict.size() == 0 || dict.squaredNorm() == 0.0)
    throw ValidationError("lipschitz_step: all-zero dictionary");

  const Eigen::Index n = dict.cols();
  CVec v = CVec::Constant(n, Complex(1.0, 0.0));
  v /= v.norm();

  constexpr int kMaxIters = 200;
  constexpr double kRelTol = 1e-8;
  double eig = 0.0;
  bool converged = false;
  CVec w(n);
  for (int i = 0; i < kMaxIters; ++i) {
    w.noalias() = dict.adjoint() * (dict * v);
    const double next = w.dot(v).real() / v.squaredNorm();
    const double wn = w.norm();
    if (wn == 0.0) break;  // start vector landed in the null space
    v = w / wn;
    if (i > 0 && std::abs(next - eig) <= kRelTol * std::max(next, 1e-300)) {
      eig = next;
      converged = true;
      break;
    }
    eig = next;
  }
  LipschitzStep out;
  // Frobenius bound keeps the step valid if the iteration stagnated.
  out.lipschitz = (converged && eig > 0.0) ? eig : dict.squaredNorm();
  out.step = 1.0 / out.lipschitz;
  return out;
}

CMat complex_soft_threshold(const CMat& z, double tau) {
  if (tau < 0.0) throw ValidationError("complex_soft_threshold: negative threshold");
  return z.unaryExpr([tau](const Complex& v) {
    const double mag = std::abs(v);
    if (mag <= tau) return Complex(0.0, 0.0);
    return v * (1.0 - tau / mag);
  });
}

namespace {

// Accelerated proximal gradient iterations on one block of columns.
// Iterate count and extrapolation schedule follow the fixed w_i = i/(i+1)
// rule; no restarts.
void solve_block(const Eigen::Ref<const CMat>& s, const CMat& dict, double lambda,
                 double mu, int iterations, const SolverOptions& opts,
                 Eigen::Ref<CMat> code) {
  const Eigen::Index cols = s.cols();
  CMat c_prev2 = code;  // C_{i-2}; starts at the warm start
  CMat c_prev = code;   // C_{i-1}
  CMat gamma(code.rows(), cols);
  CMat residual(s.rows(), cols);
  CMat z(code.rows(), cols);
  const double tau = mu * lambda;

  for (int i = 1; i <= iterations; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(i + 1);
    gamma = c_prev + w * (c_prev - c_prev2);
    residual.noalias() = dict * gamma;
    residual -= s;
    z = gamma;
    z.noalias() -= mu * (dict.adjoint() * residual);
    CMat c = z.unaryExpr([tau](const Complex& v) {
      const double mag = std::abs(v);
      if (mag <= tau) return Complex(0.0, 0.0);
      return v * (1.0 - tau / mag);
    });
    if (opts.early_exit) {
      const double change = (c - c_prev).norm();
      const double scale = std::max(c.norm(), 1e-30);
      if (change / scale < opts.early_exit_tol) {
        c_prev2 = c_prev;
        c_prev = std::move(c);
        break;
      }
    }
    c_prev2 = std::move(c_prev);
    c_prev = std::move(c);
  }
  code = c_prev;
}

}  // namespace

CMat sparse_code(const CMat& spectrum, const CMat& dict, double lambda,
                 const CMat& warm_start, int iterations,
                 const SolverOptions& opts) {
  if (dict.rows() != spectrum.rows())
    throw ValidationError("sparse_code: dictionary/spectrum row mismatch");
  if (warm_start.rows() != dict.cols() || warm_start.cols() != spectrum.cols())
    throw ValidationError("sparse_code: warm start has wrong shape");
  if (iterations < 1) throw ValidationError("sparse_code: iterations must be >= 1");
  if (lambda < 0.0) throw ValidationError("sparse_code: negative lambda");
  if (!spectrum.allFinite() || !dict.allFinite() || !warm_start.allFinite())
    throw ValidationError("sparse_code: non-finite input");

  const auto [lipschitz, mu] = lipschitz_step(dict);
  (void)lipschitz;

  CMat code = warm_start;
  const Eigen::Index cols = spectrum.cols();
  const Eigen::Index chunk = std::max<Eigen::Index>(1, opts.column_chunk);
  const auto num_chunks = static_cast<std::size_t>((cols + chunk - 1) / chunk);
  parallel_for(num_chunks, opts.num_threads, [&](std::size_t ci) {
    const Eigen::Index begin = static_cast<Eigen::Index>(ci) * chunk;
    const Eigen::Index width = std::min(chunk, cols - begin);
    solve_block(spectrum.middleCols(begin, width), dict, lambda, mu, iterations,
                opts, code.middleCols(begin, width));
  });
  return code;
}

CostBreakdown evaluate_cost(const CMat& spectrum, const CMat& dict,
                            const CMat& code, double lambda) {
  if (dict.rows() != spectrum.rows() || code.rows() != dict.cols() ||
      code.cols() != spectrum.cols())
    throw ValidationError("evaluate_cost: dimension mismatch");
  CostBreakdown out;
  out.j_rec = (spectrum - dict * code).squaredNorm();
  out.j_spa = code.cwiseAbs().sum();
  out.total = out.j_rec + lambda * out.j_spa;
  return out;
}

}  // namespace windfuse
