#include "windfuse/fusion.hpp"

#include <cmath>
#include <utility>

namespace windfuse {

RtfDiag RtfDiag::ones(Eigen::Index bins) {
  return RtfDiag{CVec::Constant(bins, Complex(1.0, 0.0))};
}

void EnhanceConfig::validate() const {
  if (eta < 0.0 || eta > 1.0)
    throw ValidationError("enhance: eta must lie in [0, 1]");
  if (outer_iters < 1) throw ValidationError("enhance: outer_iters must be >= 1");
  if (inner_iters < 1) throw ValidationError("enhance: inner_iters must be >= 1");
}

CompositeProblem build_composite(const Spectrogram& y_a, const Spectrogram& y_b,
                                 const Dictionary& d_ax, const Dictionary& d_an,
                                 const Dictionary& d_bn, const RtfDiag& h,
                                 double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw ValidationError("build_composite: eta must lie in [0, 1]");
  const Eigen::Index f = y_a.bins();
  if (y_b.bins() != f || d_ax.bins() != f || d_an.bins() != f ||
      d_bn.bins() != f || h.h.size() != f)
    throw ValidationError("build_composite: frequency dimension mismatch");
  if (y_b.frames() != y_a.frames())
    throw ValidationError("build_composite: frame count mismatch");

  const double top = std::sqrt(eta);
  const double bottom = std::sqrt(1.0 - eta);

  CompositeProblem p;
  p.eta = eta;
  p.layout = CompositeLayout{d_ax.num_atoms(), d_an.num_atoms(), d_bn.num_atoms()};

  p.y.resize(2 * f, y_a.frames());
  p.y.topRows(f) = top * y_a.data;
  p.y.bottomRows(f) = bottom * y_b.data;

  p.dict = CMat::Zero(2 * f, p.layout.total());
  p.dict.block(0, p.layout.speech_offset(), f, p.layout.n_speech) = top * d_ax.atoms;
  p.dict.block(0, p.layout.noise_a_offset(), f, p.layout.n_noise_a) = top * d_an.atoms;
  p.dict.block(f, p.layout.speech_offset(), f, p.layout.n_speech) =
      bottom * (h.h.asDiagonal() * d_ax.atoms);
  p.dict.block(f, p.layout.noise_b_offset(), f, p.layout.n_noise_b) = bottom * d_bn.atoms;
  return p;
}

RtfDiag estimate_rtf_diagonal(const CMat& y_b, const CMat& n_b, const CMat& x_a,
                              const RtfDiag& previous) {
  const Eigen::Index f = y_b.rows();
  if (n_b.rows() != f || x_a.rows() != f || previous.h.size() != f ||
      n_b.cols() != y_b.cols() || x_a.cols() != y_b.cols())
    throw ValidationError("estimate_rtf_diagonal: dimension mismatch");

  Eigen::VectorXd speech_energy = x_a.cwiseAbs2().rowwise().sum();
  const double max_energy = speech_energy.maxCoeff();
  if (max_energy <= 0.0)
    throw ValidationError("estimate_rtf_diagonal: speech estimate is zero");

  RtfDiag out;
  out.h.resize(f);
  const double guard = 1e-12 * max_energy;
  for (Eigen::Index i = 0; i < f; ++i) {
    if (speech_energy(i) < guard) {
      out.h(i) = previous.h(i);
      continue;
    }
    const Complex num = (y_b.row(i) - n_b.row(i)).cwiseProduct(x_a.row(i).conjugate()).sum();
    out.h(i) = num / speech_energy(i);
  }
  return out;
}

namespace {

// Numerical conditioning only: solve(Y, lambda) == s * solve(Y/s, lambda/s)
// by homogeneity, so scaling in and out of the solver leaves results
// unchanged while keeping magnitudes near unity.
double entry_rms(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

double block_nonzero_fraction(const Eigen::Ref<const CMat>& block) {
  if (block.size() == 0) return 0.0;
  Eigen::Index nz = 0;
  for (Eigen::Index j = 0; j < block.cols(); ++j)
    for (Eigen::Index i = 0; i < block.rows(); ++i)
      if (block(i, j) != Complex(0.0, 0.0)) ++nz;
  return static_cast<double>(nz) / static_cast<double>(block.size());
}

}  // namespace

EnhanceReport enhance_fused(const Spectrogram& y_a, const Spectrogram& y_b,
                            const Dictionary& d_ax, const Dictionary& d_an,
                            const Dictionary& d_bn, const EnhanceConfig& cfg,
                            const RtfDiag& h0) {
  cfg.validate();
  const Eigen::Index f = y_a.bins();
  if (h0.h.size() != f)
    throw ValidationError("enhance_fused: RTF length mismatch");
  const double lambda_raw =
      cfg.lambda >= 0.0 ? cfg.lambda : default_sparsity_weight(f);

  const double scale_in = entry_rms(y_a.data);
  const double scale = scale_in > 0.0 ? scale_in : 1.0;
  Spectrogram ya_n{y_a.data / scale, y_a.config};
  Spectrogram yb_n{y_b.data / scale, y_b.config};
  const double lambda = lambda_raw / scale;

  RtfDiag h = h0;
  EnhanceReport report;
  report.cost_history.reserve(static_cast<std::size_t>(cfg.outer_iters));

  CMat code;
  CMat speech;
  CompositeLayout layout;
  for (int i = 0; i < cfg.outer_iters; ++i) {
    CompositeProblem p = build_composite(ya_n, yb_n, d_ax, d_an, d_bn, h, cfg.eta);
    layout = p.layout;
    if (code.size() == 0) code = CMat::Zero(layout.total(), p.y.cols());
    code = sparse_code(p.y, p.dict, lambda, code, cfg.inner_iters, cfg.solver);

    speech.noalias() =
        d_ax.atoms * code.middleRows(layout.speech_offset(), layout.n_speech);
    CMat noise_b =
        d_bn.atoms * code.middleRows(layout.noise_b_offset(), layout.n_noise_b);
    if (speech.squaredNorm() > 0.0)
      h = estimate_rtf_diagonal(yb_n.data, noise_b, speech, h);

    CostBreakdown cost = evaluate_cost(p.y, p.dict, code, lambda);
    cost.j_rec *= scale * scale;
    cost.j_spa *= scale;
    cost.total = cost.j_rec + lambda_raw * cost.j_spa;
    report.cost_history.push_back(cost);
  }

  report.speech = Spectrogram{scale * speech, y_a.config};
  report.rtf = std::move(h);
  report.block_nonzero_fraction = {
      block_nonzero_fraction(code.middleRows(layout.speech_offset(), layout.n_speech)),
      block_nonzero_fraction(code.middleRows(layout.noise_a_offset(), layout.n_noise_a)),
      block_nonzero_fraction(code.middleRows(layout.noise_b_offset(), layout.n_noise_b))};
  return report;
}

Spectrogram enhance_acoustic_only(const Spectrogram& y_a, const Dictionary& d_ax,
                                  const Dictionary& d_an, double lambda_in,
                                  int inner_iters, const SolverOptions& opts) {
  const Eigen::Index f = y_a.bins();
  if (d_ax.bins() != f || d_an.bins() != f)
    throw ValidationError("enhance_acoustic_only: frequency dimension mismatch");
  const double lambda_raw =
      lambda_in >= 0.0 ? lambda_in : default_sparsity_weight(f);

  const double scale_in = entry_rms(y_a.data);
  const double scale = scale_in > 0.0 ? scale_in : 1.0;

  CMat dict(f, d_ax.num_atoms() + d_an.num_atoms());
  dict.leftCols(d_ax.num_atoms()) = d_ax.atoms;
  dict.rightCols(d_an.num_atoms()) = d_an.atoms;

  CMat c0 = CMat::Zero(dict.cols(), y_a.frames());
  CMat code = sparse_code(y_a.data / scale, dict, lambda_raw / scale, c0,
                          inner_iters, opts);
  CMat speech = d_ax.atoms * code.topRows(d_ax.num_atoms());
  return Spectrogram{scale * speech, y_a.config};
}

EnhanceReport enhance_contact_only(const Spectrogram& y_b, const Dictionary& d_ax,
                                   const Dictionary& d_bn, const EnhanceConfig& cfg,
                                   const RtfDiag& h0) {
  cfg.validate();
  const Eigen::Index f = y_b.bins();
  if (d_ax.bins() != f || d_bn.bins() != f || h0.h.size() != f)
    throw ValidationError("enhance_contact_only: frequency dimension mismatch");
  const double lambda_raw =
      cfg.lambda >= 0.0 ? cfg.lambda : default_sparsity_weight(f);

  const double scale_in = entry_rms(y_b.data);
  const double scale = scale_in > 0.0 ? scale_in : 1.0;
  CMat yb_n = y_b.data / scale;
  const double lambda = lambda_raw / scale;

  const Eigen::Index n_x = d_ax.num_atoms();
  const Eigen::Index n_b = d_bn.num_atoms();
  RtfDiag h = h0;
  EnhanceReport report;
  report.cost_history.reserve(static_cast<std::size_t>(cfg.outer_iters));

  CMat code = CMat::Zero(n_x + n_b, y_b.frames());
  CMat dict(f, n_x + n_b);
  CMat speech;
  for (int i = 0; i < cfg.outer_iters; ++i) {
    dict.leftCols(n_x) = h.h.asDiagonal() * d_ax.atoms;
    dict.rightCols(n_b) = d_bn.atoms;
    code = sparse_code(yb_n, dict, lambda, code, cfg.inner_iters, cfg.solver);

    speech.noalias() = d_ax.atoms * code.topRows(n_x);
    CMat noise_b = d_bn.atoms * code.bottomRows(n_b);
    if (speech.squaredNorm() > 0.0)
      h = estimate_rtf_diagonal(yb_n, noise_b, speech, h);

    CostBreakdown cost = evaluate_cost(yb_n, dict, code, lambda);
    cost.j_rec *= scale * scale;
    cost.j_spa *= scale;
    cost.total = cost.j_rec + lambda_raw * cost.j_spa;
    report.cost_history.push_back(cost);
  }

  report.speech = Spectrogram{scale * speech, y_b.config};
  report.rtf = std::move(h);
  report.block_nonzero_fraction = {block_nonzero_fraction(code.topRows(n_x)), 0.0,
                                   block_nonzero_fraction(code.bottomRows(n_b))};
  return report;
}

}  // namespace windfuse
