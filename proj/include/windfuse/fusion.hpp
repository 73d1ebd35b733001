#pragma once

#include <array>
#include <vector>

#include "windfuse/dictionary_learning.hpp"
#include "windfuse/sparse_coding.hpp"
#include "windfuse/stft.hpp"
#include "windfuse/types.hpp"

namespace windfuse {

/// Diagonal relative transfer function between the speech components at the
/// contact and acoustic microphones, one complex value per frequency bin.
struct RtfDiag {
  CVec h;

  static RtfDiag ones(Eigen::Index bins);
};

/// Row layout of the stacked code: speech block first, then the acoustic and
/// contact noise blocks.
struct CompositeLayout {
  Eigen::Index n_speech = 0;
  Eigen::Index n_noise_a = 0;
  Eigen::Index n_noise_b = 0;

  Eigen::Index total() const { return n_speech + n_noise_a + n_noise_b; }
  Eigen::Index speech_offset() const { return 0; }
  Eigen::Index noise_a_offset() const { return n_speech; }
  Eigen::Index noise_b_offset() const { return n_speech + n_noise_a; }
};

/// Stacked two-channel problem: y = [sqrt(eta) Y_A; sqrt(1-eta) Y_B] and the
/// block dictionary
///   [ sqrt(eta) D_AX,       sqrt(eta) D_AN,  0              ]
///   [ sqrt(1-eta) H D_AX,   0,               sqrt(1-eta) D_BN ]
/// with H applied row-wise to the speech atoms.
struct CompositeProblem {
  CMat y;     // 2F x T
  CMat dict;  // 2F x (N_X + N_AN + N_BN)
  CompositeLayout layout;
  double eta = 0.4;
};

CompositeProblem build_composite(const Spectrogram& y_a, const Spectrogram& y_b,
                                 const Dictionary& d_ax, const Dictionary& d_an,
                                 const Dictionary& d_bn, const RtfDiag& h,
                                 double eta);

/// Per-bin least-squares RTF: H(f) = sum_t (Y_B - N_B) conj(X_A) / sum_t |X_A|^2.
/// Bins whose speech energy falls below 1e-12 of the strongest bin keep the
/// previous estimate. Throws when X_A is identically zero.
RtfDiag estimate_rtf_diagonal(const CMat& y_b, const CMat& n_b, const CMat& x_a,
                              const RtfDiag& previous);

struct EnhanceConfig {
  double eta = 0.4;
  double lambda = -1.0;  // < 0 selects F^{-1/2}
  int outer_iters = 5;
  int inner_iters = 1000;
  SolverOptions solver;

  void validate() const;
};

struct EnhanceReport {
  Spectrogram speech;     // estimated clean speech at the acoustic microphone
  RtfDiag rtf;            // final RTF estimate
  std::vector<CostBreakdown> cost_history;    // one entry per outer iteration
  std::array<double, 3> block_nonzero_fraction{};  // speech, noise A, noise B
};

/// The two-channel enhancer: alternates composite sparse coding (warm-started)
/// with closed-form diagonal RTF re-estimation.
EnhanceReport enhance_fused(const Spectrogram& y_a, const Spectrogram& y_b,
                            const Dictionary& d_ax, const Dictionary& d_an,
                            const Dictionary& d_bn, const EnhanceConfig& cfg,
                            const RtfDiag& h0);

/// Single-microphone reduction: one sparse-coding solve over [D_AX D_AN].
Spectrogram enhance_acoustic_only(const Spectrogram& y_a, const Dictionary& d_ax,
                                  const Dictionary& d_an, double lambda,
                                  int inner_iters, const SolverOptions& opts = {});

/// Contact-microphone reduction: alternates sparse coding over [H D_AX, D_BN]
/// with RTF re-estimation; returns the untransformed speech estimate.
EnhanceReport enhance_contact_only(const Spectrogram& y_b, const Dictionary& d_ax,
                                   const Dictionary& d_bn, const EnhanceConfig& cfg,
                                   const RtfDiag& h0);

}  // namespace windfuse
