#pragma once

#include <vector>

#include "windfuse/fusion.hpp"
#include "windfuse/stft.hpp"
#include "windfuse/types.hpp"

namespace windfuse {

/// Per-frame speech activity flags (true = speech present).
struct FrameMask {
  std::vector<bool> flags;

  Eigen::Index frames() const { return static_cast<Eigen::Index>(flags.size()); }
  int count(bool value) const;
};

/// Per-bin 2x2 Hermitian spatial covariance of the stacked channels.
struct SpatialCovariance {
  std::vector<Eigen::Matrix2cd> phi;

  Eigen::Index bins() const { return static_cast<Eigen::Index>(phi.size()); }
};

/// Energy VAD: frames whose energy falls below the 40th percentile (stable
/// ordering, floor(0.4 T) frames) are marked noise-only.
FrameMask energy_vad(const Spectrogram& y_a);

/// Sample noise covariance over the noise-only frames, symmetrised to exact
/// Hermitian and diagonally loaded with 1e-10 * trace.
SpatialCovariance estimate_noise_covariance(const Spectrogram& y_a,
                                            const Spectrogram& y_b,
                                            const FrameMask& mask);

/// Covariance-whitening RTF estimate, acoustic channel as reference:
/// principal generalized eigenvector of (Phi_y, Phi_n) per bin via the 2x2
/// closed form, de-whitened through Phi_n.
RtfDiag cw_rtf(const Spectrogram& y_a, const Spectrogram& y_b,
               const FrameMask& mask);

/// Two-tap per-bin MVDR beamformer steered along [1, H0(f)].
Spectrogram mvdr_enhance(const Spectrogram& y_a, const Spectrogram& y_b,
                         const SpatialCovariance& phi_n, const RtfDiag& h0);

/// Inverse-RTF equalisation of the contact channel. Bins where |H0| falls
/// below 1e-6 of the maximum are zeroed.
Spectrogram color_correction(const Spectrogram& y_b, const RtfDiag& h0);

}  // namespace windfuse
