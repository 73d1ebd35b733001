#pragma once

#include <cstdint>

#include "windfuse/sparse_coding.hpp"
#include "windfuse/stft.hpp"
#include "windfuse/types.hpp"

namespace windfuse {

enum class DictionaryKind { SpeechAcoustic, NoiseAcoustic, NoiseContact };

struct Dictionary {
  CMat atoms;  // F x N, unit-norm columns
  DictionaryKind kind = DictionaryKind::SpeechAcoustic;

  Eigen::Index bins() const { return atoms.rows(); }
  Eigen::Index num_atoms() const { return atoms.cols(); }
};

struct TrainConfig {
  int num_atoms = 1000;
  double lambda = -1.0;  // < 0 selects the F^{-1/2} rule of thumb
  int outer_iters = 25;
  int inner_iters = 1000;
  std::uint64_t seed = 0;
  SolverOptions solver;

  void validate() const;
};

/// Rule-of-thumb sparsity weight F^{-1/2}.
double default_sparsity_weight(Eigen::Index num_bins);

/// Dictionary of num_atoms unit-normalised STFT frames drawn at random from
/// s (distinct frames when enough nonzero frames exist, with replacement
/// otherwise). Deterministic given the seed.
CMat init_dictionary(const Spectrogram& s, int num_atoms, std::uint64_t seed);

/// Closed-form least-squares dictionary for a fixed code:
/// S C^H (C C^H + eps I)^{-1}, with a small ridge engaged only when C C^H is
/// ill-conditioned. Columns are not normalised. Throws when the code is zero.
CMat least_squares_dictionary(const CMat& spectrum, const CMat& code);

/// least_squares_dictionary followed by column normalisation (zero columns
/// are left untouched for the caller's dead-atom handling).
CMat dictionary_update(const CMat& spectrum, const CMat& code);

/// Alternating sparse coding (warm-started across outer iterations) and
/// closed-form dictionary updates. Atoms whose code row is all zero are
/// re-seeded from random training frames.
Dictionary train_dictionary(const Spectrogram& s, const TrainConfig& cfg,
                            DictionaryKind kind);

}  // namespace windfuse
