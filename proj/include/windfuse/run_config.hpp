#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "windfuse/sim_dataset.hpp"

namespace windfuse {

/// Everything the pipeline commands need, assembled from a named profile,
/// then an optional key = value config file, then CLI flags.
struct RunConfig {
  std::string profile = "desk";

  // stft
  int sample_rate = 16000;
  int frame_len = 512;

  // simulation
  double utterance_seconds = 4.0;
  int utterances_per_condition = 10;
  std::vector<double> snrs_db = {-10.0, -5.0, 0.0, 5.0};
  std::uint64_t sim_seed = 12345;
  SimConstants sim;

  // training
  int num_atoms = 200;
  double train_lambda_scale = 1.0;  // multiplies F^{-1/2}
  int train_outer_iters = 12;
  int train_inner_iters = 80;
  double speech_train_seconds = 60.0;
  double noise_train_seconds = 30.0;
  std::uint64_t train_seed = 777;

  // enhancement
  double eta = 0.4;
  double enhance_lambda_scale = 1.0;  // multiplies F^{-1/2}
  int enhance_outer_iters = 5;
  int enhance_inner_iters = 120;

  static RunConfig for_profile(const std::string& name);

  /// Applies one key to this config; throws ValidationError on unknown keys
  /// or unparsable values.
  void set_key(const std::string& key, const std::string& value);

  /// Flat key = value file; '#' starts a comment.
  void load_file(const std::filesystem::path& path);

  void validate() const;

  StftConfig stft() const;
};

}  // namespace windfuse
