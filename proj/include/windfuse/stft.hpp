#pragma once

#include <vector>

#include "windfuse/types.hpp"

namespace windfuse {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  double energy() const;
  double rms() const;
  bool all_finite() const;
};

enum class Window { SqrtHann };

/// Analysis/synthesis framing: sqrt-Hann windows, 50% overlap, fft_size equal
/// to the frame length.
struct StftConfig {
  int frame_len = 512;
  int hop = 256;
  int fft_size = 512;
  int sample_rate = 16000;
  Window window = Window::SqrtHann;

  /// 32 ms frames at the given rate, 50% overlap.
  static StftConfig for_sample_rate(int sample_rate);

  int num_bins() const { return fft_size / 2 + 1; }
  void validate() const;
};

struct Spectrogram {
  CMat data;  // F x T, one-sided
  StftConfig config;

  Eigen::Index bins() const { return data.rows(); }
  Eigen::Index frames() const { return data.cols(); }
};

/// One-sided complex STFT of a real signal. The signal is truncated to a
/// whole number of hops; T = floor((len - frame_len)/hop) + 1.
Spectrogram analyze(const Waveform& w, const StftConfig& cfg);

/// Weighted overlap-add inverse with sqrt-Hann synthesis windows. Output
/// length is (T-1)*hop + frame_len.
Waveform synthesize(const Spectrogram& s);

}  // namespace windfuse
