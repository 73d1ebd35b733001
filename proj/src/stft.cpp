#include "windfuse/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace windfuse {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Periodic Hann, square-rooted. Squares to exact unity overlap-add at 50%.
std::vector<double> sqrt_hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
    w[static_cast<std::size_t>(i)] = std::sqrt(hann);
  }
  return w;
}

}  // namespace

double Waveform::energy() const {
  double e = 0.0;
  for (double s : samples) e += s * s;
  return e;
}

double Waveform::rms() const {
  if (samples.empty()) return 0.0;
  return std::sqrt(energy() / static_cast<double>(samples.size()));
}

bool Waveform::all_finite() const {
  for (double s : samples) {
    if (!std::isfinite(s)) return false;
  }
  return true;
}

StftConfig StftConfig::for_sample_rate(int sample_rate) {
  StftConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.frame_len = static_cast<int>(std::lround(0.032 * sample_rate));
  cfg.hop = cfg.frame_len / 2;
  cfg.fft_size = cfg.frame_len;
  cfg.validate();
  return cfg;
}

void StftConfig::validate() const {
  if (frame_len <= 0 || !is_power_of_two(frame_len))
    throw ValidationError("stft: frame_len must be a positive power of two");
  if (hop != frame_len / 2)
    throw ValidationError("stft: hop must be frame_len/2 (50% overlap)");
  if (fft_size != frame_len)
    throw ValidationError("stft: fft_size must equal frame_len");
  if (sample_rate <= 0) throw ValidationError("stft: sample_rate must be positive");
}

Spectrogram analyze(const Waveform& w, const StftConfig& cfg) {
  cfg.validate();
  const auto len = static_cast<Eigen::Index>(w.samples.size());
  if (len < cfg.frame_len)
    throw ValidationError("stft: signal shorter than one frame");
  if (!w.all_finite()) throw ValidationError("stft: non-finite samples");

  const int frame_len = cfg.frame_len;
  const int hop = cfg.hop;
  const Eigen::Index frames = (len - frame_len) / hop + 1;
  const Eigen::Index bins = cfg.num_bins();
  const auto window = sqrt_hann(frame_len);

  Spectrogram out;
  out.config = cfg;
  out.data.resize(bins, frames);

  Eigen::FFT<double> fft;
  std::vector<Complex> frame(static_cast<std::size_t>(frame_len));
  std::vector<Complex> spectrum;
  for (Eigen::Index t = 0; t < frames; ++t) {
    const auto offset = static_cast<std::size_t>(t * hop);
    for (int n = 0; n < frame_len; ++n)
      frame[static_cast<std::size_t>(n)] =
          Complex(w.samples[offset + static_cast<std::size_t>(n)] *
                      window[static_cast<std::size_t>(n)],
                  0.0);
    fft.fwd(spectrum, frame);
    for (Eigen::Index f = 0; f < bins; ++f)
      out.data(f, t) = spectrum[static_cast<std::size_t>(f)];
  }
  return out;
}

Waveform synthesize(const Spectrogram& s) {
  const StftConfig& cfg = s.config;
  cfg.validate();
  const Eigen::Index bins = cfg.num_bins();
  if (s.data.rows() != bins)
    throw ValidationError("stft: spectrogram rows do not match config");
  const Eigen::Index frames = s.data.cols();
  const int frame_len = cfg.frame_len;
  const int hop = cfg.hop;
  const auto window = sqrt_hann(frame_len);

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  const auto out_len = static_cast<std::size_t>((frames - 1) * hop + frame_len);
  out.samples.assign(frames > 0 ? out_len : 0, 0.0);
  std::vector<double> weight(out.samples.size(), 0.0);

  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum(static_cast<std::size_t>(cfg.fft_size));
  std::vector<Complex> frame;
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index f = 0; f < bins; ++f)
      spectrum[static_cast<std::size_t>(f)] = s.data(f, t);
    for (int f = static_cast<int>(bins); f < cfg.fft_size; ++f)
      spectrum[static_cast<std::size_t>(f)] =
          std::conj(spectrum[static_cast<std::size_t>(cfg.fft_size - f)]);
    fft.inv(frame, spectrum);
    const auto offset = static_cast<std::size_t>(t * hop);
    for (int n = 0; n < frame_len; ++n) {
      const auto i = offset + static_cast<std::size_t>(n);
      const double wn = window[static_cast<std::size_t>(n)];
      out.samples[i] += wn * frame[static_cast<std::size_t>(n)].real();
      weight[i] += wn * wn;
    }
  }
  // Unity analysis-synthesis in the interior; edge samples with negligible
  // window coverage stay zero.
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    if (weight[i] > 1e-10)
      out.samples[i] /= weight[i];
    else
      out.samples[i] = 0.0;
  }
  return out;
}

}  // namespace windfuse
