#include "windfuse/sim_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "windfuse/rng.hpp"

namespace windfuse {

namespace {

constexpr double kPi = std::numbers::pi;

struct Biquad {
  double b0, b1, b2, a1, a2;

  void apply(std::vector<double>& x) const {
    double z1 = 0.0, z2 = 0.0;  // direct form II transposed
    for (double& v : x) {
      const double in = v;
      v = b0 * in + z1;
      z1 = b1 * in + z2 - a1 * v;
      z2 = b2 * in - a2 * v;
    }
  }

  Complex response(double omega) const {
    const Complex z1 = std::polar(1.0, -omega);
    const Complex z2 = z1 * z1;
    return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
  }
};

Biquad butter_lowpass_biquad(double cutoff_hz, double sample_rate, double q) {
  const double k = std::tan(kPi * cutoff_hz / sample_rate);
  const double norm = 1.0 / (k * k + k / q + 1.0);
  Biquad s;
  s.b0 = k * k * norm;
  s.b1 = 2.0 * s.b0;
  s.b2 = s.b0;
  s.a1 = 2.0 * (k * k - 1.0) * norm;
  s.a2 = (k * k - k / q + 1.0) * norm;
  return s;
}

Biquad butter_highpass_biquad(double cutoff_hz, double sample_rate, double q) {
  const double k = std::tan(kPi * cutoff_hz / sample_rate);
  const double norm = 1.0 / (k * k + k / q + 1.0);
  Biquad s;
  s.b0 = norm;
  s.b1 = -2.0 * norm;
  s.b2 = norm;
  s.a1 = 2.0 * (k * k - 1.0) * norm;
  s.a2 = (k * k - k / q + 1.0) * norm;
  return s;
}

// Butterworth cascade Q values for order 2n: 1/(2 cos(theta_k)).
std::vector<double> butterworth_qs(int order) {
  std::vector<double> qs;
  for (int k = 0; k < order / 2; ++k) {
    const double theta = kPi * (2.0 * k + 1.0) / (2.0 * order);
    qs.push_back(1.0 / (2.0 * std::cos(theta)));
  }
  return qs;
}

std::vector<Biquad> butter_lowpass(double cutoff_hz, double sample_rate, int order) {
  std::vector<Biquad> cascade;
  for (double q : butterworth_qs(order))
    cascade.push_back(butter_lowpass_biquad(cutoff_hz, sample_rate, q));
  return cascade;
}

void apply_cascade(const std::vector<Biquad>& cascade, std::vector<double>& x) {
  for (const auto& s : cascade) s.apply(x);
}

Complex cascade_response(const std::vector<Biquad>& cascade, double omega) {
  Complex h(1.0, 0.0);
  for (const auto& s : cascade) h *= s.response(omega);
  return h;
}

void scale_to_rms(std::vector<double>& x, double target_rms) {
  double e = 0.0;
  for (double v : x) e += v * v;
  if (e <= 0.0) return;
  const double g = target_rms / std::sqrt(e / static_cast<double>(x.size()));
  for (double& v : x) v *= g;
}

double power_of(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e / static_cast<double>(x.size());
}

// Slow positive modulation envelope: a few random sinusoids in the given
// rate band, normalised to peak 1, mapped to 1 + depth * g(t).
std::vector<double> slow_envelope(std::size_t n, int sample_rate, double min_hz,
                                  double max_hz, double depth, Rng& rng) {
  std::vector<double> g(n, 0.0);
  const int components = 3;
  for (int c = 0; c < components; ++c) {
    const double f = rng.uniform(min_hz, max_hz);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const double amp = rng.uniform(0.5, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      g[i] += amp * std::sin(2.0 * kPi * f * static_cast<double>(i) / sample_rate + phase);
  }
  double peak = 0.0;
  for (double v : g) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) peak = 1.0;
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = 1.0 + depth * g[i] / peak;
  return env;
}

}  // namespace

Waveform ScenarioPair::noisy_acoustic() const {
  Waveform y = clean_acoustic;
  for (std::size_t i = 0; i < y.samples.size(); ++i)
    y.samples[i] += noise_acoustic.samples[i];
  return y;
}

Waveform ScenarioPair::noisy_contact() const {
  Waveform y = clean_contact;
  for (std::size_t i = 0; i < y.samples.size(); ++i)
    y.samples[i] += noise_contact.samples[i];
  return y;
}

Waveform synth_speech(double duration_s, int sample_rate, std::uint64_t seed,
                      const SimConstants& constants) {
  if (duration_s < 0.5)
    throw ValidationError("synth_speech: duration must be at least 0.5 s");
  const auto total = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Rng rng(seed);
  Rng noise_rng = rng.fork(7);

  std::vector<double> out(total, 0.0);

  // Segment labels cycle through shuffled blocks of {V,V,V,U,S} so the
  // 60/20/20 voiced/unvoiced/silence duty holds for every seed.
  enum class Seg { Voiced, Unvoiced, Silence };
  std::vector<Seg> block = {Seg::Voiced, Seg::Voiced, Seg::Voiced, Seg::Unvoiced,
                            Seg::Silence};
  std::size_t pos = 0;
  std::size_t block_pos = block.size();  // force shuffle on first use

  const int ramp = sample_rate / 100;  // 10 ms attack/release
  while (pos < total) {
    if (block_pos >= block.size()) {
      for (std::size_t j = block.size(); j > 1; --j)
        std::swap(block[j - 1], block[static_cast<std::size_t>(rng.integer(j))]);
      block_pos = 0;
    }
    const Seg seg = block[block_pos++];
    const auto seg_len = std::min<std::size_t>(
        total - pos,
        static_cast<std::size_t>(std::llround(rng.uniform(0.15, 0.35) * sample_rate)));
    if (seg_len == 0) break;

    if (seg == Seg::Voiced) {
      const double f0_a = rng.uniform(constants.speech_f0_min_hz, constants.speech_f0_max_hz);
      const double f0_b = rng.uniform(constants.speech_f0_min_hz, constants.speech_f0_max_hz);
      const int partials = constants.speech_partials_min +
                           static_cast<int>(rng.integer(static_cast<std::uint64_t>(
                               constants.speech_partials_max - constants.speech_partials_min + 1)));
      std::vector<double> phases(static_cast<std::size_t>(partials));
      for (auto& p : phases) p = rng.uniform(0.0, 2.0 * kPi);
      const double wobble_rate = rng.uniform(2.0, 5.0);
      const double wobble_phase = rng.uniform(0.0, 2.0 * kPi);

      std::vector<double> aspiration(seg_len);
      for (auto& v : aspiration) v = noise_rng.gaussian();
      Biquad asp_hp = butter_highpass_biquad(2000.0, sample_rate, std::numbers::sqrt2 / 2.0);
      asp_hp.apply(aspiration);

      double phase0 = rng.uniform(0.0, 2.0 * kPi);
      for (std::size_t i = 0; i < seg_len; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(seg_len);
        const double f0 = f0_a + (f0_b - f0_a) * frac;
        phase0 += 2.0 * kPi * f0 / sample_rate;
        double v = 0.0;
        for (int k = 1; k <= partials; ++k) {
          // -6 dB/octave tilt: amplitude 1/k.
          if (k * f0 >= 0.5 * sample_rate) break;
          v += std::sin(k * phase0 + phases[static_cast<std::size_t>(k - 1)]) / k;
        }
        v += constants.speech_aspiration_level * aspiration[i];
        const double wobble =
            1.0 + 0.15 * std::sin(2.0 * kPi * wobble_rate * i / sample_rate + wobble_phase);
        double env = 1.0;
        if (i < static_cast<std::size_t>(ramp))
          env = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) / ramp);
        else if (seg_len - i <= static_cast<std::size_t>(ramp))
          env = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(seg_len - i) / ramp);
        out[pos + i] = v * wobble * env;
      }
    } else if (seg == Seg::Unvoiced) {
      std::vector<double> noise(seg_len);
      for (auto& v : noise) v = noise_rng.gaussian();
      Biquad hp = butter_highpass_biquad(1500.0, sample_rate, std::numbers::sqrt2 / 2.0);
      hp.apply(noise);
      for (std::size_t i = 0; i < seg_len; ++i) {
        double env = 1.0;
        if (i < static_cast<std::size_t>(ramp))
          env = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) / ramp);
        else if (seg_len - i <= static_cast<std::size_t>(ramp))
          env = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(seg_len - i) / ramp);
        out[pos + i] = constants.speech_unvoiced_level * noise[i] * env;
      }
    }
    // Silence: leave zeros.
    pos += seg_len;
  }

  scale_to_rms(out, 1.0);
  Waveform w;
  w.samples = std::move(out);
  w.sample_rate = sample_rate;
  return w;
}

std::pair<Waveform, RtfDiag> contact_transform(const Waveform& x_a,
                                               const StftConfig& cfg,
                                               const SimConstants& constants) {
  if (x_a.sample_rate != 16000)
    throw ValidationError("contact_transform: expected a 16 kHz input");
  const auto cascade = butter_lowpass(constants.contact_cutoff_hz,
                                      x_a.sample_rate, constants.contact_filter_order);

  Waveform x_b = x_a;
  apply_cascade(cascade, x_b.samples);

  RtfDiag rtf;
  rtf.h.resize(cfg.num_bins());
  for (Eigen::Index f = 0; f < cfg.num_bins(); ++f) {
    const double omega = 2.0 * kPi * static_cast<double>(f) / cfg.fft_size;
    rtf.h(f) = cascade_response(cascade, omega);
  }
  return {std::move(x_b), std::move(rtf)};
}

std::pair<Waveform, Waveform> synth_wind_pair(double duration_s, int sample_rate,
                                              WindClass speed_class,
                                              std::uint64_t seed,
                                              const SimConstants& constants) {
  if (duration_s < 0.5)
    throw ValidationError("synth_wind_pair: duration must be at least 0.5 s");
  const auto total = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Rng rng(seed);
  Rng env_rng = rng.fork(1);
  Rng click_rng = rng.fork(2);

  // Acoustic pickup: red noise with a slow gusting envelope.
  std::vector<double> n_a(total);
  double state = 0.0;
  for (auto& v : n_a) {
    state = constants.wind_pole * state + rng.gaussian();
    v = state;
  }
  const double depth = speed_class == WindClass::High
                           ? constants.wind_envelope_depth_high
                           : constants.wind_envelope_depth_low;
  const auto env = slow_envelope(total, sample_rate, constants.wind_envelope_min_hz,
                                 constants.wind_envelope_max_hz, depth, env_rng);
  for (std::size_t i = 0; i < total; ++i) n_a[i] *= env[i];

  const double base_rms = 0.1;
  const double class_gain =
      speed_class == WindClass::High
          ? std::pow(10.0, constants.high_class_boost_db / 20.0)
          : 1.0;
  scale_to_rms(n_a, base_rms * class_gain);

  // Contact pickup: attenuated low-passed copy plus sparse mount clicks.
  std::vector<double> n_b = n_a;
  apply_cascade(butter_lowpass(constants.contact_wind_cutoff_hz, sample_rate, 4), n_b);
  const double target_rms =
      std::sqrt(power_of(n_a)) *
      std::pow(10.0, constants.contact_wind_attenuation_db / 20.0);
  scale_to_rms(n_b, target_rms);

  if (constants.click_rate_hz > 0.0) {
    const double base_power = power_of(n_b);
    const auto click_len = static_cast<std::size_t>(
        std::llround(constants.click_duration_s * sample_rate));
    const double duty = constants.click_rate_hz * constants.click_duration_s;
    // Aggregate click power relative to the wind base; the Hann shaping
    // (mean square 0.375) is compensated.
    const double click_rms =
        std::sqrt(base_power * std::pow(10.0, constants.click_power_db / 10.0) /
                  std::max(duty, 1e-12) / 0.375);
    double t = 0.0;
    for (;;) {
      double u = click_rng.uniform();
      while (u <= 0.0) u = click_rng.uniform();
      t += -std::log(u) / constants.click_rate_hz;
      const auto start = static_cast<std::size_t>(t * sample_rate);
      if (start + click_len >= total) break;
      for (std::size_t i = 0; i < click_len; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / click_len));
        n_b[start + i] += click_rms * hann * click_rng.gaussian();
      }
    }
  }

  Waveform a{std::move(n_a), sample_rate};
  Waveform b{std::move(n_b), sample_rate};
  return {std::move(a), std::move(b)};
}

MixResult mix_at_snr(const Waveform& x, const Waveform& n, double snr_db) {
  if (x.samples.size() != n.samples.size())
    throw ValidationError("mix_at_snr: length mismatch");
  if (x.sample_rate != n.sample_rate)
    throw ValidationError("mix_at_snr: sample rate mismatch");
  const double ex = x.energy();
  const double en = n.energy();
  if (ex <= 0.0 || en <= 0.0)
    throw ValidationError("mix_at_snr: zero-energy input");

  MixResult out;
  out.gain = std::sqrt(ex / (en * std::pow(10.0, snr_db / 10.0)));
  out.mixed = x;
  for (std::size_t i = 0; i < out.mixed.samples.size(); ++i)
    out.mixed.samples[i] += out.gain * n.samples[i];
  return out;
}

ScenarioPair build_scenario(const Waveform& speech, WindClass speed_class,
                            double snr_db, std::uint64_t seed,
                            const StftConfig& cfg, const SimConstants& constants) {
  if (speech.samples.empty())
    throw ValidationError("build_scenario: empty speech input");
  Rng rng(seed);
  const double duration =
      static_cast<double>(speech.samples.size()) / speech.sample_rate;

  ScenarioPair sc;
  sc.snr_db = snr_db;
  sc.seed = seed;
  sc.clean_acoustic = speech;
  auto [x_b, rtf] = contact_transform(speech, cfg, constants);
  sc.clean_contact = std::move(x_b);
  sc.rtf = std::move(rtf);

  auto [n_a, n_b] = synth_wind_pair(duration, speech.sample_rate, speed_class,
                                    rng.fork(2).seed(), constants);
  const MixResult mix = mix_at_snr(sc.clean_acoustic, n_a, snr_db);
  for (auto& v : n_a.samples) v *= mix.gain;
  for (auto& v : n_b.samples) v *= mix.gain;  // shared gain keeps levels physical
  sc.noise_acoustic = std::move(n_a);
  sc.noise_contact = std::move(n_b);
  return sc;
}

ScenarioPair build_scenario(double duration_s, WindClass speed_class, double snr_db,
                            std::uint64_t seed, const StftConfig& cfg,
                            const SimConstants& constants) {
  Rng rng(seed);
  const Waveform speech =
      synth_speech(duration_s, cfg.sample_rate, rng.fork(1).seed(), constants);
  return build_scenario(speech, speed_class, snr_db, seed, cfg, constants);
}

}  // namespace windfuse
