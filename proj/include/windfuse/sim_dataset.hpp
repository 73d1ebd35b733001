#pragma once

#include <cstdint>
#include <utility>

#include "windfuse/fusion.hpp"
#include "windfuse/stft.hpp"

namespace windfuse {

enum class WindClass { Low, High };

/// All synthesis constants in one place. The recorded data the scenarios
/// stand in for is not available, so these are tunable, documented defaults.
struct SimConstants {
  // Contact-channel speech path: low-pass IIR applied to the acoustic speech.
  double contact_cutoff_hz = 2000.0;
  int contact_filter_order = 4;

  // Wind surrogate: red noise (one-pole) with a slow random amplitude
  // envelope.
  double wind_pole = 0.98;
  double wind_envelope_min_hz = 0.5;
  double wind_envelope_max_hz = 2.0;
  double wind_envelope_depth_low = 0.4;
  double wind_envelope_depth_high = 0.7;
  double high_class_boost_db = 6.0;

  // Contact-channel wind pickup: attenuated, low-passed copy plus sparse
  // mount clicks.
  double contact_wind_attenuation_db = -20.0;
  double contact_wind_cutoff_hz = 1000.0;
  double click_rate_hz = 0.5;
  double click_duration_s = 0.005;
  double click_power_db = -10.0;  // aggregate click power vs. contact wind base

  // Speech surrogate.
  double speech_f0_min_hz = 100.0;
  double speech_f0_max_hz = 250.0;
  int speech_partials_min = 8;
  int speech_partials_max = 20;
  double speech_unvoiced_level = 0.6;    // fricative-band RMS vs voiced RMS
  double speech_aspiration_level = 0.12; // in-voiced high-band noise vs voiced RMS
};

/// One synthetic two-channel test item. Noise waveforms are stored already
/// scaled to the requested broadband SNR, so y = clean + noise per channel.
struct ScenarioPair {
  Waveform clean_acoustic;
  Waveform clean_contact;
  Waveform noise_acoustic;
  Waveform noise_contact;
  RtfDiag rtf;  // ground-truth contact RTF at the STFT bins
  double snr_db = 0.0;
  std::uint64_t seed = 0;

  Waveform noisy_acoustic() const;
  Waveform noisy_contact() const;
};

/// Clean-speech surrogate: harmonic stacks with drifting fundamental,
/// unvoiced bursts and true silences at a fixed 60/20/20 duty, unit RMS.
Waveform synth_speech(double duration_s, int sample_rate, std::uint64_t seed,
                      const SimConstants& constants = {});

/// Applies the fixed contact-channel low-pass to the acoustic speech and
/// returns the filter's frequency response sampled at the STFT bins.
std::pair<Waveform, RtfDiag> contact_transform(const Waveform& x_a,
                                               const StftConfig& cfg,
                                               const SimConstants& constants = {});

/// Wind-noise surrogate pair (acoustic pickup, contact pickup with clicks).
std::pair<Waveform, Waveform> synth_wind_pair(double duration_s, int sample_rate,
                                              WindClass speed_class,
                                              std::uint64_t seed,
                                              const SimConstants& constants = {});

struct MixResult {
  Waveform mixed;
  double gain = 0.0;  // factor applied to the noise
};

/// Scales the noise so the mix hits the requested broadband SNR exactly.
MixResult mix_at_snr(const Waveform& x, const Waveform& n, double snr_db);

/// Full scenario from a supplied clean speech waveform.
ScenarioPair build_scenario(const Waveform& speech, WindClass speed_class,
                            double snr_db, std::uint64_t seed,
                            const StftConfig& cfg,
                            const SimConstants& constants = {});

/// Full scenario with synthesised speech (default utterance length 4 s).
ScenarioPair build_scenario(double duration_s, WindClass speed_class,
                            double snr_db, std::uint64_t seed,
                            const StftConfig& cfg,
                            const SimConstants& constants = {});

}  // namespace windfuse
