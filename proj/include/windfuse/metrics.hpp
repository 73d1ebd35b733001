#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "windfuse/stft.hpp"

namespace windfuse {

struct MetricReport {
  double si_sdr_db = 0.0;
  double stoi_score = 0.0;  // clamped to [0, 1]
  double lsd_db = 0.0;
  // Improvements over the noisy acoustic channel, same clean reference.
  double delta_si_sdr_db = 0.0;
  double delta_stoi = 0.0;
  double delta_lsd_db = 0.0;
};

/// Scale-invariant SDR in dB, capped to +-100.
double si_sdr(const Waveform& ref, const Waveform& est);

/// Short-time objective intelligibility. Inputs are resampled to 10 kHz
/// internally; requires at least 1 s of audio.
double stoi(const Waveform& ref, const Waveform& est);

/// RMS log-magnitude spectral distance in dB.
double log_spectral_distance(const Waveform& ref, const Waveform& est,
                             const StftConfig& cfg);

/// All three metrics for `enhanced` plus deltas against the noisy channel.
MetricReport score_enhancement(const Waveform& clean, const Waveform& noisy,
                               const Waveform& enhanced, const StftConfig& cfg);

/// One scored utterance, tagged with its condition and algorithm.
struct ScenarioScore {
  double snr_db = 0.0;
  std::string algorithm;
  MetricReport report;
};

/// One aggregated cell: mean and standard deviation of one metric for one
/// algorithm at one SNR condition.
struct ConditionStat {
  double snr_db = 0.0;
  std::string algorithm;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Groups scores by (SNR, algorithm) and aggregates each metric. Metric order
/// and row order are fixed so output is deterministic.
std::vector<ConditionStat> evaluate_condition(const std::vector<ScenarioScore>& scores);

/// CSV with the exact header condition_snr_db,algorithm,metric,mean,std.
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<ConditionStat>& stats);

}  // namespace windfuse
