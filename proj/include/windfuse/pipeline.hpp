#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "windfuse/run_config.hpp"

namespace windfuse {

enum class Algorithm { Fused, AcousticOnly, ContactOnly, Mvdr, ColorCorrection };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

/// Writes per-scenario WAV quadruples (yA, yB, refA, refB) plus
/// manifest.json into out_dir. Optional speech WAVs replace the synthesiser
/// (cycled per utterance).
void run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                  const std::vector<std::filesystem::path>& speech_wavs = {});

/// Trains the speech and the two wind-noise dictionaries and writes them to
/// out_dir as d_ax.wfd, d_an.wfd, d_bn.wfd.
void run_train(const RunConfig& cfg, const std::filesystem::path& out_dir,
               const std::vector<std::filesystem::path>& speech_wavs = {});

/// Runs one enhancer over every scenario in scenario_dir; writes
/// <id>.<algorithm>.wav and a per-run report next to it in out_dir.
void run_enhance(const RunConfig& cfg, const std::filesystem::path& scenario_dir,
                 Algorithm algorithm, const std::filesystem::path& dict_dir,
                 const std::filesystem::path& out_dir);

/// Scores every (scenario, enhanced dir) pair and writes the metrics CSV.
void run_evaluate(const RunConfig& cfg, const std::filesystem::path& scenario_dir,
                  const std::vector<std::filesystem::path>& enhanced_dirs,
                  const std::filesystem::path& out_csv);

}  // namespace windfuse
