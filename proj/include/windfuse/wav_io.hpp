#pragma once

#include <cstddef>
#include <filesystem>

#include "windfuse/stft.hpp"

namespace windfuse {

/// Reads a 16-bit PCM mono WAV file.
Waveform read_wav(const std::filesystem::path& path);

struct WavWriteStats {
  std::size_t clipped_samples = 0;
};

/// Writes 16-bit PCM mono. Samples outside [-1, 1] are clipped and counted.
/// The file is written atomically (temp file + rename).
WavWriteStats write_wav(const std::filesystem::path& path, const Waveform& w);

}  // namespace windfuse
