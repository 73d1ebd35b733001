#pragma once

#include <filesystem>

#include "windfuse/dictionary_learning.hpp"

namespace windfuse {

/// Binary dictionary file: magic "WFD1"; little-endian u32 version, F, N,
/// kind code; F*N complex entries as interleaved little-endian f64 pairs,
/// column-major; 16-byte trailer holding the 64-bit FNV-1a of everything
/// before it, zero-padded. Round-trips bit-exactly.
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict);

Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace windfuse
