#pragma once

// "TORF" binary snapshots of sampled fields. Layout, all little-endian:
//   char[4] "TORF", u32 version (= 1), u32 n1, u32 n2,
//   f64 xi1, f64 xi2, f64 eta1, f64 eta2,
//   f64 samples[n1 * n2] (row-major, index j1 * n2 + j2).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "torus/spectral.hpp"

namespace torus {

inline constexpr std::uint32_t kTorfVersion = 1;

std::vector<std::uint8_t> encode_torf(const RealField& f);
RealField decode_torf(const std::vector<std::uint8_t>& bytes);

void write_torf(const std::filesystem::path& path, const RealField& f);
RealField read_torf(const std::filesystem::path& path);

}  // namespace torus
