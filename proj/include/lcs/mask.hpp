#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lcs {

enum class MaskKind {
  equispaced_vertical,
  equispaced_horizontal,
  uniform_random_vertical,
  uniform_random_horizontal,
  poisson_2d,
};

std::string_view to_string(MaskKind kind) noexcept;
MaskKind parse_mask_kind(std::string_view name);

// Cartesian k-space sampling pattern. "Vertical" patterns keep whole columns,
// "horizontal" patterns keep whole rows; acs is a line count for line
// patterns and the side of the fully sampled central square for poisson-2d.
struct SamplingMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> kept;
  MaskKind kind = MaskKind::equispaced_vertical;
  std::size_t acs = 0;

  bool at(std::size_t row, std::size_t col) const { return kept[row * width + col] != 0; }
  std::size_t kept_count() const noexcept;
  // True acceleration (height*width)/|kept|.
  double acceleration() const;

  static SamplingMask full(std::size_t height, std::size_t width);
};

// Index range [begin, end) of the centered ACS band of `acs` lines out of `n`.
std::pair<std::size_t, std::size_t> acs_range(std::size_t n, std::size_t acs);

SamplingMask make_mask(MaskKind kind, std::size_t height, std::size_t width, double acceleration,
                       std::size_t acs, std::uint64_t seed);

// True when every location of the ACS region is kept.
bool acs_fully_sampled(const SamplingMask& mask);

void write_mask(const SamplingMask& mask, const std::filesystem::path& path);
SamplingMask read_mask(const std::filesystem::path& path);

}  // namespace lcs
