#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "lcs/signal.hpp"

namespace lcs::io {

// 32-byte header: magic[8], then little-endian u32 coils, height, width,
// dtype, followed by 8 reserved zero bytes.
inline constexpr std::size_t kHeaderSize = 32;
inline constexpr std::string_view kImageMagic = "LCSIMG01";
inline constexpr std::string_view kKSpaceMagic = "LCSKSP01";

enum class DType : std::uint32_t {
  complex_f64 = 1,  // interleaved little-endian f64 (re, im)
  bool_u8 = 2,      // one byte per location, 0 or 1
};

struct Header {
  std::array<char, 8> magic{};
  std::uint32_t coils = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  DType dtype = DType::complex_f64;
};

std::vector<std::uint8_t> encode_image(const ComplexImage& img);
std::vector<std::uint8_t> encode_kspace(const KSpace& ksp);
std::vector<std::uint8_t> encode_mask(std::size_t height, std::size_t width,
                                      const std::vector<std::uint8_t>& kept);

Header decode_header(std::span<const std::uint8_t> bytes);
ComplexImage decode_image(std::span<const std::uint8_t> bytes);
KSpace decode_kspace(std::span<const std::uint8_t> bytes);
// Returns the kept flags; height/width are written to the out-params.
std::vector<std::uint8_t> decode_mask(std::span<const std::uint8_t> bytes, std::size_t& height,
                                      std::size_t& width);

void write_image(const ComplexImage& img, const std::filesystem::path& path);
ComplexImage read_image(const std::filesystem::path& path);
void write_kspace(const KSpace& ksp, const std::filesystem::path& path);
KSpace read_kspace(const std::filesystem::path& path);

// Multi-plane image stack (e.g. coil sensitivity maps): LCSIMG01 with coils = planes.
std::vector<std::uint8_t> encode_image_stack(const std::vector<ComplexImage>& planes);
std::vector<ComplexImage> decode_image_stack(std::span<const std::uint8_t> bytes);
void write_image_stack(const std::vector<ComplexImage>& planes, const std::filesystem::path& path);
std::vector<ComplexImage> read_image_stack(const std::filesystem::path& path);

// Real images are stored as complex with zero imaginary part.
void write_real_image(const RealImage& img, const std::filesystem::path& path);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path);

}  // namespace lcs::io
