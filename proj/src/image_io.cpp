#include "lcs/image_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "lcs/error.hpp"

namespace lcs::io {
namespace {

// Largest payload we accept: 2^34 samples (256 GiB of complex data).
constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 34;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return std::bit_cast<double>(v);
}

std::uint32_t checked_dim(std::size_t v, const char* name) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw IoError(IoErrc::dimension_overflow, std::string(name) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

void put_header(std::vector<std::uint8_t>& out, std::string_view magic, std::size_t coils,
                std::size_t height, std::size_t width, DType dtype) {
  out.insert(out.end(), magic.begin(), magic.end());
  put_u32(out, checked_dim(coils, "coils"));
  put_u32(out, checked_dim(height, "height"));
  put_u32(out, checked_dim(width, "width"));
  put_u32(out, static_cast<std::uint32_t>(dtype));
  out.insert(out.end(), 8, 0);
}

std::size_t bytes_per_sample(DType d) { return d == DType::complex_f64 ? 16 : 1; }

// Validates header against the expected magic/dtype and returns the sample count.
std::size_t check_payload(std::span<const std::uint8_t> bytes, const Header& h,
                          std::string_view magic, DType dtype) {
  if (std::string_view(h.magic.data(), 8) != magic) {
    throw IoError(IoErrc::malformed_header, "unexpected magic, wanted " + std::string(magic));
  }
  if (h.dtype != dtype) throw IoError(IoErrc::malformed_header, "unexpected payload dtype");
  const std::uint64_t samples = std::uint64_t{h.coils} * h.height * h.width;
  // Both factors are < 2^32 so the pairwise products cannot wrap before the limit check.
  if (std::uint64_t{h.coils} * h.height > kMaxSamples || samples > kMaxSamples) {
    throw IoError(IoErrc::dimension_overflow, "declared dimensions exceed the supported size");
  }
  const std::uint64_t need = samples * bytes_per_sample(dtype);
  const std::uint64_t have = bytes.size() - kHeaderSize;
  if (have < need) {
    throw IoError(IoErrc::truncated_payload, "payload has " + std::to_string(have) +
                                                 " bytes, header declares " + std::to_string(need));
  }
  if (have > need) throw IoError(IoErrc::trailing_data, "unexpected bytes after payload");
  return static_cast<std::size_t>(samples);
}

std::vector<cplx> decode_complex(const std::uint8_t* p, std::size_t n) {
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {get_f64(p + 16 * i), get_f64(p + 16 * i + 8)};
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_image(const ComplexImage& img) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 16 * img.size());
  put_header(out, kImageMagic, 1, img.height(), img.width(), DType::complex_f64);
  for (const cplx& v : img.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

std::vector<std::uint8_t> encode_kspace(const KSpace& ksp) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 16 * ksp.size());
  put_header(out, kKSpaceMagic, ksp.coils(), ksp.height(), ksp.width(), DType::complex_f64);
  for (const cplx& v : ksp.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

std::vector<std::uint8_t> encode_mask(std::size_t height, std::size_t width,
                                      const std::vector<std::uint8_t>& kept) {
  if (kept.size() != height * width) throw DimensionMismatch("mask size does not match shape");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + kept.size());
  put_header(out, kImageMagic, 1, height, width, DType::bool_u8);
  for (auto k : kept) out.push_back(k ? 1 : 0);
  return out;
}

Header decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    throw IoError(IoErrc::malformed_header, "file shorter than the 32-byte header");
  }
  Header h;
  std::memcpy(h.magic.data(), bytes.data(), 8);
  h.coils = get_u32(bytes.data() + 8);
  h.height = get_u32(bytes.data() + 12);
  h.width = get_u32(bytes.data() + 16);
  const std::uint32_t tag = get_u32(bytes.data() + 20);
  if (tag != static_cast<std::uint32_t>(DType::complex_f64) &&
      tag != static_cast<std::uint32_t>(DType::bool_u8)) {
    throw IoError(IoErrc::malformed_header, "unknown dtype tag " + std::to_string(tag));
  }
  h.dtype = static_cast<DType>(tag);
  for (std::size_t i = 24; i < kHeaderSize; ++i) {
    if (bytes[i] != 0) throw IoError(IoErrc::malformed_header, "reserved header bytes not zero");
  }
  return h;
}

ComplexImage decode_image(std::span<const std::uint8_t> bytes) {
  const Header h = decode_header(bytes);
  if (std::string_view(h.magic.data(), 8) == kImageMagic && h.coils != 1) {
    throw IoError(IoErrc::malformed_header, "image file must declare exactly one coil");
  }
  const std::size_t n = check_payload(bytes, h, kImageMagic, DType::complex_f64);
  return ComplexImage(h.height, h.width, decode_complex(bytes.data() + kHeaderSize, n));
}

KSpace decode_kspace(std::span<const std::uint8_t> bytes) {
  const Header h = decode_header(bytes);
  const std::size_t n = check_payload(bytes, h, kKSpaceMagic, DType::complex_f64);
  return KSpace(h.coils, h.height, h.width, decode_complex(bytes.data() + kHeaderSize, n));
}

std::vector<std::uint8_t> decode_mask(std::span<const std::uint8_t> bytes, std::size_t& height,
                                      std::size_t& width) {
  const Header h = decode_header(bytes);
  if (h.coils != 1) throw IoError(IoErrc::malformed_header, "mask file must declare one coil");
  const std::size_t n = check_payload(bytes, h, kImageMagic, DType::bool_u8);
  std::vector<std::uint8_t> kept(bytes.begin() + kHeaderSize, bytes.begin() + kHeaderSize + n);
  for (auto k : kept) {
    if (k > 1) throw IoError(IoErrc::malformed_header, "mask payload holds a non-boolean byte");
  }
  height = h.height;
  width = h.width;
  return kept;
}

std::vector<std::uint8_t> encode_image_stack(const std::vector<ComplexImage>& planes) {
  if (planes.empty()) throw InvalidArgument("image stack needs at least one plane");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 16 * planes.size() * planes.front().size());
  put_header(out, kImageMagic, planes.size(), planes.front().height(), planes.front().width(),
             DType::complex_f64);
  for (const auto& p : planes) {
    if (!p.same_shape(planes.front())) throw DimensionMismatch("image stack planes differ in shape");
    for (const cplx& v : p.values()) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  }
  return out;
}

std::vector<ComplexImage> decode_image_stack(std::span<const std::uint8_t> bytes) {
  const Header h = decode_header(bytes);
  const std::size_t n = check_payload(bytes, h, kImageMagic, DType::complex_f64);
  auto all = decode_complex(bytes.data() + kHeaderSize, n);
  std::vector<ComplexImage> planes;
  const std::size_t plane = std::size_t{h.height} * h.width;
  for (std::size_t c = 0; c < h.coils; ++c) {
    planes.emplace_back(h.height, h.width,
                        std::vector<cplx>(all.begin() + c * plane, all.begin() + (c + 1) * plane));
  }
  return planes;
}

void write_image_stack(const std::vector<ComplexImage>& planes, const std::filesystem::path& path) {
  write_bytes(encode_image_stack(planes), path);
}

std::vector<ComplexImage> read_image_stack(const std::filesystem::path& path) {
  return decode_image_stack(read_bytes(path));
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::open_failed, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::open_failed, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(IoErrc::write_failed, "short write to " + path.string());
}

void write_image(const ComplexImage& img, const std::filesystem::path& path) {
  write_bytes(encode_image(img), path);
}

ComplexImage read_image(const std::filesystem::path& path) { return decode_image(read_bytes(path)); }

void write_kspace(const KSpace& ksp, const std::filesystem::path& path) {
  write_bytes(encode_kspace(ksp), path);
}

KSpace read_kspace(const std::filesystem::path& path) { return decode_kspace(read_bytes(path)); }

void write_real_image(const RealImage& img, const std::filesystem::path& path) {
  std::vector<cplx> data(img.data.begin(), img.data.end());
  write_image(ComplexImage(img.height, img.width, std::move(data)), path);
}

}  // namespace lcs::io
