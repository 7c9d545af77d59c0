#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "lcs/error.hpp"
#include "lcs/fft.hpp"
#include "lcs/image_io.hpp"
#include "support.hpp"

namespace lcs {
namespace {

using test::naive_dft2;
using test::random_image;
using test::rel_diff;

TEST(Dft, ConstantImageHasSingleDcBin) {
  const ComplexImage x(4, 4, cplx{1.0, 0.0});
  const ComplexImage k = dft2(x);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double expect = (r == 2 && c == 2) ? 4.0 : 0.0;
      EXPECT_NEAR(std::abs(k(r, c)), expect, 1e-12) << r << "," << c;
    }
  }
}

TEST(Dft, DeltaAtDcInvertsToConstant) {
  ComplexImage k(5, 6);
  k(2, 3) = 1.0;
  const ComplexImage x = idft2(k);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(std::abs(x[i] - cplx(1.0 / std::sqrt(30.0))), 0.0, 1e-14);
}

TEST(Dft, MatchesDirectSummationOnOddAndEvenShapes) {
  Engine rng(11);
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{4, 4}, {5, 7}, {6, 3}, {1, 8}, {9, 1}}) {
    const ComplexImage x = random_image(h, w, rng);
    EXPECT_LT(rel_diff(dft2(x), naive_dft2(x, -1)), 1e-12) << h << "x" << w;
    EXPECT_LT(rel_diff(idft2(x), naive_dft2(x, +1)), 1e-12) << h << "x" << w;
  }
}

TEST(Dft, UnitaryAndInvertibleOnManyImages) {
  Engine rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 24);
  for (int i = 0; i < 1000; ++i) {
    const ComplexImage x = random_image(dim(rng), dim(rng), rng);
    const ComplexImage k = dft2(x);
    const double nx = std::sqrt(norm2(x.values())), nk = std::sqrt(norm2(k.values()));
    ASSERT_LE(std::abs(nk - nx), 1e-10 * nx);
    ASSERT_LT(rel_diff(idft2(k), x), 1e-10);
  }
}

TEST(Dft, AdjointIdentity) {
  Engine rng(5);
  for (int i = 0; i < 20; ++i) {
    const ComplexImage x = random_image(7, 10, rng), y = random_image(7, 10, rng);
    const cplx lhs = inner(dft2(x).values(), y.values());
    const cplx rhs = inner(x.values(), idft2(y).values());
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::sqrt(norm2(x.values()) * norm2(y.values())));
  }
}

TEST(Dft, InplaceMatchesCopying) {
  Engine rng(9);
  ComplexImage x = random_image(6, 10, rng);
  const ComplexImage k = dft2(x);
  dft2_inplace(x.values(), 6, 10);
  EXPECT_EQ(x, k);
}

TEST(Channels, RoundTripAndLayout) {
  Engine rng(1);
  const ComplexImage x = random_image(3, 4, rng);
  const Eigen::VectorXd v = to_channels(x);
  ASSERT_EQ(v.size(), 24);
  EXPECT_EQ(v[1], x[1].real());
  EXPECT_EQ(v[12 + 1], x[1].imag());
  EXPECT_EQ(from_channels(v, 3, 4), x);
  EXPECT_THROW(from_channels(v, 4, 4), DimensionMismatch);
}

TEST(Containers, ShapeChecks) {
  EXPECT_THROW(ComplexImage(2, 2, std::vector<cplx>(3)), DimensionMismatch);
  EXPECT_THROW(KSpace(2, 2, 2, std::vector<cplx>(7)), DimensionMismatch);
  ComplexImage x(2, 2);
  EXPECT_TRUE(x.all_finite());
  x[0] = {std::nan(""), 0.0};
  EXPECT_FALSE(x.all_finite());
}

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("lcs_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

IoErrc io_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const IoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no IoError thrown";
  return IoErrc::write_failed;
}

TEST_F(IoTest, ImageRoundTripIsBitExact) {
  Engine rng(2);
  const ComplexImage x = random_image(3, 5, rng);
  const auto p = dir_ / "x.img";
  io::write_image(x, p);
  const auto bytes = io::read_bytes(p);
  EXPECT_EQ(bytes.size(), io::kHeaderSize + 15 * 16);
  EXPECT_EQ(std::memcmp(bytes.data(), "LCSIMG01", 8), 0);
  const ComplexImage y = io::read_image(p);
  EXPECT_EQ(x, y);
  io::write_image(y, dir_ / "y.img");
  EXPECT_EQ(io::read_bytes(dir_ / "y.img"), bytes);
}

TEST_F(IoTest, HeaderLayoutIsLittleEndian) {
  const ComplexImage x(2, 3, cplx{1.5, -2.0});
  const auto b = io::encode_image(x);
  auto u32 = [&](std::size_t off) {
    return std::uint32_t(b[off]) | std::uint32_t(b[off + 1]) << 8 | std::uint32_t(b[off + 2]) << 16 |
           std::uint32_t(b[off + 3]) << 24;
  };
  EXPECT_EQ(u32(8), 1u);
  EXPECT_EQ(u32(12), 2u);
  EXPECT_EQ(u32(16), 3u);
  EXPECT_EQ(u32(20), 1u);
  for (std::size_t i = 24; i < 32; ++i) EXPECT_EQ(b[i], 0);
  double re = 0.0;
  std::memcpy(&re, b.data() + 32, 8);
  EXPECT_EQ(re, 1.5);
}

TEST_F(IoTest, KSpaceAndStackRoundTrip) {
  Engine rng(4);
  const KSpace k = test::random_kspace(3, 4, 5, rng);
  io::write_kspace(k, dir_ / "k.ksp");
  EXPECT_EQ(io::read_kspace(dir_ / "k.ksp"), k);
  std::vector<ComplexImage> maps{random_image(4, 5, rng), random_image(4, 5, rng)};
  io::write_image_stack(maps, dir_ / "m.maps");
  EXPECT_EQ(io::read_image_stack(dir_ / "m.maps"), maps);
  // A two-plane stack is not a single image.
  EXPECT_EQ(io_code([&] { io::read_image(dir_ / "m.maps"); }), IoErrc::malformed_header);
}

TEST_F(IoTest, DistinctErrorsForCorruptFiles) {
  Engine rng(6);
  const auto good = io::encode_image(random_image(3, 5, rng));

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(io_code([&] { io::decode_image(bad_magic); }), IoErrc::malformed_header);

  auto kspace_magic = good;
  std::memcpy(kspace_magic.data(), "LCSKSP01", 8);
  EXPECT_EQ(io_code([&] { io::decode_image(kspace_magic); }), IoErrc::malformed_header);

  std::vector<std::uint8_t> truncated(good.begin(), good.end() - 1);
  EXPECT_EQ(io_code([&] { io::decode_image(truncated); }), IoErrc::truncated_payload);

  std::vector<std::uint8_t> short_header(good.begin(), good.begin() + 20);
  EXPECT_EQ(io_code([&] { io::decode_image(short_header); }), IoErrc::malformed_header);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(io_code([&] { io::decode_image(trailing); }), IoErrc::trailing_data);

  auto huge = good;
  for (std::size_t i = 12; i < 20; ++i) huge[i] = 0xFF;
  EXPECT_EQ(io_code([&] { io::decode_image(huge); }), IoErrc::dimension_overflow);

  auto dtype = good;
  dtype[20] = 9;
  EXPECT_EQ(io_code([&] { io::decode_image(dtype); }), IoErrc::malformed_header);

  auto reserved = good;
  reserved[28] = 1;
  EXPECT_EQ(io_code([&] { io::decode_image(reserved); }), IoErrc::malformed_header);

  EXPECT_EQ(io_code([&] { io::read_image(dir_ / "missing.img"); }), IoErrc::open_failed);
  EXPECT_EQ(io_code([&] { io::write_image(ComplexImage(1, 1), dir_ / "no" / "such" / "dir.img"); }),
            IoErrc::open_failed);
}

TEST_F(IoTest, MaskPayloadMustBeBoolean) {
  const std::vector<std::uint8_t> kept{1, 0, 1, 1};
  auto b = io::encode_mask(2, 2, kept);
  std::size_t h = 0, w = 0;
  EXPECT_EQ(io::decode_mask(b, h, w), kept);
  EXPECT_EQ(h, 2u);
  b.back() = 2;
  EXPECT_EQ(io_code([&] { io::decode_mask(b, h, w); }), IoErrc::malformed_header);
}

}  // namespace
}  // namespace lcs
