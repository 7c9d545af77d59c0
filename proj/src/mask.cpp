#include "lcs/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lcs/error.hpp"
#include "lcs/image_io.hpp"
#include "lcs/rng.hpp"

namespace lcs {
namespace {

bool is_vertical(MaskKind k) {
  return k == MaskKind::equispaced_vertical || k == MaskKind::uniform_random_vertical;
}

std::size_t target_count(std::size_t total, double acceleration) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(total) / acceleration));
}

// Picks which of the n lines to keep: the ACS band plus `extra` lines drawn
// from the remaining pool, either evenly spaced (random phase) or uniformly.
std::vector<std::uint8_t> choose_lines(std::size_t n, std::size_t lines, std::size_t acs,
                                       bool equispaced, Engine& rng) {
  std::vector<std::uint8_t> keep(n, 0);
  const auto [b, e] = acs_range(n, acs);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= b && i < e) {
      keep[i] = 1;
    } else {
      pool.push_back(i);
    }
  }
  const std::size_t extra = lines - acs;
  if (extra == 0) return keep;
  if (equispaced) {
    const double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double spacing = static_cast<double>(pool.size()) / static_cast<double>(extra);
    for (std::size_t j = 0; j < extra; ++j) {
      auto idx = static_cast<std::size_t>(std::floor((static_cast<double>(j) + phase) * spacing));
      keep[pool[std::min(idx, pool.size() - 1)]] = 1;
    }
  } else {
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t j = 0; j < extra; ++j) keep[pool[j]] = 1;
  }
  return keep;
}

struct PoissonGeometry {
  std::size_t height, width;
  std::pair<std::size_t, std::size_t> rows, cols;  // central block

  bool in_block(std::size_t r, std::size_t c) const {
    return r >= rows.first && r < rows.second && c >= cols.first && c < cols.second;
  }
  // Normalised distance from the k-space centre, 0 at DC and 1 at the corners.
  double radius(std::size_t r, std::size_t c) const {
    const double dy = (static_cast<double>(r) - static_cast<double>(height / 2)) /
                      std::max(1.0, static_cast<double>(height) / 2.0);
    const double dx = (static_cast<double>(c) - static_cast<double>(width / 2)) /
                      std::max(1.0, static_cast<double>(width) / 2.0);
    return std::sqrt(0.5 * (dx * dx + dy * dy));
  }
};

// Variable-density dart throwing: candidates are visited in a fixed random
// order and accepted unless a previously accepted point lies closer than the
// local exclusion radius, which grows linearly towards the periphery.
std::vector<std::uint8_t> throw_darts(const PoissonGeometry& g, const std::vector<std::size_t>& order,
                                      double r0) {
  const std::size_t h = g.height, w = g.width;
  std::vector<std::uint8_t> dart(h * w, 0);
  for (std::size_t p : order) {
    const std::size_t r = p / w, c = p % w;
    const double excl = r0 * (1.0 + 2.0 * g.radius(r, c));
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(excl));
    bool ok = true;
    for (std::ptrdiff_t dr = -reach; dr <= reach && ok; ++dr) {
      const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r) + dr;
      if (rr < 0 || rr >= static_cast<std::ptrdiff_t>(h)) continue;
      for (std::ptrdiff_t dc = -reach; dc <= reach; ++dc) {
        const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(c) + dc;
        if (cc < 0 || cc >= static_cast<std::ptrdiff_t>(w)) continue;
        if (dart[static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc)] &&
            static_cast<double>(dr * dr + dc * dc) < excl * excl) {
          ok = false;
          break;
        }
      }
    }
    if (ok) dart[p] = 1;
  }
  return dart;
}

std::vector<std::uint8_t> poisson_mask(std::size_t h, std::size_t w, std::size_t target,
                                       std::size_t acs, Engine& rng) {
  PoissonGeometry g{h, w, acs_range(h, acs), acs_range(w, acs)};
  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < h * w; ++p) {
    if (!g.in_block(p / w, p % w)) order.push_back(p);
  }
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t need = target - acs * acs;
  if (need >= order.size()) return std::vector<std::uint8_t>(h * w, 1);

  auto count = [&](const std::vector<std::uint8_t>& d) {
    return static_cast<std::size_t>(std::count(d.begin(), d.end(), std::uint8_t{1}));
  };
  // r0 < 1 accepts every candidate, so `lo` always yields at least `need` darts.
  double lo = 0.5;
  double hi = 1.0;
  while (count(throw_darts(g, order, hi)) >= need && hi < static_cast<double>(h + w)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count(throw_darts(g, order, mid)) >= need) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::vector<std::uint8_t> dart = throw_darts(g, order, lo);

  // Trim the outermost surplus darts so the kept count hits the target exactly.
  std::vector<std::size_t> picked;
  for (std::size_t p = 0; p < h * w; ++p) {
    if (dart[p]) picked.push_back(p);
  }
  std::stable_sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
    return g.radius(a / w, a % w) > g.radius(b / w, b % w);
  });
  for (std::size_t i = 0; i + need < picked.size(); ++i) dart[picked[i]] = 0;

  for (std::size_t p = 0; p < h * w; ++p) {
    if (g.in_block(p / w, p % w)) dart[p] = 1;
  }
  return dart;
}

}  // namespace

std::string_view to_string(MaskKind kind) noexcept {
  switch (kind) {
    case MaskKind::equispaced_vertical: return "equispaced-vertical";
    case MaskKind::equispaced_horizontal: return "equispaced-horizontal";
    case MaskKind::uniform_random_vertical: return "uniform-random-vertical";
    case MaskKind::uniform_random_horizontal: return "uniform-random-horizontal";
    case MaskKind::poisson_2d: return "poisson-2d";
  }
  return "unknown";
}

MaskKind parse_mask_kind(std::string_view name) {
  for (auto k : {MaskKind::equispaced_vertical, MaskKind::equispaced_horizontal,
                 MaskKind::uniform_random_vertical, MaskKind::uniform_random_horizontal,
                 MaskKind::poisson_2d}) {
    if (to_string(k) == name) return k;
  }
  if (name == "random-vertical") return MaskKind::uniform_random_vertical;
  if (name == "random-horizontal") return MaskKind::uniform_random_horizontal;
  throw InvalidArgument("unknown mask kind '" + std::string(name) + "'");
}

std::size_t SamplingMask::kept_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(kept.begin(), kept.end(), [](auto k) { return k != 0; }));
}

double SamplingMask::acceleration() const {
  const std::size_t n = kept_count();
  if (n == 0) throw InvalidArgument("mask keeps no locations");
  return static_cast<double>(height * width) / static_cast<double>(n);
}

SamplingMask SamplingMask::full(std::size_t height, std::size_t width) {
  return SamplingMask{height, width, std::vector<std::uint8_t>(height * width, 1),
                      MaskKind::equispaced_vertical, 0};
}

std::pair<std::size_t, std::size_t> acs_range(std::size_t n, std::size_t acs) {
  const std::size_t begin = n / 2 - std::min(n / 2, acs / 2);
  return {begin, std::min(n, begin + acs)};
}

SamplingMask make_mask(MaskKind kind, std::size_t height, std::size_t width, double acceleration,
                       std::size_t acs, std::uint64_t seed) {
  if (height == 0 || width == 0) throw InvalidArgument("mask dimensions must be positive");
  if (!(acceleration >= 1.0) || !std::isfinite(acceleration)) {
    throw InvalidArgument("acceleration must be >= 1");
  }
  SamplingMask mask{height, width, std::vector<std::uint8_t>(height * width, 0), kind, acs};
  Engine rng = make_engine(seed, 0);

  if (kind == MaskKind::poisson_2d) {
    if (acs > std::min(height, width)) throw InvalidArgument("ACS block does not fit in the grid");
    const std::size_t target = target_count(height * width, acceleration);
    if (target == 0 || target < acs * acs) {
      throw InfeasibleAcceleration("acceleration leaves fewer samples than the ACS block");
    }
    mask.kept = poisson_mask(height, width, target, acs, rng);
    return mask;
  }

  const bool vertical = is_vertical(kind);
  const std::size_t n = vertical ? width : height;
  if (acs > n) throw InvalidArgument("ACS lines do not fit in the grid");
  const std::size_t lines = target_count(n, acceleration);
  if (lines == 0 || lines < acs) {
    throw InfeasibleAcceleration("acceleration leaves fewer lines than the ACS region");
  }
  const bool equispaced =
      kind == MaskKind::equispaced_vertical || kind == MaskKind::equispaced_horizontal;
  const auto keep = choose_lines(n, lines, acs, equispaced, rng);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) mask.kept[r * width + c] = keep[vertical ? c : r];
  }
  return mask;
}

bool acs_fully_sampled(const SamplingMask& mask) {
  if (mask.kind == MaskKind::poisson_2d) {
    const auto [rb, re] = acs_range(mask.height, mask.acs);
    const auto [cb, ce] = acs_range(mask.width, mask.acs);
    for (std::size_t r = rb; r < re; ++r) {
      for (std::size_t c = cb; c < ce; ++c) {
        if (!mask.at(r, c)) return false;
      }
    }
    return true;
  }
  const bool vertical = is_vertical(mask.kind);
  const auto [b, e] = acs_range(vertical ? mask.width : mask.height, mask.acs);
  for (std::size_t i = b; i < e; ++i) {
    const std::size_t other = vertical ? mask.height : mask.width;
    for (std::size_t j = 0; j < other; ++j) {
      if (!(vertical ? mask.at(j, i) : mask.at(i, j))) return false;
    }
  }
  return true;
}

void write_mask(const SamplingMask& mask, const std::filesystem::path& path) {
  io::write_bytes(io::encode_mask(mask.height, mask.width, mask.kept), path);
}

SamplingMask read_mask(const std::filesystem::path& path) {
  SamplingMask mask;
  mask.kept = io::decode_mask(io::read_bytes(path), mask.height, mask.width);
  return mask;
}

}  // namespace lcs
