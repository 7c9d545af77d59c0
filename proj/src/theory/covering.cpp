#include "lcs/theory/covering.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lcs/error.hpp"

namespace lcs::theory {
namespace {

using Mask = std::uint64_t;

struct Search {
  std::vector<Mask> sets;
  std::vector<double> probs;
  double need = 0.0;

  double mass(Mask m) const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (m >> i & 1U) s += probs[i];
    }
    return s;
  }

  // Upper bound on mass gained by `k` more sets: sum of the k largest
  // marginal gains.
  double bound(Mask covered, std::size_t k) const {
    std::vector<double> gains;
    gains.reserve(sets.size());
    for (Mask s : sets) gains.push_back(mass(s & ~covered));
    const std::size_t take = std::min(k, gains.size());
    std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(take), gains.end(),
                      std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < take; ++i) s += gains[i];
    return s;
  }

  bool feasible(Mask covered, double have, std::size_t k, std::size_t start) const {
    if (have >= need) return true;
    if (k == 0) return false;
    if (have + bound(covered, k) < need) return false;
    for (std::size_t j = start; j < sets.size(); ++j) {
      const Mask gain = sets[j] & ~covered;
      if (gain == 0) continue;
      if (feasible(covered | sets[j], have + mass(gain), k - 1, j + 1)) return true;
    }
    return false;
  }
};

}  // namespace

CoveringResult approx_covering_number(const FiniteDistribution& mu, double eps, double delta) {
  if (!(eps > 0.0)) throw InvalidArgument("covering radius must be positive");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in [0, 1]");
  const std::size_t n = mu.size();
  const double radius = eps * (1.0 + 1e-12);

  // Tolerance on the mass target so that rounding in the atom weights cannot
  // demand an extra ball.
  const double need = 1.0 - delta - 1e-12;
  if (need <= 0.0) return {1, true};

  std::vector<Vector> centers = mu.points();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) centers.push_back(0.5 * (mu.point(i) + mu.point(j)));
  }

  if (n > kExactCoverMaxAtoms) {
    // Greedy by covered mass.
    std::vector<std::vector<std::size_t>> members(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        if ((centers[c] - mu.point(i)).norm() <= radius) members[c].push_back(i);
      }
    }
    std::vector<char> covered(n, 0);
    double have = 0.0;
    std::size_t count = 0;
    while (have < need) {
      std::size_t best = 0;
      double best_gain = -1.0;
      for (std::size_t c = 0; c < centers.size(); ++c) {
        double g = 0.0;
        for (std::size_t i : members[c]) {
          if (!covered[i]) g += mu.prob(i);
        }
        if (g > best_gain) {
          best_gain = g;
          best = c;
        }
      }
      for (std::size_t i : members[best]) {
        if (!covered[i]) {
          covered[i] = 1;
          have += mu.prob(i);
        }
      }
      ++count;
    }
    return {std::max<std::size_t>(count, 1), false};
  }

  Search s;
  s.probs = mu.probs();
  s.need = need;
  for (const Vector& c : centers) {
    Mask m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((c - mu.point(i)).norm() <= radius) m |= Mask{1} << i;
    }
    s.sets.push_back(m);
  }
  std::sort(s.sets.begin(), s.sets.end());
  s.sets.erase(std::unique(s.sets.begin(), s.sets.end()), s.sets.end());
  // Drop sets strictly contained in another.
  std::vector<Mask> kept;
  for (Mask a : s.sets) {
    bool dominated = false;
    for (Mask b : s.sets) {
      if (a != b && (a & b) == a) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(a);
  }
  std::sort(kept.begin(), kept.end(), [&](Mask a, Mask b) {
    const double ma = s.mass(a), mb = s.mass(b);
    return ma != mb ? ma > mb : a < b;
  });
  s.sets = std::move(kept);

  for (std::size_t k = 1; k <= n; ++k) {
    if (s.feasible(0, 0.0, k, 0)) return {k, true};
  }
  return {n, true};
}

}  // namespace lcs::theory
