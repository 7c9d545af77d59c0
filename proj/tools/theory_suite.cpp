#include <cmath>
#include <limits>
#include <random>

#include "cli.hpp"
#include "lcs/rng.hpp"
#include "lcs/theory/transport.hpp"
#include "lcs/theory/validation.hpp"

namespace lcs::cli {
namespace {

using namespace lcs::theory;

constexpr std::uint64_t kLemmaStream = 1, kTheorem2Stream = 2, kTheorem1Stream = 3;

std::size_t trial_count(const json& suite, std::optional<std::size_t> override_trials) {
  const std::size_t t = override_trials ? *override_trials : suite.at("trials").get<std::size_t>();
  if (t == 0) throw ConfigError("trials must be positive");
  return t;
}

Matrix parse_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto r0 = rows.front().get<std::vector<double>>();
  Matrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(r0.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i].get<std::vector<double>>();
    if (r.size() != r0.size()) throw ConfigError("matrix rows differ in length");
    for (std::size_t j = 0; j < r.size(); ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[j];
  }
  return A;
}

FiniteDistribution parse_finite(const json& spec, Engine& rng) {
  if (spec.contains("random")) {
    const json& r = spec.at("random");
    return random_finite(r.at("atoms").get<std::size_t>(), r.at("dim").get<Eigen::Index>(), r.value("scale", 1.0),
                         rng);
  }
  const json& atoms = spec.at("atoms");
  if (!atoms.is_array() || atoms.empty()) throw ConfigError("atoms must be a nonempty array");
  std::vector<Vector> pts;
  for (const json& a : atoms) {
    const auto v = a.get<std::vector<double>>();
    pts.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  std::vector<double> probs = spec.contains("probs") ? spec.at("probs").get<std::vector<double>>()
                                                     : std::vector<double>(pts.size(), 1.0);
  return FiniteDistribution::normalized(std::move(pts), std::move(probs));
}

// nu as keep * mu + (1 - keep) * (mu translated by offset in every coordinate).
FiniteDistribution shifted(const FiniteDistribution& mu, double keep, double offset) {
  if (!(keep > 0.0 && keep <= 1.0)) throw ConfigError("keep_mass must lie in (0, 1]");
  std::vector<Vector> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pts.push_back(mu.point(i));
    w.push_back(keep * mu.prob(i));
  }
  if (keep < 1.0) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      pts.push_back(mu.point(i) + Vector::Constant(mu.dim(), offset));
      w.push_back((1.0 - keep) * mu.prob(i));
    }
  }
  return FiniteDistribution::normalized(std::move(pts), std::move(w));
}

json run_lemma1(const json& s, std::uint64_t seed) {
  Engine rng = make_engine(seed, kLemmaStream);
  const std::size_t pairs = s.value("pairs", std::size_t{50});
  const auto atom_range = s.value("atoms", std::vector<std::size_t>{2, 6});
  if (atom_range.size() != 2 || atom_range[0] < 1 || atom_range[1] < atom_range[0]) {
    throw ConfigError("lemma1.atoms must be [min, max] with 1 <= min <= max");
  }
  const auto dim = s.value("dim", Eigen::Index{2});
  const auto qs = s.value("q", std::vector<double>{1.0, 2.0});
  const auto deltas = s.value("delta", std::vector<double>{0.1, 0.3});
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("lemma1.delta values must lie in (0, 1)");
  }
  for (double q : qs) {
    if (!(q >= 1.0)) throw ConfigError("lemma1.q values must be >= 1");
  }

  bool holds = true;
  std::size_t checks = 0, failures = 0, bad_certificates = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::uniform_int_distribution<std::size_t> count(atom_range[0], atom_range[1]);
  for (std::size_t p = 0; p < pairs; ++p) {
    const FiniteDistribution mu = random_finite(count(rng), dim, 1.0, rng);
    const FiniteDistribution nu = random_finite(count(rng), dim, 1.0, rng);
    for (double d : deltas) {
      const DivergenceResult div = delta_alpha_winf(mu, nu, d, d);
      if (!verify_certificate(div.certificate, mu, nu)) ++bad_certificates;
      for (double q : qs) {
        const Lemma1Check c = lemma1_check(mu, nu, q, d);
        ++checks;
        worst_slack = std::min(worst_slack, c.bound - c.divergence);
        if (!c.holds) ++failures;
      }
    }
  }
  holds = failures == 0 && bad_certificates == 0;

  json counter = json::object();
  if (s.contains("counterexample")) {
    const json& ce = s.at("counterexample");
    const double eps0 = ce.value("eps0", 0.1), delta = ce.value("delta", 0.1), q = ce.value("q", 2.0);
    const auto rs = ce.value("r", std::vector<double>{1e2, 1e4, 1e6});
    json rows = json::array();
    bool ok = true;
    double prev = -1.0;
    for (double r : rs) {
      const TwoPoint tp = lemma1_counterexample(r, eps0, delta);
      const double div = delta_alpha_winf(tp.mu, tp.nu, delta, delta).value;
      const double wq = wasserstein_q(tp.mu, tp.nu, q);
      // Any coupling moves the delta atom at -r at least r.
      const double floor = r * std::pow(delta, 1.0 / q);
      const bool row_ok = div <= eps0 * (1.0 + 1e-12) && wq >= floor * (1.0 - 1e-9) && wq > prev;
      ok = ok && row_ok;
      prev = wq;
      rows.push_back({{"r", r}, {"divergence", div}, {"wq", wq}, {"wq_floor", floor}, {"holds", row_ok}});
    }
    counter = {{"eps0", eps0}, {"delta", delta}, {"q", q}, {"rows", rows}, {"holds", ok}};
    holds = holds && ok;
  }
  return {{"pairs", pairs},
          {"checks", checks},
          {"failures", failures},
          {"invalid_certificates", bad_certificates},
          {"min_slack", checks > 0 ? json(worst_slack) : json()},
          {"counterexample", counter},
          {"holds", holds}};
}

json run_theorem2(const json& s, std::uint64_t seed, std::optional<std::size_t> trials_override,
                  std::size_t threads) {
  const std::size_t trials = trial_count(s, trials_override);
  const json& cases = s.at("cases");
  if (!cases.is_array() || cases.empty()) throw ConfigError("theorem2.cases must be a nonempty array");
  json out = json::array();
  bool holds = true;
  std::size_t idx = 0;
  for (const json& c : cases) {
    Engine rng = make_engine(derive_seed(seed, kTheorem2Stream), idx);
    const FiniteDistribution prior = parse_finite(c, rng);
    LinearForward fwd;
    fwd.A = c.contains("A") ? parse_matrix(c.at("A")) : Matrix::Identity(prior.dim(), prior.dim());
    fwd.sigma = c.at("sigma").get<double>();
    fwd.m = c.value("m", 1.0);
    const Metric metric = parse_metric(c.value("metric", std::string("l2")));
    const auto eps = c.at("eps").get<std::vector<double>>();
    const Theorem2Report rep = validate_theorem2(prior, fwd, eps, trials,
                                                 derive_seed(derive_seed(seed, kTheorem2Stream), idx + 1000),
                                                 metric, threads);
    json j = to_json(rep);
    j["name"] = c.value("name", "case" + std::to_string(idx));
    out.push_back(j);
    holds = holds && rep.holds;
    ++idx;
  }
  return {{"cases", out}, {"holds", holds}};
}

json run_theorem1(const json& s, std::uint64_t seed, std::optional<std::size_t> trials_override,
                  std::size_t threads) {
  Engine rng = make_engine(seed, kTheorem1Stream);
  const FiniteDistribution mu = parse_finite(s.at("mu"), rng);
  const json& nus = s.at("nu");
  double alpha = s.value("alpha", 0.0);
  FiniteDistribution nu = mu;
  if (nus.contains("shift")) {
    const double keep = nus.at("shift").at("keep_mass").get<double>();
    nu = shifted(mu, keep, nus.at("shift").value("offset", 50.0));
    if (!s.contains("alpha")) alpha = 1.0 - keep;
  } else if (!nus.value("same", false)) {
    nu = parse_finite(nus, rng);
  }
  Theorem1Config cfg{mu, nu};
  cfg.delta = s.value("delta", 0.0);
  cfg.alpha = alpha;
  cfg.eps = s.at("eps").get<double>();
  cfg.sigma = s.at("sigma").get<double>();
  cfg.m_grid = s.at("m_grid").get<std::vector<std::size_t>>();
  cfg.c_grid = s.at("c_grid").get<std::vector<double>>();
  cfg.trials = trial_count(s, trials_override);
  cfg.seed = derive_seed(seed, kTheorem1Stream + 100);
  cfg.slack = s.value("slack", 0.05);
  cfg.threads = threads;
  const Theorem1Report rep = validate_theorem1(cfg);
  json j = to_json(rep);
  j["delta"] = cfg.delta;
  j["alpha"] = cfg.alpha;
  j["eps"] = cfg.eps;
  j["sigma"] = cfg.sigma;
  j["trials"] = cfg.trials;
  j["slack"] = cfg.slack;
  return j;
}

}  // namespace

json validate_theory(const json& spec, std::optional<std::size_t> trials, std::size_t threads) {
  if (!spec.is_object()) throw ConfigError("theory spec must be a JSON object");
  if (trials && *trials == 0) throw ConfigError("--trials must be positive");
  if (!spec.contains("lemma1") && !spec.contains("theorem1") && !spec.contains("theorem2")) {
    throw ConfigError("theory spec has no lemma1, theorem1 or theorem2 section");
  }
  const std::uint64_t seed = spec.value("seed", std::uint64_t{0});
  json report = {{"seed", seed}};
  bool holds = true;
  if (spec.contains("lemma1")) {
    report["lemma1"] = run_lemma1(spec.at("lemma1"), seed);
    holds = holds && report["lemma1"]["holds"].get<bool>();
  }
  if (spec.contains("theorem2")) {
    report["theorem2"] = run_theorem2(spec.at("theorem2"), seed, trials, threads);
    holds = holds && report["theorem2"]["holds"].get<bool>();
  }
  if (spec.contains("theorem1")) {
    report["theorem1"] = run_theorem1(spec.at("theorem1"), seed, trials, threads);
    holds = holds && report["theorem1"]["holds"].get<bool>();
  }
  report["holds"] = holds;
  return report;
}

}  // namespace lcs::cli
