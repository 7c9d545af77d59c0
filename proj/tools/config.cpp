#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lcs/acquisition.hpp"
#include "lcs/estimators.hpp"
#include "lcs/image_io.hpp"

namespace lcs::cli {
namespace {

Vector channel_mean(const json& m, std::size_t h, std::size_t w, const fs::path& base) {
  const auto n2 = static_cast<Eigen::Index>(2 * h * w);
  if (m.is_array()) {
    const auto v = m.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != n2) {
      throw ConfigError("inline mean needs " + std::to_string(n2) + " channel values");
    }
    return Eigen::Map<const Vector>(v.data(), n2);
  }
  if (!m.is_object()) throw ConfigError("mean must be an array or an object");
  if (m.contains("fill")) {
    Vector v = Vector::Zero(n2);
    v.head(n2 / 2).setConstant(m.at("fill").get<double>());
    return v;
  }
  if (m.contains("phantom")) {
    PhantomParams p;
    p.kind = parse_phantom_kind(m.at("phantom").get<std::string>());
    if (p.kind != PhantomKind::shepp_logan) throw ConfigError("prior mean phantom must be shepp-logan");
    p.height = h;
    p.width = w;
    p.phase_amplitude = m.value("phase_amplitude", 0.0);
    p.seed = m.value("seed", std::uint64_t{0});
    return to_channels(make_phantom(p));
  }
  if (m.contains("file")) {
    const ComplexImage img = io::read_image(base / m.at("file").get<std::string>());
    if (img.height() != h || img.width() != w) throw ConfigError("prior mean file has the wrong shape");
    return to_channels(img);
  }
  throw ConfigError("mean object needs one of fill, phantom, file");
}

Vector channel_variance(const json& v, std::size_t h, std::size_t w, const fs::path& base) {
  const auto n2 = static_cast<Eigen::Index>(2 * h * w);
  Vector out;
  if (v.is_number()) {
    out = Vector::Constant(n2, v.get<double>());
  } else if (v.is_array()) {
    const auto a = v.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(a.size()) != n2) {
      throw ConfigError("inline variance needs " + std::to_string(n2) + " channel values");
    }
    out = Eigen::Map<const Vector>(a.data(), n2);
  } else if (v.is_object() && v.contains("file")) {
    // Per-pixel variance from the real part, shared by both channels.
    const ComplexImage img = io::read_image(base / v.at("file").get<std::string>());
    if (img.height() != h || img.width() != w) throw ConfigError("prior variance file has the wrong shape");
    out.resize(n2);
    for (std::size_t i = 0; i < img.size(); ++i) {
      out[static_cast<Eigen::Index>(i)] = img[i].real();
      out[static_cast<Eigen::Index>(i + img.size())] = img[i].real();
    }
  } else {
    throw ConfigError("variance must be a number, an array or {\"file\": ...}");
  }
  if (!(out.array() > 0.0).all() || !out.allFinite()) throw ConfigError("prior variances must be positive");
  return out;
}

}  // namespace

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto x = text.find('x');
  std::size_t h = 0, w = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("no x");
    std::size_t used = 0;
    h = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("junk");
    const std::string rest = text.substr(x + 1);
    w = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("junk");
  } catch (const std::exception&) {
    throw ConfigError("size must look like HxW, got '" + text + "'");
  }
  if (h == 0 || w == 0) throw ConfigError("size must be positive");
  return {h, w};
}

std::unique_ptr<GaussianMixturePrior> parse_gmm(const json& spec, std::size_t h, std::size_t w,
                                                const fs::path& base) {
  if (!spec.is_object() || spec.value("type", std::string()) != "gmm") throw ConfigError("expected a gmm prior");
  const json& comps = spec.at("components");
  if (!comps.is_array() || comps.empty()) throw ConfigError("gmm prior needs a nonempty components array");
  std::vector<MixtureComponent> out;
  double total = 0.0;
  for (const json& c : comps) {
    MixtureComponent mc;
    mc.weight = c.value("weight", 1.0);
    if (!(mc.weight > 0.0)) throw ConfigError("mixture weights must be positive");
    mc.mean = channel_mean(c.at("mean"), h, w, base);
    mc.variance = channel_variance(c.at("variance"), h, w, base);
    total += mc.weight;
    out.push_back(std::move(mc));
  }
  for (auto& c : out) c.weight /= total;
  return std::make_unique<GaussianMixturePrior>(std::move(out));
}

std::unique_ptr<Prior> parse_prior(const json& spec, std::size_t h, std::size_t w, const fs::path& base) {
  if (!spec.is_object()) throw ConfigError("prior must be an object");
  const std::string type = spec.value("type", std::string());
  if (type == "gmm") return parse_gmm(spec, h, w, base);
  if (type == "gaussian") {
    return std::make_unique<GaussianPrior>(channel_mean(spec.at("mean"), h, w, base),
                                           channel_variance(spec.at("variance"), h, w, base));
  }
  throw ConfigError("prior type must be gaussian or gmm");
}

ScheduleParams parse_schedule(const json& spec) {
  ScheduleParams p;
  if (spec.is_null()) return p;
  if (!spec.is_object()) throw ConfigError("schedule must be an object");
  p.beta_begin = spec.value("beta_begin", p.beta_begin);
  p.beta_end = spec.value("beta_end", p.beta_end);
  p.levels = spec.value("levels", p.levels);
  p.steps_per_level = spec.value("steps_per_level", p.steps_per_level);
  p.eta0 = spec.value("eta0", p.eta0);
  p.gamma_scale = spec.value("gamma_scale", p.gamma_scale);
  const std::string rule = spec.value("gamma_rule", std::string("equal-beta"));
  if (rule == "equal-beta") {
    p.gamma_rule = GammaRule::equal_beta;
  } else if (rule == "zero") {
    p.gamma_rule = GammaRule::zero;
  } else {
    throw ConfigError("gamma_rule must be equal-beta or zero");
  }
  make_schedule(p);  // validates
  return p;
}

fs::path sidecar_path(const fs::path& artifact) { return fs::path(artifact.string() + ".json"); }

fs::path with_tag(const fs::path& artifact, const std::string& tag) {
  fs::path out = artifact;
  out.replace_filename(artifact.stem().string() + "." + tag + artifact.extension().string());
  return out;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(IoErrc::open_failed, "cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError(IoErrc::write_failed, "failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(IoErrc::open_failed, "cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> render_pgm(const ComplexImage& img) {
  const Normalized n = normalize_99(img);
  std::ostringstream head;
  head << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const std::string h = head.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(h.size() + img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(std::abs(n.image[i]), 0.0, 1.0);
    out.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
  }
  return out;
}

}  // namespace lcs::cli
