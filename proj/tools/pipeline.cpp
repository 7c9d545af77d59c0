#include <fstream>

#include "cli.hpp"
#include "lcs/image_io.hpp"
#include "ops.hpp"

namespace lcs::cli {
namespace {

std::uint64_t seed_of(const json& j) { return j.value("seed", std::uint64_t{0}); }

}  // namespace

json run_pipeline(const json& cfg, const fs::path& config_dir, const fs::path& out_dir, std::size_t threads) {
  // Everything is parsed and computed in memory first; files are written only
  // once every stage has succeeded.
  if (!cfg.is_object()) throw ConfigError("run config must be a JSON object");
  const std::string name = cfg.value("name", std::string("run"));
  const auto [h, w] = parse_size(cfg.at("size").get<std::string>());

  const json& pj = cfg.at("phantom");
  PhantomParams pp;
  pp.kind = parse_phantom_kind(pj.value("kind", std::string("shepp-logan")));
  pp.height = h;
  pp.width = w;
  pp.seed = seed_of(pj);
  pp.phase_amplitude = pj.value("phase_amplitude", 0.0);

  const json& cj = cfg.at("coils");
  CoilParams cp;
  cp.coils = cj.value("count", cp.coils);
  cp.seed = seed_of(cj);
  cp.uniform = cj.value("uniform", cp.uniform);
  cp.ring_radius = cj.value("ring_radius", cp.ring_radius);
  cp.lobe_width = cj.value("lobe_width", cp.lobe_width);
  cp.phase_slope = cj.value("phase_slope", cp.phase_slope);
  cp.max_gradient = cj.value("max_gradient", cp.max_gradient);

  const json& mj = cfg.at("mask");
  const MaskKind mkind = parse_mask_kind(mj.at("kind").get<std::string>());
  const double R = mj.at("R").get<double>();
  const std::size_t acs = mj.value("acs", std::size_t{0});
  const std::uint64_t mseed = seed_of(mj);

  const json nj = cfg.value("noise", json::object());
  const std::uint64_t nseed = seed_of(nj);
  std::optional<double> sigma_cfg;
  if (nj.contains("sigma") && nj.at("sigma").is_number()) {
    sigma_cfg = nj.at("sigma").get<double>();
    if (!(*sigma_cfg >= 0.0)) throw ConfigError("noise.sigma must be >= 0");
  } else if (nj.contains("sigma") && nj.at("sigma") != "auto") {
    throw ConfigError("noise.sigma must be a number or \"auto\"");
  }

  const json& rj = cfg.at("reconstruct");
  const auto methods = rj.at("methods").get<std::vector<std::string>>();
  if (methods.empty()) throw ConfigError("reconstruct.methods is empty");
  for (const auto& m : methods) check_method(m);
  ReconOptions ro;
  ro.threads = threads;
  if (rj.contains("mvue")) {
    ro.cg.max_iters = rj["mvue"].value("max_iters", ro.cg.max_iters);
    ro.cg.tol = rj["mvue"].value("tol", ro.cg.tol);
  }
  ro.cg.validate();
  if (rj.contains("l1-wavelet")) {
    const json& l = rj["l1-wavelet"];
    ro.wavelet.lambda = l.value("lambda", ro.wavelet.lambda);
    ro.wavelet.iters = l.value("iters", ro.wavelet.iters);
    ro.wavelet.levels = l.value("levels", ro.wavelet.levels);
    ro.wavelet.step = l.value("step", ro.wavelet.step);
  }
  const bool uses_l1 = std::find(methods.begin(), methods.end(), "l1-wavelet") != methods.end();
  if (uses_l1) ro.wavelet.validate(h, w);

  std::unique_ptr<Prior> prior;
  std::unique_ptr<GaussianMixturePrior> phantom_prior;
  const bool uses_langevin = std::find(methods.begin(), methods.end(), "langevin") != methods.end();
  if (uses_langevin) {
    const json lj = rj.value("langevin", json::object());
    ro.chains = lj.value("chains", std::size_t{1});
    if (ro.chains == 0) throw ConfigError("langevin.chains must be >= 1");
    ro.seed = seed_of(lj);
    ro.schedule = parse_schedule(lj.value("schedule", json()));
    prior = parse_prior(cfg.at("prior"), h, w, config_dir);
  }
  if (pp.kind == PhantomKind::gmm_sample) {
    phantom_prior = parse_gmm(cfg.at("prior"), h, w, config_dir);
    pp.prior = phantom_prior.get();
  }
  const json metj = cfg.value("metrics", json::object());
  const double threshold = metj.value("threshold", kDefaultMaskThreshold);
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("metrics.threshold must lie in [0, 1]");
  const bool render = cfg.value("render", true);

  // Compute.
  Stopwatch sw;
  const ComplexImage x = make_phantom(pp);
  sw.lap("phantom");
  AcquisitionModel model;
  model.sens = simulate_coils(h, w, cp);
  sw.lap("coils");
  model.mask = make_mask(mkind, h, w, R, acs, mseed);
  sw.lap("mask");
  // Retrospective undersampling: simulate fully sampled noisy k-space, then
  // mask it. The fully sampled MVUE is the reference for all metrics.
  AcquisitionModel full = model;
  full.mask = SamplingMask::full(h, w);
  model.noise_sigma = sigma_cfg ? *sigma_cfg : default_noise_sigma(full, x);
  full.noise_sigma = model.noise_sigma;
  const KSpace y_full = acquire(full, x, nseed);
  KSpace y = y_full;
  apply_mask(model.mask, y);
  sw.lap("acquire");
  const MvueResult ref = mvue(full, y_full, ro.cg);
  sw.lap("reference");
  ro.sigma = model.noise_sigma;
  ro.prior = prior.get();
  std::vector<Reconstruction> recons;
  for (const auto& m : methods) {
    recons.push_back(reconstruct(m, model, y, ro));
    sw.lap("reconstruct:" + m);
  }
  std::vector<NamedReport> rows;
  for (const auto& r : recons) rows.push_back({r.method, evaluate(ref.image, r.image, threshold)});
  std::vector<std::vector<std::uint8_t>> renders;
  if (render) {
    renders.push_back(render_pgm(ref.image));
    for (const auto& r : recons) renders.push_back(render_pgm(r.image));
  }
  sw.lap("metrics");

  // Write.
  fs::create_directories(out_dir);
  json files = json::array();
  auto rel = [&](const fs::path& p) { return p.filename().string(); };
  const fs::path phantom_path = out_dir / "phantom.img";
  io::write_image(x, phantom_path);
  json psc = {{"kind", std::string(to_string(pp.kind))}, {"seed", pp.seed}, {"phase_amplitude", pp.phase_amplitude}};
  psc["image"] = image_json(x);
  write_json(psc, sidecar_path(phantom_path));
  files.push_back(rel(phantom_path));

  const fs::path coils_path = out_dir / "coils.maps";
  io::write_image_stack(model.sens.maps, coils_path);
  json csc = to_json(cp);
  csc["measured_max_gradient"] = model.sens.max_gradient();
  write_json(csc, sidecar_path(coils_path));
  files.push_back(rel(coils_path));

  const fs::path mask_path = out_dir / "mask.mask";
  write_mask(model.mask, mask_path);
  write_json(mask_json(model.mask, R, mseed), sidecar_path(mask_path));
  files.push_back(rel(mask_path));

  const fs::path ref_path = out_dir / "reference.img";
  io::write_image(ref.image, ref_path);
  write_json({{"method", "mvue"},
              {"sampling", "full"},
              {"iterations", ref.iterations},
              {"converged", ref.converged},
              {"image", image_json(ref.image)}},
             sidecar_path(ref_path));
  files.push_back(rel(ref_path));

  const fs::path ksp_path = out_dir / "kspace.ksp";
  io::write_kspace(y, ksp_path);
  write_json({{"sigma", model.noise_sigma},
              {"sigma_rule", sigma_cfg ? "explicit" : "0.01 * p99 |noiseless samples|"},
              {"sampling", "retrospective"},
              {"seed", nseed},
              {"coils", y.coils()},
              {"height", y.height()},
              {"width", y.width()},
              {"acceleration", model.mask.acceleration()}},
             sidecar_path(ksp_path));
  files.push_back(rel(ksp_path));

  for (const auto& r : recons) {
    for (const auto& p : write_reconstruction(r, out_dir / ("recon_" + r.method + ".img"))) files.push_back(rel(p));
  }

  json metrics = json::object();
  for (const auto& r : rows) metrics[r.name] = to_json(r.report);
  write_json({{"reference", "reference.img"}, {"methods", metrics}}, out_dir / "metrics.json");
  files.push_back("metrics.json");
  {
    std::ofstream os(out_dir / "metrics.csv", std::ios::binary);
    if (!os) throw IoError(IoErrc::open_failed, "cannot write metrics.csv");
    write_csv(os, rows);
  }
  files.push_back("metrics.csv");

  if (render) {
    std::vector<std::string> names{"reference.pgm"};
    for (const auto& r : recons) names.push_back("recon_" + r.method + ".pgm");
    for (std::size_t i = 0; i < renders.size(); ++i) {
      io::write_bytes(renders[i], out_dir / names[i]);
      files.push_back(names[i]);
    }
  }

  json manifest = {{"name", name},
                   {"size", std::to_string(h) + "x" + std::to_string(w)},
                   {"methods", methods},
                   {"sigma", model.noise_sigma},
                   {"mask", mask_json(model.mask, R, mseed)},
                   {"files", files},
                   {"metrics", metrics}};
  write_json(manifest, out_dir / "manifest.json");
  write_json(sw.to_json(), out_dir / "timings.json");
  return manifest;
}

}  // namespace lcs::cli
