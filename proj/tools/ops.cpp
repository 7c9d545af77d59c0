#include "ops.hpp"

#include "lcs/image_io.hpp"

namespace lcs::cli {

json to_json(const CoilParams& p) {
  return {{"coils", p.coils},
          {"uniform", p.uniform},
          {"ring_radius", p.ring_radius},
          {"lobe_width", p.lobe_width},
          {"phase_slope", p.phase_slope},
          {"max_gradient", p.max_gradient},
          {"seed", p.seed}};
}

json to_json(const ScheduleParams& p) {
  return {{"beta_begin", p.beta_begin},
          {"beta_end", p.beta_end},
          {"levels", p.levels},
          {"steps_per_level", p.steps_per_level},
          {"eta0", p.eta0},
          {"gamma_rule", p.gamma_rule == GammaRule::equal_beta ? "equal-beta" : "zero"},
          {"gamma_scale", p.gamma_scale}};
}

json mask_json(const SamplingMask& m, double requested_R, std::uint64_t seed) {
  return {{"kind", std::string(to_string(m.kind))},
          {"height", m.height},
          {"width", m.width},
          {"requested_R", requested_R},
          {"acceleration", m.acceleration()},
          {"kept", m.kept_count()},
          {"acs", m.acs},
          {"seed", seed}};
}

json image_json(const ComplexImage& img) {
  double peak = 0.0;
  for (const cplx& v : img.values()) peak = std::max(peak, std::abs(v));
  return {{"height", img.height()}, {"width", img.width()}, {"max_abs", peak}};
}

double default_noise_sigma(const AcquisitionModel& model, const ComplexImage& x) {
  const KSpace k = forward(model, x);
  std::vector<double> mags;
  for (std::size_t c = 0; c < k.coils(); ++c) {
    const auto plane = k.plane(c);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      if (model.mask.kept[i]) mags.push_back(std::abs(plane[i]));
    }
  }
  return 0.01 * percentile_nearest_rank(std::move(mags), 0.99);
}

void check_method(const std::string& method) {
  if (method != "zero-fill" && method != "mvue" && method != "l1-wavelet" && method != "langevin") {
    throw ConfigError("unknown method '" + method + "' (zero-fill, mvue, l1-wavelet, langevin)");
  }
}

Reconstruction reconstruct(const std::string& method, const AcquisitionModel& model, const KSpace& y,
                           const ReconOptions& opt) {
  check_method(method);
  Reconstruction r;
  r.method = method;
  if (method == "zero-fill") {
    r.image = zero_filled(model, y);
    r.info = json::object();
  } else if (method == "mvue") {
    MvueResult m = mvue(model, y, opt.cg);
    r.image = std::move(m.image);
    r.info = {{"iterations", m.iterations},
              {"converged", m.converged},
              {"max_iters", opt.cg.max_iters},
              {"tol", opt.cg.tol},
              {"final_normal_residual", m.normal_residual.back()},
              {"final_data_residual", m.data_residual.back()}};
  } else if (method == "l1-wavelet") {
    IstaResult m = l1_wavelet(model, y, opt.wavelet);
    r.image = std::move(m.image);
    r.info = {{"lambda", opt.wavelet.lambda},
              {"levels", opt.wavelet.levels},
              {"iterations", m.iterations},
              {"step", m.step},
              {"final_objective", m.objective.back()},
              {"objective_increased", m.objective_increased}};
  } else {
    if (opt.prior == nullptr) throw ConfigError("langevin needs a prior");
    if (opt.chains == 0) throw ConfigError("chains must be >= 1");
    if (opt.prior->dim() != static_cast<Eigen::Index>(2 * model.height() * model.width())) {
      throw DimensionMismatch("prior dimension does not match the image size");
    }
    const AnnealingSchedule sched = make_schedule(opt.schedule);
    PosteriorSampleSet s = posterior_ensemble(model, y, *opt.prior, sched, opt.sigma, opt.chains, opt.seed,
                                              opt.threads);
    r.image = std::move(s.mean);
    r.std = std::move(s.std);
    r.draws = std::move(s.draws);
    r.info = {{"chains", opt.chains},
              {"seed", opt.seed},
              {"chain_seeds", s.seeds},
              {"sigma", opt.sigma},
              {"steps", sched.size()},
              {"likelihood_consistent", likelihood_consistent(sched, opt.sigma)},
              {"schedule", to_json(opt.schedule)}};
  }
  r.info["method"] = method;
  r.info["image"] = image_json(r.image);
  return r;
}

std::vector<fs::path> write_reconstruction(const Reconstruction& r, const fs::path& out) {
  std::vector<fs::path> written{out};
  io::write_image(r.image, out);
  json info = r.info;
  if (r.method == "langevin") {
    const fs::path std_path = with_tag(out, "std");
    io::write_real_image(r.std, std_path);
    written.push_back(std_path);
    json draws = json::array();
    for (std::size_t k = 0; k < r.draws.size(); ++k) {
      const fs::path p = with_tag(out, "draw" + std::to_string(k));
      io::write_image(r.draws[k], p);
      written.push_back(p);
      draws.push_back(p.filename().string());
    }
    info["mean"] = out.filename().string();
    info["std"] = std_path.filename().string();
    info["draws"] = draws;
  }
  write_json(info, sidecar_path(out));
  written.push_back(sidecar_path(out));
  return written;
}

}  // namespace lcs::cli
