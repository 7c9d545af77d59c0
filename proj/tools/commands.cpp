#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "lcs/image_io.hpp"
#include "lcs/parallel.hpp"
#include "lcs/theory/validation.hpp"
#include "ops.hpp"

namespace lcs::cli {
namespace {

CoilSensitivities load_coils(const fs::path& path) {
  CoilSensitivities s;
  s.maps = io::read_image_stack(path);
  if (s.maps.empty()) throw ConfigError("coil file has no maps");
  s.height = s.maps.front().height();
  s.width = s.maps.front().width();
  return s;
}

void require_parent(const fs::path& out) {
  const fs::path parent = out.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output directory " + parent.string() + " does not exist");
  }
}

// Reads "sigma" from a k-space sidecar when present.
std::optional<double> sidecar_sigma(const fs::path& kspace) {
  const fs::path sc = sidecar_path(kspace);
  if (!fs::exists(sc)) return std::nullopt;
  const json j = read_json(sc);
  if (j.contains("sigma") && j.at("sigma").is_number()) return j.at("sigma").get<double>();
  return std::nullopt;
}

std::vector<fs::path> image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".img") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const TheoryFailure*>(&e) != nullptr) return kTheory;
  if (dynamic_cast<const theory::TheoryPreconditionError*>(&e) != nullptr) return kTheory;
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kNumerical;
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compressed-sensing MRI reconstruction and posterior sampling toolkit", "lcs"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads for chains, trials and batch metrics")
      ->check(CLI::PositiveNumber);

  // phantom
  auto* ph = app.add_subcommand("phantom", "Generate a ground-truth image");
  std::string ph_kind = "shepp-logan", ph_size, ph_out, ph_prior;
  std::uint64_t ph_seed = 0;
  double ph_phase = 0.0;
  ph->add_option("--kind", ph_kind, "shepp-logan or gmm-sample");
  ph->add_option("--size", ph_size, "HxW")->required();
  ph->add_option("--seed", ph_seed);
  ph->add_option("--phase", ph_phase, "Peak amplitude of a smooth random phase (radians)");
  ph->add_option("--prior", ph_prior, "GMM prior JSON (gmm-sample)");
  ph->add_option("--out", ph_out)->required();

  // coils
  auto* co = app.add_subcommand("coils", "Simulate coil sensitivity maps");
  CoilParams cp;
  std::string co_size, co_out;
  co->add_option("--size", co_size, "HxW")->required();
  co->add_option("--coils", cp.coils)->check(CLI::PositiveNumber);
  co->add_option("--seed", cp.seed);
  co->add_flag("--uniform", cp.uniform, "All maps identically one");
  co->add_option("--ring-radius", cp.ring_radius);
  co->add_option("--lobe-width", cp.lobe_width);
  co->add_option("--phase-slope", cp.phase_slope);
  co->add_option("--max-gradient", cp.max_gradient);
  co->add_option("--out", co_out)->required();

  // mask
  auto* mk = app.add_subcommand("mask", "Generate a k-space sampling mask");
  std::string mk_kind, mk_size, mk_out;
  double mk_R = 0.0;
  std::size_t mk_acs = 0;
  std::uint64_t mk_seed = 0;
  mk->add_option("--kind", mk_kind)->required();
  mk->add_option("--size", mk_size, "HxW")->required();
  mk->add_option("--R", mk_R, "Acceleration factor")->required();
  mk->add_option("--acs", mk_acs);
  mk->add_option("--seed", mk_seed);
  mk->add_option("--out", mk_out)->required();

  // acquire
  auto* aq = app.add_subcommand("acquire", "Simulate multi-coil k-space");
  std::string aq_image, aq_coils, aq_mask, aq_out;
  std::optional<double> aq_sigma;
  std::uint64_t aq_seed = 0;
  aq->add_option("--image", aq_image)->required();
  aq->add_option("--coils", aq_coils)->required();
  aq->add_option("--mask", aq_mask)->required();
  aq->add_option("--sigma", aq_sigma, "Complex noise std per sample (default 1% of the 99th-percentile magnitude)");
  aq->add_option("--seed", aq_seed);
  aq->add_option("--out", aq_out)->required();

  // reconstruct
  auto* rc = app.add_subcommand("reconstruct", "Reconstruct an image from k-space");
  std::string rc_method, rc_kspace, rc_coils, rc_mask, rc_out, rc_prior, rc_schedule;
  std::optional<double> rc_sigma;
  ReconOptions ro;
  rc->add_option("--method", rc_method, "zero-fill, mvue, l1-wavelet or langevin")->required();
  rc->add_option("--kspace", rc_kspace)->required();
  rc->add_option("--coils", rc_coils)->required();
  rc->add_option("--mask", rc_mask)->required();
  rc->add_option("--out", rc_out)->required();
  rc->add_option("--cg-iters", ro.cg.max_iters);
  rc->add_option("--cg-tol", ro.cg.tol);
  rc->add_option("--lambda", ro.wavelet.lambda);
  rc->add_option("--levels", ro.wavelet.levels);
  rc->add_option("--iters", ro.wavelet.iters);
  rc->add_option("--step", ro.wavelet.step);
  rc->add_option("--prior", rc_prior, "Prior JSON (langevin)");
  rc->add_option("--schedule", rc_schedule, "Annealing schedule JSON (langevin)");
  rc->add_option("--chains", ro.chains);
  rc->add_option("--seed", ro.seed);
  rc->add_option("--sigma", rc_sigma, "Noise level (default: from the k-space sidecar)");

  // metrics
  auto* me = app.add_subcommand("metrics", "PSNR/SSIM between magnitude images");
  std::string me_ref, me_rec, me_out, me_csv;
  double me_thr = kDefaultMaskThreshold, me_conf = 0.95;
  me->add_option("--ref", me_ref, "Reference image, or a directory matched by file name")->required();
  me->add_option("--rec", me_rec, "Reconstruction image, or a directory for batch mode")->required();
  me->add_option("--threshold", me_thr, "Mask threshold as a fraction of max|ref|");
  me->add_option("--confidence", me_conf);
  me->add_option("--out", me_out, "JSON report (default stdout)");
  me->add_option("--csv", me_csv, "Per-image CSV (batch mode)");

  // validate-theory
  auto* vt = app.add_subcommand("validate-theory", "Run the transport and posterior-sampling validations");
  std::string vt_spec, vt_out;
  std::optional<std::size_t> vt_trials;
  vt->add_option("--spec", vt_spec)->required();
  vt->add_option("--trials", vt_trials, "Override every suite's trial count");
  vt->add_option("--out", vt_out, "JSON report (default stdout)");

  // render
  auto* rd = app.add_subcommand("render", "Write an 8-bit PGM of |image| / p99");
  std::string rd_image, rd_out;
  rd->add_option("--image", rd_image)->required();
  rd->add_option("--out", rd_out)->required();

  // run
  auto* rn = app.add_subcommand("run", "Run a full pipeline from a JSON config");
  std::string rn_config, rn_dir;
  rn->add_option("--config", rn_config)->required();
  rn->add_option("--out-dir", rn_dir)->required();

  std::vector<std::string> store{"lcs"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // --help and friends carry exit code 0.
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*ph) {
      const auto [h, w] = parse_size(ph_size);
      PhantomParams p;
      p.kind = parse_phantom_kind(ph_kind);
      p.height = h;
      p.width = w;
      p.seed = ph_seed;
      p.phase_amplitude = ph_phase;
      std::unique_ptr<GaussianMixturePrior> prior;
      if (p.kind == PhantomKind::gmm_sample) {
        if (ph_prior.empty()) throw ConfigError("gmm-sample needs --prior");
        prior = parse_gmm(read_json(ph_prior), h, w, fs::path(ph_prior).parent_path());
        p.prior = prior.get();
      }
      require_parent(ph_out);
      const ComplexImage img = make_phantom(p);
      io::write_image(img, ph_out);
      json sc = {{"kind", std::string(to_string(p.kind))}, {"seed", p.seed}, {"phase_amplitude", p.phase_amplitude}};
      sc["image"] = image_json(img);
      write_json(sc, sidecar_path(ph_out));
    } else if (*co) {
      const auto [h, w] = parse_size(co_size);
      require_parent(co_out);
      const CoilSensitivities s = simulate_coils(h, w, cp);
      io::write_image_stack(s.maps, co_out);
      json sc = to_json(cp);
      sc["height"] = h;
      sc["width"] = w;
      sc["measured_max_gradient"] = s.max_gradient();
      write_json(sc, sidecar_path(co_out));
    } else if (*mk) {
      const auto [h, w] = parse_size(mk_size);
      const MaskKind kind = parse_mask_kind(mk_kind);
      require_parent(mk_out);
      const SamplingMask m = make_mask(kind, h, w, mk_R, mk_acs, mk_seed);
      write_mask(m, mk_out);
      write_json(mask_json(m, mk_R, mk_seed), sidecar_path(mk_out));
    } else if (*aq) {
      AcquisitionModel model;
      const ComplexImage x = io::read_image(aq_image);
      model.sens = load_coils(aq_coils);
      model.mask = read_mask(aq_mask);
      if (aq_sigma && !(*aq_sigma >= 0.0)) throw ConfigError("--sigma must be >= 0");
      model.validate();
      if (x.height() != model.height() || x.width() != model.width()) {
        throw DimensionMismatch("image, coils and mask differ in shape");
      }
      require_parent(aq_out);
      model.noise_sigma = aq_sigma ? *aq_sigma : default_noise_sigma(model, x);
      const KSpace k = acquire(model, x, aq_seed);
      io::write_kspace(k, aq_out);
      write_json({{"sigma", model.noise_sigma},
                  {"sigma_rule", aq_sigma ? "explicit" : "0.01 * p99 |noiseless samples|"},
                  {"seed", aq_seed},
                  {"coils", k.coils()},
                  {"height", k.height()},
                  {"width", k.width()},
                  {"acceleration", model.mask.acceleration()}},
                 sidecar_path(aq_out));
    } else if (*rc) {
      check_method(rc_method);
      AcquisitionModel model;
      model.sens = load_coils(rc_coils);
      model.mask = read_mask(rc_mask);
      model.validate();
      const KSpace y = io::read_kspace(rc_kspace);
      if (y.coils() != model.coils() || y.height() != model.height() || y.width() != model.width()) {
        throw DimensionMismatch("k-space, coils and mask differ in shape");
      }
      std::unique_ptr<Prior> prior;
      ro.threads = threads;
      if (rc_method == "langevin") {
        if (rc_prior.empty()) throw ConfigError("langevin needs --prior");
        prior = parse_prior(read_json(rc_prior), model.height(), model.width(), fs::path(rc_prior).parent_path());
        ro.prior = prior.get();
        if (!rc_schedule.empty()) ro.schedule = parse_schedule(read_json(rc_schedule));
        const auto s = rc_sigma ? rc_sigma : sidecar_sigma(rc_kspace);
        if (!s) throw ConfigError("langevin needs --sigma (no sigma in the k-space sidecar)");
        if (!(*s >= 0.0)) throw ConfigError("sigma must be >= 0");
        ro.sigma = *s;
        if (ro.chains == 0) throw ConfigError("--chains must be >= 1");
      } else if (rc_method == "mvue") {
        ro.cg.validate();
      } else if (rc_method == "l1-wavelet") {
        ro.wavelet.validate(model.height(), model.width());
      }
      require_parent(rc_out);
      Stopwatch sw;
      const Reconstruction r = reconstruct(rc_method, model, y, ro);
      sw.lap(rc_method);
      write_reconstruction(r, rc_out);
      write_json(sw.to_json(), fs::path(rc_out + ".timings.json"));
      if (rc_method == "mvue" && !r.info.at("converged").get<bool>()) {
        err << "warning: CG stopped after " << r.info.at("iterations") << " iterations without reaching tol\n";
      }
    } else if (*me) {
      if (!(me_thr >= 0.0 && me_thr <= 1.0)) throw ConfigError("--threshold must lie in [0, 1]");
      if (!(me_conf > 0.0 && me_conf < 1.0)) throw ConfigError("--confidence must lie in (0, 1)");
      json report;
      if (fs::is_directory(me_rec)) {
        const auto files = image_files(me_rec);
        if (files.empty()) throw ConfigError("no .img files in " + me_rec);
        const bool ref_dir = fs::is_directory(me_ref);
        std::vector<NamedReport> rows(files.size());
        parallel_for(files.size(), threads, [&](std::size_t i) {
          const fs::path ref = ref_dir ? fs::path(me_ref) / files[i].filename() : fs::path(me_ref);
          rows[i] = {files[i].filename().string(), evaluate(io::read_image(ref), io::read_image(files[i]), me_thr)};
        });
        std::vector<double> ps, ss, mps, mss;
        json per = json::array();
        for (const auto& r : rows) {
          ps.push_back(r.report.psnr);
          ss.push_back(r.report.ssim);
          mps.push_back(r.report.masked_psnr);
          mss.push_back(r.report.masked_ssim);
          json j = to_json(r.report);
          j["name"] = r.name;
          per.push_back(j);
        }
        auto agg = [&](const std::vector<double>& v) -> json {
          for (double x : v) {
            if (!std::isfinite(x)) return nullptr;
          }
          return to_json(aggregate(v, me_conf));
        };
        report = {{"images", per},
                  {"psnr", agg(ps)},
                  {"ssim", agg(ss)},
                  {"masked_psnr", agg(mps)},
                  {"masked_ssim", agg(mss)}};
        if (!me_csv.empty()) {
          std::ofstream os(me_csv, std::ios::binary);
          if (!os) throw IoError(IoErrc::open_failed, "cannot open " + me_csv);
          write_csv(os, rows);
        }
      } else {
        report = to_json(evaluate(io::read_image(me_ref), io::read_image(me_rec), me_thr));
      }
      if (me_out.empty()) {
        out << report.dump(2) << '\n';
      } else {
        write_json(report, me_out);
      }
    } else if (*vt) {
      const json spec = read_json(vt_spec);
      const json report = validate_theory(spec, vt_trials, threads);
      if (vt_out.empty()) {
        out << report.dump(2) << '\n';
      } else {
        write_json(report, vt_out);
      }
      if (!report.at("holds").get<bool>()) throw TheoryFailure("a theory assertion failed", report);
    } else if (*rd) {
      const ComplexImage img = io::read_image(rd_image);
      io::write_bytes(render_pgm(img), rd_out);
    } else if (*rn) {
      const json cfg = read_json(rn_config);
      const json manifest = run_pipeline(cfg, fs::path(rn_config).parent_path(), rn_dir, threads);
      out << manifest.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace lcs::cli
