#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcs/error.hpp"
#include "lcs/priors.hpp"
#include "lcs/sampler.hpp"
#include "lcs/signal.hpp"

namespace lcs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kTheory = 3 };

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Raised when a theory suite ran but one of its assertions failed.
class TheoryFailure : public Error {
 public:
  TheoryFailure(const std::string& what, json report) : Error(what), report_(std::move(report)) {}
  const json& report() const noexcept { return report_; }

 private:
  json report_;
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(const std::exception& e) noexcept;

// "64x64" -> {64, 64}
std::pair<std::size_t, std::size_t> parse_size(const std::string& text);

// Prior description: {"type": "gaussian", "mean": M, "variance": V} or
// {"type": "gmm", "components": [{"weight": w, "mean": M, "variance": V}, ...]}.
// M is an inline array of 2N channel values, {"fill": v}, {"phantom": kind}
// or {"file": path}; V is a scalar, an array or {"file": path}. Relative files
// resolve against `base`.
std::unique_ptr<Prior> parse_prior(const json& spec, std::size_t height, std::size_t width, const fs::path& base);
std::unique_ptr<GaussianMixturePrior> parse_gmm(const json& spec, std::size_t height, std::size_t width,
                                                const fs::path& base);

ScheduleParams parse_schedule(const json& spec);

// Sidecar path for an artifact: "<path>.json".
fs::path sidecar_path(const fs::path& artifact);
// "recon.img" + "std" -> "recon.std.img"
fs::path with_tag(const fs::path& artifact, const std::string& tag);

// Writes `j` followed by a newline (2-space indentation).
void write_json(const json& j, const fs::path& path);
json read_json(const fs::path& path);

// 8-bit binary PGM of the magnitude normalised by its 99th percentile.
std::vector<std::uint8_t> render_pgm(const ComplexImage& img);

// Full pipeline from a run configuration; returns the summary manifest.
json run_pipeline(const json& config, const fs::path& config_dir, const fs::path& out_dir, std::size_t threads);

// Theory suites described by a JSON document; `trials` overrides every suite's count.
json validate_theory(const json& spec, std::optional<std::size_t> trials, std::size_t threads);

}  // namespace lcs::cli
