#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kreindil/model_io.hpp"

namespace kreindil::cli {

enum ExitCode : int {
  kPass = 0,
  kUsage = 1,
  kHypothesis = 2,
  kCertification = 3,
  kDilation = 4,
};

/// Used when neither the command line nor the model fixes θ.
inline constexpr double kDefaultTheta = 0.78539816339744830962;  // π/4

struct CommandResult {
  int exit_code = kPass;
  nlohmann::json report;
  std::string csv;  // dilate only
};

struct AnalyzeOptions {
  std::optional<double> theta;
  std::optional<double> beta;
};

struct CertifyOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  int max_points = 5;
  double span = 2.0;
  double xi_max = 1.0;
  int jobs = 1;
  bool force = false;
  std::optional<double> theta;
  std::optional<double> beta;
};

struct DilateOptions {
  double delta = 0.25;
  int m = 8;
  double cutoff = 1e-10;
  bool plain = false;  // dilate in the model's own product, skipping the metric transform
  bool force = false;
  std::optional<double> theta;
  std::optional<double> beta;
};

struct GenOptions {
  Index dim = 2;
  double theta = kDefaultTheta;
  double beta = 0.0;
  bool metric = false;
  std::uint64_t seed = 0;
};

CommandResult cmd_analyze(const ModelFile& model, const AnalyzeOptions& opts);
CommandResult cmd_certify(const ModelFile& model, const CertifyOptions& opts);
CommandResult cmd_dilate(const ModelFile& model, const DilateOptions& opts);
ModelFile cmd_gen(const GenOptions& opts);

/// Parses argv, runs one command, prints the JSON report to stdout and
/// returns the exit code.
int run(int argc, char** argv);

}  // namespace kreindil::cli
