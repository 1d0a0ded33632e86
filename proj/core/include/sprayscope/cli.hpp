#pragma once

// The check pipeline behind the command-line tool: resolve an input, sample,
// run every check, decide, reconstruct, and report as text or JSON.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sprayscope/checks.hpp"
#include "sprayscope/finsler.hpp"
#include "sprayscope/gallery.hpp"

namespace sprayscope::cli {

enum class Format { text, json };
enum class Mode { automatic, spray, finsler };

std::string to_string(Mode m);
Mode mode_from_string(std::string_view s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `lo:hi` (every coordinate), `x=lo:hi`, `y=lo:hi`, `x2=lo:hi`, `y1=lo:hi`.
struct BoxOverride {
  std::string target;  // "", "x", "y", "x<k>", "y<k>"
  checks::Interval range{};
};
BoxOverride parse_box(std::string_view text);
gallery::Params::value_type parse_param(std::string_view text);

struct RunConfig {
  std::string input;    // path to a definition file
  std::string gallery;  // or a gallery name
  gallery::Params params;
  std::size_t points = 64;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::vector<BoxOverride> box;
  Format format = Format::text;
  bool per_point = false;
  Mode mode = Mode::automatic;

  /// Throws ConfigError.
  void validate() const;
};

struct ConfigEcho {
  std::string source;  // "gallery" or "file"
  std::string input;
  std::string name;
  std::string kind;  // "spray" or "finsler"
  std::string mode;
  int dimension = 0;
  std::size_t points = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<checks::Interval> box_x;
  std::vector<checks::Interval> box_y;
  gallery::Params params;
};

struct Series {
  bool applicable = true;
  bool pass = true;
  double max = 0.0;
};

struct FunctionSummary {
  double max_homogeneity = 0.0;
  double min_F = 0.0;
  double min_g_eigen = 0.0;
  bool positive = false;
  bool homogeneous = false;
  bool positive_definite = false;
};

struct EinsteinSummary {
  bool pass = false;
  bool lambda_constant = false;
  double max_dJ_lambda = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct CheckSummary {
  Series homogeneity;
  int rank_required = 0;
  int rank_min = 0;
  bool rank_pass = false;
  Series D1;
  Series D2;
  Series isotropy;
  Series dJ_alpha;
  Series dJR_alpha;
  bool forms_agree = true;
  Series weak_ricci;
  double max_dh_R = 0.0;
  double min_abs_R = 0.0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t vanishing = 0;
  std::optional<FunctionSummary> finsler_function;
  std::optional<EinsteinSummary> einstein;
};

struct VerdictSummary {
  std::string status;
  int kappa = 0;
  std::string annotation;
  int exit_code = 3;
};

struct ReconstructionPoint {
  checks::Point point;
  double F2 = 0.0;
  double g_eigen_min = 0.0;
  double EL = 0.0;
  double flag = 0.0;
};

struct ReconstructionSummary {
  std::string outcome;
  int kappa = 0;
  double max_EL = 0.0;
  double max_flag = 0.0;
  double min_F2 = 0.0;
  double min_g_eigen = 0.0;
  std::vector<ReconstructionPoint> samples;
};

struct Report {
  ConfigEcho config;
  CheckSummary checks;
  VerdictSummary verdict;
  std::optional<ReconstructionSummary> reconstruction;
  std::optional<std::vector<checks::PointRecord>> points;
  /// Set when the run stopped on an input or validation error (exit code 3).
  std::string error;

  int exit_code() const { return verdict.exit_code; }
};

/// 0 metrizable, 1 not metrizable, 2 out of scope or inconclusive.
int exit_code_for(checks::Status s);

/// Never throws for bad input; such runs come back with exit code 3 and `error` set.
Report run(const RunConfig& config);

/// One sentence per failed (or, for a pass, decisive) condition.
std::string explain(const Report& report);
std::string render_text(const Report& report);
std::string to_json(const Report& report);
Report report_from_json(std::string_view text);

}  // namespace sprayscope::cli
