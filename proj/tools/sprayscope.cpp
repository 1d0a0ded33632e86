// sprayscope: decide whether a spray is metrizable by a Finsler function of
// constant flag curvature, and reconstruct the metric when it is.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sprayscope/cli.hpp"
#include "sprayscope/gallery.hpp"

namespace sc = sprayscope;

namespace {

sc::gallery::Params collect_params(const std::vector<std::string>& raw) {
  sc::gallery::Params out;
  for (const auto& p : raw) out.insert(sc::cli::parse_param(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler metrizability checks for sprays"};
  app.require_subcommand(1);

  sc::cli::RunConfig cfg;
  std::vector<std::string> params;
  std::vector<std::string> boxes;
  std::string report = "text";
  std::string mode = "auto";

  auto* run = app.add_subcommand("run", "check a spray or Finsler function");
  auto* in = run->add_option("--input,-i", cfg.input, "definition file (G1..Gn or F)");
  auto* gal = run->add_option("--gallery,-g", cfg.gallery, "built-in example name");
  in->excludes(gal);
  run->add_option("--param", params, "gallery parameter k=v (repeatable)");
  run->add_option("--points,-n", cfg.points, "number of sample points")->capture_default_str();
  run->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  run->add_option("--tol", cfg.tol, "relative residual tolerance")->capture_default_str();
  run->add_option("--box", boxes, "sampling range: lo:hi, x=lo:hi, y=lo:hi, x1=lo:hi, ... (repeatable)");
  run->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  run->add_flag("--per-point", cfg.per_point, "include the per-point table");
  run->add_option("--mode", mode, "auto, spray or finsler")->check(CLI::IsMember({"auto", "spray", "finsler"}))
      ->capture_default_str();

  auto* list = app.add_subcommand("list", "list gallery examples");

  std::string export_name;
  std::vector<std::string> export_params;
  auto* exp = app.add_subcommand("export", "print a gallery example as a definition file");
  exp->add_option("name", export_name, "gallery example")->required();
  exp->add_option("--param", export_params, "gallery parameter k=v (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*list) {
      for (const auto& name : sc::gallery::list_examples()) {
        const auto e = sc::gallery::get_example(name);
        std::cout << name << "  (" << sc::gallery::to_string(e.kind) << ", n = " << e.dimension() << ")  "
                  << e.expected.note << "\n";
      }
      return 0;
    }
    if (*exp) {
      std::cout << sc::gallery::export_definition(sc::gallery::get_example(export_name, collect_params(export_params)));
      return 0;
    }

    cfg.params = collect_params(params);
    for (const auto& b : boxes) cfg.box.push_back(sc::cli::parse_box(b));
    cfg.format = report == "json" ? sc::cli::Format::json : sc::cli::Format::text;
    cfg.mode = sc::cli::mode_from_string(mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  const auto result = sc::cli::run(cfg);
  if (cfg.format == sc::cli::Format::json)
    std::cout << sc::cli::to_json(result);
  else
    std::cout << sc::cli::render_text(result);
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  return result.exit_code();
}
