#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cli/runner.hpp"
#include "cli/spec.hpp"
#include "ouq/error.hpp"

namespace {

int report_error(const ouq::Error& e) {
  std::cerr << "error [" << e.module() << "] " << ouq::to_string(e.kind()) << ": " << e.what() << '\n';
  return 1;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal uncertainty quantification and minimax estimation runs"};
  app.set_version_flag("--version", std::string(ouq::cli::kToolVersion));
  app.require_subcommand(1);

  std::string spec_path;
  CLI::App* validate = app.add_subcommand("validate", "Schema-check a problem specification");
  validate->add_option("--spec", spec_path, "Problem specification (JSON)")->required();

  std::string out_dir = "out";
  std::string format = "json";
  ouq::cli::Overrides ov;
  CLI::App* run = app.add_subcommand("run", "Solve a problem specification and write the report");
  run->add_option("--spec", spec_path, "Problem specification (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "json, or csv for curve sidecars as well")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  run->add_option("--seed", ov.seed, "Solver seed");
  run->add_option("--threads", ov.threads, "Solver threads")->check(CLI::PositiveNumber);
  run->add_option("--restarts", ov.restarts, "Solver restarts")->check(CLI::PositiveNumber);
  run->add_option("--tol", ov.tol, "Solver stall tolerance")->check(CLI::PositiveNumber);
  run->add_option("--max-iters", ov.max_iters, "Iteration limit per restart and per prior ascent")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const auto text = read_file(spec_path);
  if (!text) {
    std::cerr << "error [cli] ParseError: cannot read " << spec_path << '\n';
    return 1;
  }
  ouq::cli::Validation v = ouq::cli::validate(*text);
  if (!v.spec) {
    for (const auto& d : v.diagnostics)
      std::cerr << "error [cli] " << ouq::to_string(v.error) << " at \"" << d.path << "\": " << d.message << '\n';
    return 1;
  }
  if (*validate) {
    std::cout << "ok " << ouq::cli::to_string(v.spec->kind) << '\n';
    return 0;
  }

  ouq::cli::apply(ov, *v.spec);
  try {
    const auto rep = ouq::cli::run(*v.spec, format == "csv" ? ouq::cli::ReportFormat::Csv : ouq::cli::ReportFormat::Json);
    ouq::cli::write_report(rep, out_dir);
    std::cout << rep.document["status"].get<std::string>() << ' ' << out_dir << '\n';
    return rep.exit_code();
  } catch (const ouq::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error [cli] " << e.what() << '\n';
    return 1;
  }
}
