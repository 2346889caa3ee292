// magdiv: magnitude and maximum diversity of weighted trees and finite metric spaces.

#include "magdiv/commands.hpp"
#include "magdiv/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <limits>

using namespace magdiv;

int main(int argc, char **argv) {
  CLI::App app{"Magnitude and maximum diversity of weighted trees and finite metric spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kToolVersion);

  std::string input;
  std::string kind = "tree";
  bool skip_triangle = false;
  double scale = 1.0;
  double tmin = 1e-3, tmax = 1e3;
  std::size_t steps = 25;
  bool log_spacing = false;
  std::string k_list = "1,2,4,8,16,32,64";
  std::string csv_path;
  std::size_t n = 10;
  std::string law = "uniform:0.05,3";
  std::uint64_t seed = 1;
  std::string out;
  std::string measure_file;

  auto add_input = [&](CLI::App *sub, bool with_kind) {
    sub->add_option("input", input, "Input file (tree file or distance-matrix CSV)")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_kind) {
      sub->add_option("--kind", kind, "Input kind")->check(CLI::IsMember({"tree", "matrix"}));
      sub->add_flag("--skip-triangle-check", skip_triangle,
                    "Skip triangle-inequality validation of matrix input");
    }
  };

  auto *magnitude = app.add_subcommand("magnitude", "Closed-form magnitude and weights of a tree");
  add_input(magnitude, false);

  auto *diversity = app.add_subcommand("diversity", "Maximum diversity by the peeling algorithm");
  add_input(diversity, true);
  diversity->add_option("--scale", scale, "Multiply all distances by this factor");

  auto *oracle = app.add_subcommand("oracle", "Maximum diversity by exhaustive subset search");
  add_input(oracle, true);

  auto *profile = app.add_subcommand("profile", "Maximum diversity across a grid of scales");
  add_input(profile, true);
  profile->add_option("--tmin", tmin, "Smallest scale");
  profile->add_option("--tmax", tmax, "Largest scale");
  profile->add_option("--steps", steps, "Number of grid points");
  profile->add_flag("--log", log_spacing, "Geometric grid spacing");
  profile->add_option("--csv", csv_path, "Also write the table as CSV");

  auto *converge = app.add_subcommand("converge", "Magnitude of subdivisions against the continuum limit");
  add_input(converge, false);
  converge->add_option("--k", k_list, "Comma-separated increasing subdivision levels");
  converge->add_option("--csv", csv_path, "Also write the table as CSV");

  auto *gen = app.add_subcommand("gen", "Write a random weighted tree");
  gen->add_option("--n", n, "Number of vertices")->required();
  gen->add_option("--law", law, "Edge-length law: fixed:<c> or uniform:<lo>,<hi>");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output tree file")->required();

  auto *check = app.add_subcommand("check", "Test the optimality certificate of a measure");
  add_input(check, true);
  check->add_option("--measure", measure_file, "JSON object {label: mass}")
      ->required()
      ->check(CLI::ExistingFile);

  std::string command = "magdiv";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
    std::cout << cli::error_json(command, "UsageError", e.what()).dump(2) << '\n';
    return 2;
  }

  auto *sub = app.get_subcommands().front();
  command = sub->get_name();
  try {
    cli::InputOptions opts{cli::parse_kind(kind), !skip_triangle};
    cli::CommandOutput result = [&] {
      if (sub == magnitude) return cli::cmd_magnitude(input);
      if (sub == diversity) return cli::cmd_diversity(input, opts, scale);
      if (sub == oracle) return cli::cmd_oracle(input, opts);
      if (sub == profile) return cli::cmd_profile(input, opts, tmin, tmax, steps, log_spacing);
      if (sub == converge) return cli::cmd_converge(input, cli::parse_k_list(k_list));
      if (sub == gen) return cli::cmd_gen(n, law, seed, out);
      return cli::cmd_check(input, opts, measure_file);
    }();
    if (!csv_path.empty() && result.csv) cli::write_file_atomic(csv_path, *result.csv);
    std::cout << result.report.dump();
    return 0;
  } catch (const Error &e) {
    std::cout << cli::error_json(command, e.kind(), e.what()).dump(2) << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cout << cli::error_json(command, "InternalError", e.what()).dump(2) << '\n';
    return 1;
  }
}
