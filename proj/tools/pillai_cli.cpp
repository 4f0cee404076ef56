// pillai: single-effect multivariate association from the command line.
//
//   pillai fit      --input data.csv --x dose [--y a,b,c] [--out r.json] [--format human|machine]
//   pillai verify   --input data.csv --x dose [--y a,b,c] [--tol 1e-10]
//   pillai simulate --n 50 --k 3 --replicates 10000 --seed 1 [--effect-strength 0]
//
// Exit codes: 0 success, 1 data/validation error, 2 numerical failure,
// 3 usage error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pillai/pillai.hpp"

namespace {

struct DataArgs {
  std::string input;
  std::string x;
  std::vector<std::string> y;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--input", args.input, "CSV file with a header row")->required();
  cmd->add_option("--x", args.x, "predictor column (name or zero-based index)")
      ->required();
  cmd->add_option("--y", args.y,
                  "response columns, comma separated (default: all remaining "
                  "numeric columns)")
      ->delimiter(',');
}

pillai::Dataset load(const DataArgs& args) {
  return pillai::load_csv(args.input, pillai::ColumnSpec{args.x, args.y});
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw pillai::DataError("cannot write '" + out_path + "'");
  out << text;
}

std::string render(const pillai::json& doc, const std::string& format) {
  return format == "machine" ? pillai::render_machine(doc)
                             : pillai::render_human(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pillai's trace as a single regression effect"};
  app.require_subcommand(1);

  DataArgs fit_args;
  std::string fit_out;
  std::string fit_format = "human";
  auto* fit = app.add_subcommand("fit", "estimate the effect with exact and Wald tests");
  add_data_options(fit, fit_args);
  fit->add_option("--out", fit_out, "write the report here instead of stdout");
  fit->add_option("--format", fit_format, "human or machine")
      ->check(CLI::IsMember({"human", "machine"}));

  DataArgs verify_args;
  double tol = 1e-10;
  auto* verify = app.add_subcommand(
      "verify", "check V = beta = R^2 = kF/((n-k-1)+kF) numerically");
  add_data_options(verify, verify_args);
  verify->add_option("--tol", tol, "maximum pairwise discrepancy (exclusive)")
      ->check(CLI::NonNegativeNumber);

  pillai::SimConfig sim;
  std::string sim_out;
  std::string sim_format = "human";
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo calibration of the exact and Wald tests");
  simulate->add_option("--n", sim.n, "observations per replicate")->required();
  simulate->add_option("--k", sim.k, "number of Y columns")->required();
  simulate->add_option("--replicates", sim.replicates)->required();
  simulate->add_option("--seed", sim.seed)->required();
  simulate->add_option("--effect-strength", sim.effect_strength,
                       "planted signal x += theta * Y[:, 0] (0 = null)");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)");
  simulate->add_option("--out", sim_out, "write the report here instead of stdout");
  simulate->add_option("--format", sim_format, "human or machine")
      ->check(CLI::IsMember({"human", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(pillai::ExitCode::kUsageError);
  }

  try {
    if (*fit) {
      const pillai::ReportDocument doc = pillai::cmd_fit(load(fit_args));
      emit(render(pillai::to_json(doc), fit_format), fit_out);
      for (const auto& w : doc.warnings) std::cerr << "warning: " << w << "\n";
    } else if (*verify) {
      const pillai::VerifyReport r = pillai::cmd_verify(load(verify_args), tol);
      std::cout << pillai::render_verify(r);
      if (!r.passed) return static_cast<int>(pillai::ExitCode::kNumericalFailure);
    } else if (*simulate) {
      const pillai::CalibrationReport r = pillai::cmd_simulate(sim);
      emit(render(pillai::to_json(r), sim_format), sim_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(pillai::exit_code_for(e));
  }
  return 0;
}
