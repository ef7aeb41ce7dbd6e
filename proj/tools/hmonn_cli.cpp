#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hmonn/harness/experiments.hpp"

namespace fs = std::filesystem;
using namespace hmonn;
using namespace hmonn::harness;

namespace {

void add_common(CLI::App* cmd, ExperimentOptions& o, bool single_k = true) {
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  if (single_k) {
    cmd->add_option("--k", o.k, "Neighbors used by the refinement layer")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--theta", o.theta, "Input weight of the pair distance")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  }
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str()->check(CLI::Range(2, 1000));
  cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--max-epochs", o.mlp.max_epochs, "MLP epoch limit")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--patience", o.mlp.patience, "Epochs without validation improvement before stopping")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--learning-rate", o.mlp.learning_rate, "MLP learning rate")->capture_default_str();
  cmd->add_option("--hidden", o.mlp.hidden_nodes, "Hidden nodes per MLP (0: 2*(inputs+outputs))")->capture_default_str();
}

void print_written(const std::vector<fs::path>& files) {
  for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-output dependence learning: HMONN vs the naive independence model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hmonn ") + kToolVersion);

  SyntheticOptions syn;
  std::string syn_kind = "real";
  fs::path syn_out = "results";
  auto* c_syn = app.add_subcommand("synthetic", "Cross-validate both models on the 36-dataset synthetic grid");
  c_syn->add_option("kind", syn_kind, "Feature type of the grid")->required()->check(CLI::IsMember({"real", "nominal"}));
  add_common(c_syn, syn.common);
  c_syn->add_option("--sigma", syn.sigma, "Gaussian noise of real-valued instances")->capture_default_str()->check(
      CLI::PositiveNumber);
  c_syn->add_option("--instances", syn.instances, "Instances per generated dataset")->capture_default_str()->check(
      CLI::Range(20, 10000000));
  c_syn->add_flag("--write-datasets", syn.write_datasets, "Also save every generated dataset as CSV");
  c_syn->add_option("--out", syn_out, "Output directory")->capture_default_str();

  UciOptions uci;
  std::vector<fs::path> uci_files;
  fs::path uci_out = "results";
  auto* c_uci = app.add_subcommand("uci", "Cross-validate both models on datasets derived from single-output files");
  c_uci->add_option("files", uci_files, "CSV (with .schema sidecar) or ARFF files")->required();
  add_common(c_uci, uci.common);
  c_uci->add_option("--outputs", uci.num_outputs, "Outputs per derived dataset")->capture_default_str()->check(
      CLI::IsMember({2, 3, 4}));
  c_uci->add_option("--target", uci.targets, "Output column(s) declared in the files (default: last column)")->allow_extra_args(false);
  c_uci->add_option("--schema", uci.schema, "Schema sidecar for a single CSV file");
  c_uci->add_option("--out", uci_out, "Output directory")->capture_default_str();

  SweepOptions sw;
  fs::path sw_file;
  fs::path sw_out = "results";
  auto* c_sw = app.add_subcommand("sweep", "Accuracy grid over k and theta for one file");
  c_sw->add_option("file", sw_file, "CSV or ARFF file")->required()->check(CLI::ExistingFile);
  add_common(c_sw, sw.common, false);
  c_sw->add_option("--k", sw.ks, "Neighbor counts (comma-separated)")->delimiter(',')->allow_extra_args(false)->capture_default_str()->check(CLI::PositiveNumber);
  c_sw->add_option("--theta", sw.thetas, "Input weights (comma-separated)")->delimiter(',')->allow_extra_args(false)->capture_default_str()->check(
      CLI::Range(0.0, 1.0));
  c_sw->add_option("--target", sw.targets, "Output column(s) (default: last column)")->allow_extra_args(false);
  c_sw->add_option("--schema", sw.schema, "Schema sidecar for a CSV file");
  c_sw->add_option("--out", sw_out, "Output directory")->capture_default_str();

  fs::path in_file, in_schema;
  std::vector<std::string> in_targets;
  std::size_t in_top = 10;
  auto* c_in = app.add_subcommand("inspect", "Print relation statistics of one file");
  c_in->add_option("file", in_file, "CSV or ARFF file")->required()->check(CLI::ExistingFile);
  c_in->add_option("--target", in_targets, "Output column(s) (default: last column)")->allow_extra_args(false);
  c_in->add_option("--schema", in_schema, "Schema sidecar for a CSV file");
  c_in->add_option("--top", in_top, "Input vectors to list")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_syn->parsed()) {
      syn.kind = syn_kind == "real" ? FeatureType::Real : FeatureType::Nominal;
      syn.common.hmonn_config().validate();
      const auto rep = run_synthetic(syn);
      print_written(write_synthetic(rep, syn_out));
      std::cout << synthetic_summary_text(rep);
      return 0;
    }
    if (c_uci->parsed()) {
      uci.common.hmonn_config().validate();
      const auto rep = run_uci(uci_files, uci);
      const auto written = write_uci(rep, uci_out);
      print_written(written);
      std::ifstream summary(written.back());
      std::cout << summary.rdbuf();
      bool any_ok = false;
      for (const auto& f : rep.files) {
        if (f.error.empty())
          any_ok = true;
        else
          std::cerr << "error: " << f.file.string() << ": " << f.error << '\n';
      }
      return any_ok ? 0 : 1;
    }
    if (c_sw->parsed()) {
      const auto rep = run_sweep(sw_file, sw);
      print_written(write_sweep(rep, sw_out));
      return 0;
    }
    if (c_in->parsed()) {
      inspect(load_for_experiment(in_file, in_targets, in_schema), std::cout, in_top);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
