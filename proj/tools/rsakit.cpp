#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rsa/error.hpp"

int main(int argc, char** argv) {
  using namespace rsa::cli;
  CLI::App app{"Representational similarity analysis toolkit"};
  app.require_subcommand(1);

  RdmArgs rdm;
  auto* rdm_cmd = app.add_subcommand("rdm", "Compute the class RDM of an activation file");
  rdm_cmd->add_option("--input", rdm.input, "Activation CSV")->required();
  rdm_cmd->add_option("--output", rdm.output, "RDM CSV to write")->required();
  rdm_cmd->add_option("--normalize", rdm.normalize, "z-score units before averaging")
      ->check(CLI::IsMember({"per-unit", "none"}));

  SitArgs sit;
  auto* sit_cmd = app.add_subcommand("sit", "Spearman similarity between two representations");
  sit_cmd->add_option("--model", sit.model, "Model activation or RDM CSV")->required();
  sit_cmd->add_option("--reference", sit.reference, "Reference activation or RDM CSV")
      ->required();
  sit_cmd->add_option("--replicates", sit.replicates)->check(CLI::PositiveNumber);
  sit_cmd->add_option("--images-per-class", sit.images_per_class, "0 uses the full class size");
  sit_cmd->add_option("--noise-amplitude", sit.noise_amplitude)->check(CLI::NonNegativeNumber);
  sit_cmd->add_option("--noise-mode", sit.noise_mode)
      ->check(CLI::IsMember({"per_unit_std", "global_std"}));
  sit_cmd->add_option("--seed", sit.seed);
  sit_cmd->add_option("--output", sit.output, "JSON report to write")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic activation file");
  synth_cmd->add_option("--classes", synth.classes);
  synth_cmd->add_option("--units", synth.units);
  synth_cmd->add_option("--images-per-class", synth.images_per_class);
  synth_cmd->add_option("--within-std", synth.within_std);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--output", synth.output)->required();
  synth_cmd->add_option("--truth", synth.truth, "Ground-truth RDM CSV to write");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a regularized MLP classifier");
  train_cmd->add_option("--config", train.config)->required();
  train_cmd->add_option("--data", train.data)->required();
  train_cmd->add_option("--model-out", train.model_out)->required();
  train_cmd->add_option("--metrics-out", train.metrics_out)->required();

  ActivationsArgs acts;
  auto* acts_cmd = app.add_subcommand("activations", "Export penultimate-layer activations");
  acts_cmd->add_option("--model", acts.model)->required();
  acts_cmd->add_option("--data", acts.data)->required();
  acts_cmd->add_option("--output", acts.output)->required();

  ReadoutArgs readout;
  auto* readout_cmd = app.add_subcommand("readout", "Linear SVM readout accuracy");
  readout_cmd->add_option("--train", readout.train)->required();
  readout_cmd->add_option("--test", readout.test)->required();
  readout_cmd->add_option("--c", readout.c)->check(CLI::PositiveNumber);
  readout_cmd->add_option("--epochs", readout.epochs);
  readout_cmd->add_option("--seed", readout.seed);
  readout_cmd->add_option("--output", readout.output)->required();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "s_IT and readout table over representations");
  report_cmd->add_option("--spec", report.spec)->required();
  report_cmd->add_option("--output", report.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "rsakit: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*rdm_cmd) run_rdm(rdm);
    else if (*sit_cmd) run_sit(sit);
    else if (*synth_cmd) run_synth(synth);
    else if (*train_cmd) run_train(train);
    else if (*acts_cmd) run_activations(acts);
    else if (*readout_cmd) run_readout(readout);
    else if (*report_cmd) run_report(report);
  } catch (const rsa::Error& e) {
    std::cerr << "rsakit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rsakit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
