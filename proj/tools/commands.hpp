#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace rsa::cli {

struct RdmArgs {
  std::string input;
  std::string output;
  std::string normalize = "none";
};

struct SitArgs {
  std::string model;
  std::string reference;
  std::string output;
  std::size_t replicates = 100;
  std::size_t images_per_class = 0;  // 0: full class size
  double noise_amplitude = 1.0;
  std::string noise_mode = "per_unit_std";
  std::uint64_t seed = 0;
};

struct SynthArgs {
  std::size_t classes = 7;
  std::size_t units = 128;
  std::size_t images_per_class = 280;
  double within_std = 1.0;
  std::uint64_t seed = 0;
  std::string output;
  std::string truth;
};

struct TrainArgs {
  std::string config;
  std::string data;
  std::string model_out;
  std::string metrics_out;
};

struct ActivationsArgs {
  std::string model;
  std::string data;
  std::string output;
};

struct ReadoutArgs {
  std::string train;
  std::string test;
  double c = 1.0;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  std::string output;
};

struct ReportArgs {
  std::string spec;
  std::string output;
};

void run_rdm(const RdmArgs& args);
void run_sit(const SitArgs& args);
void run_synth(const SynthArgs& args);
void run_train(const TrainArgs& args);
void run_activations(const ActivationsArgs& args);
void run_readout(const ReadoutArgs& args);
void run_report(const ReportArgs& args);

}  // namespace rsa::cli
