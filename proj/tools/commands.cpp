#include "commands.hpp"

#include <filesystem>
#include <unordered_set>

#include <json.hpp>

#include "rsa/error.hpp"
#include "rsa/io.hpp"
#include "rsa/rdm.hpp"
#include "rsa/readout.hpp"
#include "rsa/similarity.hpp"
#include "rsa/synth.hpp"
#include "rsa/trainer.hpp"

namespace rsa::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

// An RDM from either file kind; activations go through class means.
RDM load_rdm(const std::string& text) {
  if (detect_file_kind(text) == FileKind::Rdm) return parse_rdm_csv(text);
  return compute_rdm(class_means(parse_activation_csv(text)));
}

json noise_json(const NoiseSpec& noise) {
  return {{"amplitude", noise.amplitude}, {"mode", std::string(to_string(noise.mode))}};
}

void check_keys(const json& j, const std::unordered_set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorKind::ConfigInvalid, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  if constexpr (std::is_unsigned_v<T>) {
    if (!j.at(key).is_number_unsigned()) {
      throw Error(ErrorKind::ConfigInvalid,
                  std::string("key '") + key + "' must be a nonnegative integer");
    }
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("key '") + key + "': " + e.what());
  }
}

}  // namespace

void run_rdm(const RdmArgs& args) {
  auto acts = parse_activation_csv(read_file(args.input));
  if (args.normalize == "per-unit") acts = normalize_per_unit(acts);
  write_file(args.output, format_rdm_csv(compute_rdm(class_means(acts))));
}

void run_sit(const SitArgs& args) {
  const auto model_text = read_file(args.model);
  const auto reference_text = read_file(args.reference);
  const NoiseSpec noise{args.noise_amplitude, parse_noise_mode(args.noise_mode)};

  json out;
  out["seed"] = args.seed;
  out["noise"] = noise_json(noise);
  if (detect_file_kind(model_text) == FileKind::Activations &&
      detect_file_kind(reference_text) == FileKind::Activations) {
    const auto model = parse_activation_csv(model_text);
    const auto reference = parse_activation_csv(reference_text);
    BootstrapOptions options{noise, args.replicates, args.images_per_class, args.seed};
    const auto report = bootstrap_s_it(model, reference, options);
    const auto sizes = model.class_sizes();
    out["inputs"] = "activations";
    out["point_estimate"] = report.point_estimate;
    out["bootstrap_mean"] = report.bootstrap_mean;
    out["bootstrap_std"] = report.bootstrap_std;
    out["replicates"] = report.replicates;
    out["images_per_class"] = args.images_per_class == 0
                                  ? *std::min_element(sizes.begin(), sizes.end())
                                  : args.images_per_class;
    out["images_per_class_full"] = args.images_per_class == 0;
    out["resampling"] = std::string(kResamplingPolicy);
    out["n_classes"] = model.num_classes();
  } else {
    const auto model = load_rdm(model_text);
    const auto reference = load_rdm(reference_text);
    out["inputs"] = "rdm";
    out["point_estimate"] = s_it(model, reference);
    out["bootstrap_mean"] = nullptr;
    out["bootstrap_std"] = nullptr;
    out["replicates"] = 0;
    out["resampling"] = "none";
    out["n_classes"] = model.size();
  }
  write_json(args.output, out);
}

void run_synth(const SynthArgs& args) {
  SynthSpec spec;
  spec.n_classes = args.classes;
  spec.units = args.units;
  spec.images_per_class = args.images_per_class;
  spec.within_class_std = args.within_std;
  spec.seed = args.seed;
  const auto data = generate(spec);
  write_file(args.output, format_activation_csv(data.data));
  if (!args.truth.empty()) write_file(args.truth, format_rdm_csv(data.truth));
}

void run_train(const TrainArgs& args) {
  auto job = parse_train_config(read_file(args.config));
  const auto data = parse_activation_csv(read_file(args.data));

  json metrics;
  if (!job.tune_grid.empty()) {
    const auto tuned = tune_regularization(data, job.config, job.tune_grid, job.holdout_fraction,
                                           job.tune_seed);
    (job.config.regularizer == Regularizer::DeCov ? job.config.decov_weight
                                                  : job.config.reg_weight) = tuned.best_weight;
    metrics["tuning"] = {{"grid", job.tune_grid},
                         {"holdout_fraction", job.holdout_fraction},
                         {"holdout_accuracy", tuned.holdout_accuracy},
                         {"best_weight", tuned.best_weight}};
  }
  const auto& cfg = job.config;
  const auto result = train(data, cfg);

  metrics["config"] = {{"hidden_dims", cfg.hidden_dims},
                       {"regularizer", std::string(to_string(cfg.regularizer))},
                       {"reg_weight", cfg.reg_weight},
                       {"decov_weight", cfg.decov_weight},
                       {"dropout_rate", cfg.dropout_rate},
                       {"learning_rate", cfg.learning_rate},
                       {"batch_size", cfg.batch_size},
                       {"epochs", cfg.epochs},
                       {"seed", cfg.seed}};
  json epochs = json::array();
  for (const auto& m : result.history) {
    epochs.push_back({{"loss", m.loss},
                      {"accuracy", m.accuracy},
                      {"offdiag_covariance", m.offdiag_covariance}});
  }
  metrics["epochs"] = std::move(epochs);
  write_file(args.model_out, model_to_json(result.model));
  write_json(args.metrics_out, metrics);
}

void run_activations(const ActivationsArgs& args) {
  const auto model = model_from_json(read_file(args.model));
  const auto data = parse_activation_csv(read_file(args.data));
  write_file(args.output, format_activation_csv(penultimate_activations(model, data)));
}

void run_readout(const ReadoutArgs& args) {
  const auto train = parse_activation_csv(read_file(args.train));
  const auto test = parse_activation_csv(read_file(args.test), train.class_names());
  const auto model = train_svm(train, args.c, args.epochs, args.seed);
  json out{{"train_accuracy", accuracy(model, train)},
           {"test_accuracy", accuracy(model, test)},
           {"c", args.c},
           {"epochs", args.epochs},
           {"seed", args.seed},
           {"n_classes", train.num_classes()},
           {"scheme", "one-vs-rest linear SVM"}};
  write_json(args.output, out);
}

void run_report(const ReportArgs& args) {
  json spec;
  try {
    spec = json::parse(read_file(args.spec));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what());
  }
  check_keys(spec, {"reference", "representations", "sit", "readout"}, "report spec");
  const fs::path base = fs::path(args.spec).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  const json sit_json = spec.value("sit", json::object());
  check_keys(sit_json,
             {"replicates", "images_per_class", "noise_amplitude", "noise_mode", "seed"},
             "sit");
  BootstrapOptions options;
  options.replicates = get_or<std::size_t>(sit_json, "replicates", 100);
  options.images_per_class = get_or<std::size_t>(sit_json, "images_per_class", 0);
  options.noise.amplitude = get_or<double>(sit_json, "noise_amplitude", 1.0);
  options.noise.mode =
      parse_noise_mode(get_or<std::string>(sit_json, "noise_mode", "per_unit_std"));
  options.seed = get_or<std::uint64_t>(sit_json, "seed", 0);

  const json readout_json = spec.value("readout", json::object());
  check_keys(readout_json, {"c", "epochs", "splits", "train_fraction", "seed"}, "readout");
  ReadoutOptions readout;
  readout.c = get_or<double>(readout_json, "c", 1.0);
  readout.epochs = get_or<std::size_t>(readout_json, "epochs", 20);
  readout.splits = get_or<std::size_t>(readout_json, "splits", 10);
  readout.train_fraction = get_or<double>(readout_json, "train_fraction", 0.7);
  readout.seed = get_or<std::uint64_t>(readout_json, "seed", 0);

  if (!spec.contains("reference") || !spec.contains("representations") ||
      !spec["representations"].is_array()) {
    throw Error(ErrorKind::ConfigInvalid, "report spec needs 'reference' and 'representations'");
  }
  const auto reference =
      parse_activation_csv(read_file(resolve(get_or<std::string>(spec, "reference", ""))));

  std::string csv = "name,layers,s_it_mean,s_it_std,acc_mean,acc_std\n";
  json rows = json::array();
  for (const auto& rep : spec["representations"]) {
    check_keys(rep, {"name", "layers", "activations"}, "representation");
    const auto name = get_or<std::string>(rep, "name", "");
    if (name.empty() || name.find_first_of(",\n\"") != std::string::npos) {
      throw Error(ErrorKind::ConfigInvalid, "representation names must be non-empty plain text");
    }
    if (!rep.contains("layers") || !rep.contains("activations")) {
      throw Error(ErrorKind::ConfigInvalid, "representation '" + name +
                                                "' needs 'layers' and 'activations'");
    }
    const auto layers = get_or<std::size_t>(rep, "layers", 0);
    const auto acts = parse_activation_csv(
        read_file(resolve(get_or<std::string>(rep, "activations", ""))), reference.class_names());
    const auto sim = bootstrap_s_it(acts, reference, options);
    const auto acc = cross_validated_accuracy(acts, readout);
    csv += name + "," + std::to_string(layers) + "," + format_double(sim.bootstrap_mean) + "," +
           format_double(sim.bootstrap_std) + "," + format_double(acc.mean) + "," +
           format_double(acc.std) + "\n";
    rows.push_back({{"name", name}, {"point_estimate", sim.point_estimate}});
  }
  write_file(args.output, csv);

  json meta{{"resampling", std::string(kResamplingPolicy)},
            {"replicates", options.replicates},
            {"images_per_class", options.images_per_class},
            {"noise", noise_json(options.noise)},
            {"sit_seed", options.seed},
            {"readout",
             {{"scheme", "one-vs-rest linear SVM, stratified splits"},
              {"c", readout.c},
              {"epochs", readout.epochs},
              {"splits", readout.splits},
              {"train_fraction", readout.train_fraction},
              {"seed", readout.seed}}},
            {"rows", rows}};
  write_json(args.output + ".meta.json", meta);
}

}  // namespace rsa::cli
