#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsa/core.hpp"
#include "rsa/trainer.hpp"

namespace rsa {

/// Shortest text for 17 significant digits ("%.17g" semantics, locale free).
/// Parsing the result gives back the same double.
std::string format_double(double value);

/// Parses one numeric CSV token. Throws ParseError or NonFiniteValue.
double parse_double(std::string_view token);

/// Activation file: header "label,u0,u1,...", then one row per image with the
/// class label string followed by unit activations. Labels map to class
/// indices in first-appearance order, or to the order of `known_classes`
/// when given (an unseen label string is then an UnknownLabel error).
ActivationSet parse_activation_csv(std::string_view text,
                                   const std::optional<std::vector<std::string>>& known_classes = {});
std::string format_activation_csv(const ActivationSet& a);

/// RDM file: header "class,<name>,...", then one row per class with its name
/// followed by the row of the matrix.
RDM parse_rdm_csv(std::string_view text);
std::string format_rdm_csv(const RDM& r);

enum class FileKind { Activations, Rdm };

/// Decides by the first header token: "label" or "class".
FileKind detect_file_kind(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Training job parsed from a JSON config. Unknown keys are ConfigInvalid.
struct TrainJob {
  TrainConfig config;
  std::vector<double> tune_grid;   ///< empty: train with the configured weight
  double holdout_fraction = 0.3;
  std::uint64_t tune_seed = 0;
};

TrainJob parse_train_config(std::string_view json_text);

std::string model_to_json(const MLPModel& m);
MLPModel model_from_json(std::string_view json_text);

}  // namespace rsa
