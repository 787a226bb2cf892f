#include "rsa/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rsa/error.hpp"

namespace rsa {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                             : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string_view> parse_header(std::string_view line, std::string_view first) {
  auto header = split_fields(line);
  if (header.front() != first) {
    throw Error(ErrorKind::BadHeader, "first header column must be '" + std::string(first) +
                                          "', found '" + std::string(header.front()) + "'");
  }
  if (header.size() < 2) throw Error(ErrorKind::BadHeader, "header has no value columns");
  std::unordered_set<std::string_view> seen;
  for (auto name : header) {
    if (name.empty()) throw Error(ErrorKind::BadHeader, "empty header column");
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::DuplicateHeader, "header column '" + std::string(name) +
                                                  "' appears twice");
    }
  }
  return header;
}

double parse_cell(std::string_view token, std::size_t line, std::size_t column) {
  try {
    return parse_double(token);
  } catch (const Error& e) {
    throw Error(e.kind(), "line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": '" + std::string(token) + "'");
  }
}

template <typename T>
T json_get(const json& j, const char* key) {
  if constexpr (std::is_unsigned_v<T>) {
    if (!j.at(key).is_number_unsigned()) {
      throw Error(ErrorKind::ConfigInvalid, std::string("key '") + key +
                                                "' must be a nonnegative integer");
    }
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("key '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  if (token.empty()) throw Error(ErrorKind::ParseError, "empty numeric field");
  std::string_view body = token;
  if (body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
  if (res.ec == std::errc::result_out_of_range) {
    throw Error(ErrorKind::NonFiniteValue, "'" + std::string(token) + "' overflows a double");
  }
  if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
    throw Error(ErrorKind::ParseError, "'" + std::string(token) + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFiniteValue, "'" + std::string(token) + "' is not finite");
  }
  return value;
}

ActivationSet parse_activation_csv(std::string_view text,
                                   const std::optional<std::vector<std::string>>& known_classes) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::EmptyFile, "activation file is empty");
  const auto header = parse_header(lines.front(), "label");
  if (lines.size() < 2) throw Error(ErrorKind::EmptyFile, "activation file has no data rows");

  const std::size_t units = header.size() - 1;
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  if (known_classes) {
    names = *known_classes;
    for (std::size_t c = 0; c < names.size(); ++c) index.emplace(names[c], c);
  }

  Matrix values(lines.size() - 1, units);
  std::vector<std::size_t> labels;
  labels.reserve(lines.size() - 1);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_fields(lines[l]);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::RaggedRow, "line " + std::to_string(l + 1) + " has " +
                                            std::to_string(fields.size()) + " columns, header has " +
                                            std::to_string(header.size()));
    }
    if (fields.front().empty()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(l + 1) + " has an empty label");
    }
    std::string label(fields.front());
    auto it = index.find(label);
    if (it == index.end()) {
      if (known_classes) {
        throw Error(ErrorKind::UnknownLabel, "line " + std::to_string(l + 1) + ": label '" +
                                                 label + "' is not a known class");
      }
      it = index.emplace(label, names.size()).first;
      names.push_back(label);
    }
    labels.push_back(it->second);
    for (std::size_t u = 0; u < units; ++u) {
      values(l - 1, u) = parse_cell(fields[u + 1], l + 1, u + 2);
    }
  }
  return validate_activation_set(std::move(values), std::move(labels), std::move(names));
}

std::string format_activation_csv(const ActivationSet& a) {
  std::string out = "label";
  for (std::size_t u = 0; u < a.num_units(); ++u) out += ",u" + std::to_string(u);
  out += '\n';
  for (std::size_t r = 0; r < a.num_images(); ++r) {
    out += a.class_names()[a.labels()[r]];
    for (double v : a.values().row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

RDM parse_rdm_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::EmptyFile, "RDM file is empty");
  const auto header = parse_header(lines.front(), "class");
  const std::size_t n = header.size() - 1;
  if (lines.size() != n + 1) {
    throw Error(ErrorKind::InvalidRdm, std::to_string(lines.size() - 1) + " rows for " +
                                           std::to_string(n) + " classes");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  Matrix values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[i + 1]);
    if (fields.size() != n + 1) {
      throw Error(ErrorKind::RaggedRow, "line " + std::to_string(i + 2) + " has " +
                                            std::to_string(fields.size()) + " columns, header has " +
                                            std::to_string(n + 1));
    }
    if (fields.front() != names[i]) {
      throw Error(ErrorKind::BadHeader, "row " + std::to_string(i + 1) + " is named '" +
                                            std::string(fields.front()) + "', expected '" +
                                            names[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) values(i, j) = parse_cell(fields[j + 1], i + 2, j + 2);
  }
  return RDM::from_values(std::move(values), std::move(names));
}

std::string format_rdm_csv(const RDM& r) {
  std::string out = "class";
  for (const auto& name : r.class_names()) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += r.class_names()[i];
    for (std::size_t j = 0; j < r.size(); ++j) {
      out += ',';
      out += format_double(r(i, j));
    }
    out += '\n';
  }
  return out;
}

FileKind detect_file_kind(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::EmptyFile, "file is empty");
  const auto first = split_fields(lines.front()).front();
  if (first == "label") return FileKind::Activations;
  if (first == "class") return FileKind::Rdm;
  throw Error(ErrorKind::BadHeader, "header must start with 'label' or 'class'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

TrainJob parse_train_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be a JSON object");

  static const std::unordered_set<std::string> known{
      "hidden_dims",   "regularizer", "reg_weight", "decov_weight",     "dropout_rate",
      "learning_rate", "batch_size",  "epochs",     "seed",             "tune_grid",
      "holdout_fraction", "tune_seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::ConfigInvalid, "unknown key '" + key + "'");
  }

  TrainJob job;
  auto& cfg = job.config;
  if (j.contains("hidden_dims")) cfg.hidden_dims = json_get<std::vector<std::size_t>>(j, "hidden_dims");
  if (j.contains("regularizer")) {
    cfg.regularizer = parse_regularizer(json_get<std::string>(j, "regularizer"));
  }
  if (j.contains("reg_weight")) cfg.reg_weight = json_get<double>(j, "reg_weight");
  if (j.contains("decov_weight")) cfg.decov_weight = json_get<double>(j, "decov_weight");
  if (j.contains("dropout_rate")) cfg.dropout_rate = json_get<double>(j, "dropout_rate");
  if (j.contains("learning_rate")) cfg.learning_rate = json_get<double>(j, "learning_rate");
  if (j.contains("batch_size")) cfg.batch_size = json_get<std::size_t>(j, "batch_size");
  if (j.contains("epochs")) cfg.epochs = json_get<std::size_t>(j, "epochs");
  if (j.contains("seed")) cfg.seed = json_get<std::uint64_t>(j, "seed");
  if (j.contains("tune_grid")) job.tune_grid = json_get<std::vector<double>>(j, "tune_grid");
  if (j.contains("holdout_fraction")) {
    job.holdout_fraction = json_get<double>(j, "holdout_fraction");
    if (!(job.holdout_fraction > 0.0 && job.holdout_fraction < 1.0)) {
      throw Error(ErrorKind::ConfigInvalid, "holdout_fraction must lie in (0, 1)");
    }
  }
  if (j.contains("tune_seed")) job.tune_seed = json_get<std::uint64_t>(j, "tune_seed");
  validate_config(cfg);
  return job;
}

std::string model_to_json(const MLPModel& m) {
  json j;
  j["format"] = "rsakit-mlp";
  j["version"] = 1;
  j["layer_dims"] = m.layer_dims;
  j["weights"] = json::array();
  for (const auto& w : m.weights) {
    json rows = json::array();
    for (std::size_t r = 0; r < w.rows(); ++r) {
      rows.push_back(std::vector<double>(w.row(r).begin(), w.row(r).end()));
    }
    j["weights"].push_back(std::move(rows));
  }
  j["biases"] = m.biases;
  return j.dump(1) + "\n";
}

MLPModel model_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!j.is_object() || j.value("format", "") != "rsakit-mlp") {
    throw Error(ErrorKind::ParseError, "not an rsakit-mlp checkpoint");
  }
  MLPModel m;
  try {
    m.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    for (const auto& layer : j.at("weights")) {
      m.weights.push_back(Matrix::from_rows(layer.get<std::vector<std::vector<double>>>()));
    }
    m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  validate_model(m);
  return m;
}

}  // namespace rsa
