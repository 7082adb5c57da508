#include <charconv>
#include <cstdlib>
#include <string_view>

#include "qwalk/errors.hpp"
#include "qwalk/experiments.hpp"

namespace qwalk {

namespace {

using nlohmann::json;

std::vector<std::string_view> split_colon(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(':', pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) {
      return parts;
    }
    pos = next + 1;
  }
}

double to_double(std::string_view s, const char* field) {
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw ConfigError(field, "'" + buf + "' is not a number");
  }
  return v;
}

int to_int(std::string_view s, const char* field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(field, "'" + std::string(s) + "' is not an integer");
  }
  return v;
}

template <class T>
T get_as(const json& doc, const char* field) {
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

std::vector<double> angle_list(const json& value, const char* field) {
  if (value.is_number()) {
    return {value.get<double>()};
  }
  if (value.is_string()) {
    return parse_grid(value.get<std::string>());
  }
  if (value.is_array()) {
    std::vector<double> out;
    for (const auto& v : value) {
      if (!v.is_number()) {
        throw ConfigError(field, "angles must be numbers");
      }
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (value.is_object()) {
    return linspace(get_as<double>(value, "start"), get_as<double>(value, "stop"),
                    get_as<int>(value, "count"));
  }
  throw ConfigError(field, "expected a number, an array, or a start:stop:count grid");
}

Complex complex_from(const json& v, const char* field) {
  if (v.is_number()) {
    return {v.get<double>(), 0.0};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(field, "expected a number or [re, im]");
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split_colon(spec);
  if (parts.size() != 3) {
    throw ConfigError("grid", "expected start:stop:count, got '" + spec + "'");
  }
  const double start = to_double(parts[0], "grid");
  const double stop = to_double(parts[1], "grid");
  const int count = to_int(parts[2], "grid");
  if (count < 1) {
    throw ConfigError("grid", "grid is empty");
  }
  return linspace(start, stop, count);
}

std::pair<int, int> parse_window(const std::string& spec) {
  const auto parts = split_colon(spec);
  if (parts.size() != 2) {
    throw ConfigError("window", "expected lo:hi, got '" + spec + "'");
  }
  return {to_int(parts[0], "window"), to_int(parts[1], "window")};
}

RunConfig apply_config_json(RunConfig cfg, const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config", "top level must be an object");
  }
  if (!doc.contains("schema")) {
    throw ConfigError("schema", "missing schema version");
  }
  if (get_as<int>(doc, "schema") != kConfigSchemaVersion) {
    throw ConfigError("schema", "unsupported schema version " + doc.at("schema").dump());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema") {
      continue;
    } else if (key == "label") {
      cfg.label = get_as<std::string>(doc, "label");
    } else if (key == "walk") {
      const auto w = get_as<std::string>(doc, "walk");
      if (w == "standard") {
        cfg.kind = WalkKind::Standard;
      } else if (w == "split-step") {
        cfg.kind = WalkKind::SplitStep;
      } else {
        throw ConfigError("walk", "expected 'standard' or 'split-step', got '" + w + "'");
      }
    } else if (key == "theta" || key == "theta1" || key == "grid") {
      cfg.thetas = angle_list(value, key.c_str());
    } else if (key == "theta2") {
      cfg.theta2s = angle_list(value, "theta2");
    } else if (key == "steps") {
      cfg.t_max = get_as<int>(doc, "steps");
    } else if (key == "bounded") {
      if (value.is_null()) {
        cfg.bounded.reset();
      } else {
        cfg.bounded = get_as<int>(doc, "bounded");
      }
    } else if (key == "initial") {
      if (!value.is_object() || !value.contains("alpha") || !value.contains("beta")) {
        throw ConfigError("initial", "expected {\"alpha\": .., \"beta\": ..}");
      }
      cfg.init = {complex_from(value.at("alpha"), "initial"),
                  complex_from(value.at("beta"), "initial")};
    } else if (key == "start_site") {
      cfg.start_site = get_as<int>(doc, "start_site");
    } else if (key == "every") {
      cfg.every = get_as<int>(doc, "every");
    } else if (key == "times") {
      cfg.times = get_as<std::vector<int>>(doc, "times");
    } else if (key == "windows") {
      cfg.windows.clear();
      if (!value.is_array()) {
        throw ConfigError("windows", "expected an array");
      }
      for (const auto& w : value) {
        if (w.is_string()) {
          cfg.windows.push_back(parse_window(w.get<std::string>()));
        } else if (w.is_array() && w.size() == 2) {
          cfg.windows.emplace_back(w[0].get<int>(), w[1].get<int>());
        } else {
          throw ConfigError("windows", "each window is \"lo:hi\" or [lo, hi]");
        }
      }
    } else if (key == "outputs") {
      cfg.outputs.clear();
      for (const auto& o : get_as<std::vector<std::string>>(doc, "outputs")) {
        cfg.outputs.push_back(parse_output(o));
      }
    } else if (key == "exact_qfi") {
      cfg.exact_qfi = get_as<bool>(doc, "exact_qfi");
    } else if (key == "out") {
      cfg.out = get_as<std::string>(doc, "out");
    } else if (key == "format") {
      const auto f = get_as<std::string>(doc, "format");
      if (f == "csv") {
        cfg.format = Format::Csv;
      } else if (f == "json") {
        cfg.format = Format::Json;
      } else {
        throw ConfigError("format", "expected csv or json, got '" + f + "'");
      }
    } else if (key == "workers") {
      cfg.workers = get_as<int>(doc, "workers");
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json doc;
  doc["schema"] = kConfigSchemaVersion;
  if (!cfg.label.empty()) {
    doc["label"] = cfg.label;
  }
  doc["walk"] = cfg.kind == WalkKind::SplitStep ? "split-step" : "standard";
  doc[cfg.kind == WalkKind::SplitStep ? "theta1" : "theta"] = cfg.thetas;
  if (!cfg.theta2s.empty()) {
    doc["theta2"] = cfg.theta2s;
  }
  doc["steps"] = cfg.t_max;
  doc["bounded"] = cfg.bounded ? json(*cfg.bounded) : json(nullptr);
  doc["initial"] = {{"alpha", {cfg.init.alpha.real(), cfg.init.alpha.imag()}},
                    {"beta", {cfg.init.beta.real(), cfg.init.beta.imag()}}};
  doc["start_site"] = cfg.start_site;
  doc["every"] = cfg.every;
  if (!cfg.times.empty()) {
    doc["times"] = cfg.times;
  }
  json windows = json::array();
  for (const auto& [lo, hi] : cfg.windows) {
    windows.push_back({lo, hi});
  }
  doc["windows"] = windows;
  json outputs = json::array();
  for (Output o : cfg.outputs) {
    outputs.push_back(to_string(o));
  }
  doc["outputs"] = outputs;
  doc["exact_qfi"] = cfg.exact_qfi;
  if (!cfg.out.empty()) {
    doc["out"] = cfg.out;
  }
  doc["format"] = cfg.format == Format::Json ? "json" : "csv";
  doc["workers"] = cfg.workers;
  return doc;
}

}  // namespace qwalk
