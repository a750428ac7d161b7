//
// Copyright 2026 The dpcp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// File formats: score files (CSV or JSON), probability tables (CSV with a
// `label` column), and JSON forms of thresholds, configs, experiment specs
// and reports.

#ifndef DPCP_IO_H_
#define DPCP_IO_H_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dpcp/calibrate.h"
#include "dpcp/errors.h"
#include "dpcp/harness.h"
#include "dpcp/laws.h"
#include "dpcp/mechanism.h"
#include "dpcp/predict.h"

namespace dpcp {

using Json = nlohmann::json;

namespace internal {

inline std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> ParseDouble(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

inline std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string LineError(const std::string& path, std::size_t line,
                             const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

}  // namespace internal

// Scores from a CSV file (one score per line, optional header) or a JSON
// array. JSON is detected by a leading '['.
inline std::vector<double> ParseScores(const std::string& text,
                                       bool has_header,
                                       const std::string& source = "<input>") {
  std::vector<double> scores;
  const auto body = internal::Trim(text);
  if (!body.empty() && body.front() == '[') {
    Json doc;
    try {
      doc = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw InputError(source + ": invalid JSON: " + e.what());
    }
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc[i].is_number()) {
        throw InputError(source + ": element " + std::to_string(i) +
                         " is not a number");
      }
      scores.push_back(doc[i].get<double>());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
      ++line_no;
      const auto field = internal::Trim(line);
      if (field.empty()) continue;
      if (header_pending) {
        header_pending = false;
        continue;
      }
      const auto value = internal::ParseDouble(field);
      if (!value) {
        throw InputError(
            internal::LineError(source, line_no, "not a number: '" +
                                                     std::string(field) + "'"));
      }
      if (!(*value >= 0.0 && *value <= 1.0)) {
        throw std::out_of_range(internal::LineError(
            source, line_no, "score outside [0, 1]: " + std::string(field)));
      }
      scores.push_back(*value);
    }
  }
  if (scores.empty()) throw InputError(source + ": no scores");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    ScoreSet::CheckScore(scores[i], i);
  }
  return scores;
}

inline std::vector<double> ReadScoresFile(const std::string& path,
                                          bool has_header) {
  return ParseScores(internal::Slurp(path), has_header, path);
}

// Rows of class probabilities with an optional `label` column.
struct ProbabilityTable {
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;  // empty when the file has no label column

  bool has_labels() const { return !labels.empty(); }
};

inline ProbabilityTable ParseProbabilityTable(
    const std::string& text, const std::string& source = "<input>") {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  ProbabilityTable table;
  std::optional<std::size_t> label_col;
  std::size_t columns = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty()) continue;
    const auto fields = internal::SplitCsv(line);
    if (!have_header) {
      have_header = true;
      columns = fields.size();
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == "label") {
          if (label_col) {
            throw InputError(
                internal::LineError(source, line_no, "duplicate label column"));
          }
          label_col = c;
        } else {
          table.class_names.emplace_back(fields[c]);
        }
      }
      if (table.class_names.empty()) {
        throw InputError(internal::LineError(source, line_no, "no class columns"));
      }
      continue;
    }
    if (fields.size() != columns) {
      throw InputError(internal::LineError(
          source, line_no,
          "expected " + std::to_string(columns) + " fields, got " +
              std::to_string(fields.size())));
    }
    std::vector<double> row;
    row.reserve(table.class_names.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_col && c == *label_col) {
        std::size_t label = 0;
        const auto f = fields[c];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), label);
        if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
          throw InputError(internal::LineError(
              source, line_no, "bad label '" + std::string(f) + "'"));
        }
        if (label >= table.class_names.size()) {
          throw InputError(internal::LineError(
              source, line_no, "label " + std::to_string(label) +
                                   " out of range"));
        }
        table.labels.push_back(label);
        continue;
      }
      const auto value = internal::ParseDouble(fields[c]);
      if (!value) {
        throw InputError(internal::LineError(
            source, line_no, "not a number: '" + std::string(fields[c]) + "'"));
      }
      if (!(*value >= 0.0 && *value <= 1.0)) {
        throw std::out_of_range(internal::LineError(
            source, line_no,
            "probability outside [0, 1]: " + std::string(fields[c])));
      }
      row.push_back(*value);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InputError(source + ": no rows");
  return table;
}

inline ProbabilityTable ReadProbabilityTable(const std::string& path) {
  return ParseProbabilityTable(internal::Slurp(path), path);
}

// Conformity scores 1 - p_k for every row.
inline std::vector<std::vector<double>> LabelScores(
    const ProbabilityTable& table) {
  std::vector<std::vector<double>> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    std::vector<double> scores(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      scores[k] = SoftmaxScore(row, k);
    }
    out.push_back(std::move(scores));
  }
  return out;
}

// "id,set_size,labels" rows with semicolon-joined labels.
inline std::string PredictionSetsCsv(const std::vector<PredictionSet>& sets) {
  std::string out = "id,set_size,labels\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(sets[i].size()) + ",";
    for (std::size_t k = 0; k < sets[i].included_labels.size(); ++k) {
      if (k > 0) out += ';';
      out += std::to_string(sets[i].included_labels[k]);
    }
    out += '\n';
  }
  return out;
}

// ---- JSON ----

inline Json ToJson(const CalibConfig& c) {
  return Json{{"alpha", c.alpha},     {"epsilon", c.epsilon},
              {"gamma", c.gamma},     {"m", c.m},
              {"q_tilde", c.q_tilde}, {"level", c.level()},
              {"exponent_scale", std::string(ToString(c.scale))}};
}

inline CalibConfig CalibConfigFromJson(const Json& j) {
  CalibConfig c;
  c.alpha = j.at("alpha").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.m = j.at("m").get<std::size_t>();
  c.q_tilde = j.at("q_tilde").get<double>();
  if (j.contains("exponent_scale")) {
    c.scale = ParseExponentScale(j.at("exponent_scale").get<std::string>());
  }
  return c;
}

inline Json ToJson(const Threshold& t) {
  return Json{{"s_hat", t.s_hat},     {"bin", t.bin},
              {"n", t.n},             {"seed", t.seed},
              {"config", ToJson(t.config)}, {"warnings", t.warnings}};
}

inline Threshold ThresholdFromJson(const Json& j) {
  try {
    Threshold t;
    t.s_hat = j.at("s_hat").get<double>();
    t.bin = j.at("bin").get<std::size_t>();
    t.n = j.at("n").get<std::size_t>();
    t.seed = j.at("seed").get<uint64_t>();
    t.config = CalibConfigFromJson(j.at("config"));
    if (j.contains("warnings")) {
      t.warnings = j.at("warnings").get<std::vector<std::string>>();
    }
    if (!(t.s_hat >= 0.0 && t.s_hat <= 1.0)) {
      throw std::out_of_range("threshold s_hat outside [0, 1]");
    }
    return t;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed threshold JSON: ") + e.what());
  }
}

// Settings accepted in a calibration config file. Every field is optional;
// command-line flags take precedence.
struct CalibrationSettings {
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::size_t> m;
  std::optional<double> gamma;
  std::optional<uint64_t> seed;
  std::optional<std::vector<std::size_t>> bins_grid;
  std::optional<std::size_t> tune_trials;
  std::optional<ExponentScale> scale;
};

inline CalibrationSettings CalibrationSettingsFromJson(const Json& j) {
  try {
    CalibrationSettings s;
    if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
    if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("m") && !j.at("m").is_null()) s.m = j.at("m").get<std::size_t>();
    if (j.contains("gamma") && !j.at("gamma").is_null()) {
      s.gamma = j.at("gamma").get<double>();
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
    if (j.contains("bins_grid")) {
      s.bins_grid = j.at("bins_grid").get<std::vector<std::size_t>>();
    }
    if (j.contains("tune_trials")) {
      s.tune_trials = j.at("tune_trials").get<std::size_t>();
    }
    if (j.contains("exponent_scale")) {
      s.scale = ParseExponentScale(j.at("exponent_scale").get<std::string>());
    }
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed config JSON: ") + e.what());
  }
}

inline Json ToJson(const ScoreLaw& law) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
          return Json{{"type", "uniform"}};
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return Json{{"type", "beta"}, {"a", s.a}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, AtomMixtureLaw>) {
          return Json{{"type", "atom_mixture"}, {"atom", s.atom},
                      {"weight", s.weight},     {"a", s.a},
                      {"b", s.b}};
        } else {
          return Json{{"type", "classifier"},
                      {"classes", s.classes},
                      {"signal", s.signal}};
        }
      },
      law.spec());
}

// Accepts "uniform" or {"type": ..., params}.
inline ScoreLaw LawFromJson(const Json& j) {
  const std::string type =
      j.is_string() ? j.get<std::string>() : j.at("type").get<std::string>();
  auto param = [&](const char* key, double fallback) {
    return j.is_object() && j.contains(key) ? j.at(key).get<double>() : fallback;
  };
  if (type == "uniform") return ScoreLaw(UniformLaw{});
  if (type == "beta") return ScoreLaw(BetaLaw{param("a", 1.0), param("b", 1.0)});
  if (type == "atom_mixture" || type == "point_mass") {
    AtomMixtureLaw law{param("atom", 0.5), param("weight", 1.0),
                       param("a", 1.0), param("b", 1.0)};
    if (type == "point_mass") law.weight = 1.0;
    return ScoreLaw(law);
  }
  if (type == "classifier") {
    return ScoreLaw(ClassifierLaw{
        static_cast<std::size_t>(param("classes", 3.0)), param("signal", 2.0)});
  }
  throw std::invalid_argument("unsupported score law: " + type);
}

inline ExperimentSpec ExperimentSpecFromJson(const Json& j) {
  try {
    ExperimentSpec s;
    s.law = LawFromJson(j.at("law"));
    s.n_calib = j.at("n_calib").get<std::size_t>();
    s.n_test = j.at("n_test").get<std::size_t>();
    s.alpha = j.at("alpha").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("m") && !j.at("m").is_null()) s.m = j.at("m").get<std::size_t>();
    if (j.contains("gamma") && !j.at("gamma").is_null()) {
      s.gamma = j.at("gamma").get<double>();
    }
    s.trials = j.at("trials").get<std::size_t>();
    s.seed = j.at("seed").get<uint64_t>();
    if (j.contains("bins_grid")) {
      s.bins_grid = j.at("bins_grid").get<std::vector<std::size_t>>();
    }
    if (j.contains("tune_trials")) {
      s.tune_trials = j.at("tune_trials").get<std::size_t>();
    }
    if (j.contains("exponent_scale")) {
      s.scale = ParseExponentScale(j.at("exponent_scale").get<std::string>());
    }
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed experiment spec: ") + e.what());
  }
}

inline Json ToJson(const ExperimentSpec& s) {
  Json j{{"law", ToJson(s.law)},     {"n_calib", s.n_calib},
         {"n_test", s.n_test},       {"alpha", s.alpha},
         {"epsilon", s.epsilon},     {"trials", s.trials},
         {"seed", s.seed},           {"tune_trials", s.tune_trials},
         {"exponent_scale", std::string(ToString(s.scale))}};
  j["m"] = s.m ? Json(*s.m) : Json(nullptr);
  j["gamma"] = s.gamma ? Json(*s.gamma) : Json(nullptr);
  if (!s.m) j["bins_grid"] = s.bins_grid;
  return j;
}

inline Json ToJson(const BoundReport& b) {
  auto finite_or_null = [](double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
  };
  return Json{{"lower", b.lower},
              {"upper", finite_or_null(b.upper)},
              {"upper_simplified", b.upper_simplified},
              {"p_max", b.p_max}};
}

inline Json ToJson(const CoverageReport& r) {
  Json sizes = Json::array();
  for (const auto& [size, count] : r.set_sizes) {
    sizes.push_back(Json{{"set_size", size}, {"count", count}});
  }
  Json j{{"spec", ToJson(r.spec)},
         {"config", ToJson(r.config)},
         {"trials", r.trials},
         {"n_calib", r.spec.n_calib},
         {"n_test", r.spec.n_test},
         {"coverages", r.coverages},
         {"s_hats", r.s_hats},
         {"nonprivate_s_hats", r.nonprivate_s_hats},
         {"set_sizes", sizes},
         {"mean_coverage", r.mean_coverage},
         {"std_err", r.std_err}};
  j["bounds"] = r.bounds ? ToJson(*r.bounds) : Json(nullptr);
  return j;
}

// Distinct coverage values with counts; coverages are multiples of 1/n_test.
inline std::string CoverageHistogramCsv(const CoverageReport& r) {
  std::map<std::size_t, std::size_t> counts;
  const auto n_test = static_cast<double>(r.spec.n_test);
  for (double c : r.coverages) {
    ++counts[static_cast<std::size_t>(std::llround(c * n_test))];
  }
  std::ostringstream out;
  out.precision(17);
  out << "coverage,covered,count\n";
  for (const auto& [covered, count] : counts) {
    out << static_cast<double>(covered) / n_test << ',' << covered << ','
        << count << '\n';
  }
  return out.str();
}

inline std::string SetSizeHistogramCsv(const CoverageReport& r) {
  std::string out = "set_size,count\n";
  for (const auto& [size, count] : r.set_sizes) {
    out += std::to_string(size) + "," + std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace dpcp

#endif  // DPCP_IO_H_
