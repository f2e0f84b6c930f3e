#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "btom/error.hpp"
#include "btom/util.hpp"

namespace btom {

// All probabilities a model reports at one judgment point of one scenario.
struct JudgmentOutput {
  struct StatementScore {
    std::string id;
    double probability = 0.0;
    std::vector<std::string> flags;
  };
  std::string scenario_id;
  int step = 0;
  std::string model;
  std::string prior;  // "statements", "states" or "-"
  std::vector<std::pair<std::string, double>> goal_probs;  // (gem id, probability)
  std::vector<StatementScore> statement_probs;
};

// One line of the flat output table.
struct OutputRow {
  std::string scenario_id;
  int judgment_step = 0;
  std::string model;
  std::string prior;
  std::string kind;  // "goal" | "statement"
  std::string target_id;
  double probability = 0.0;
  std::vector<std::string> flags;

  auto sort_key() const { return std::tie(scenario_id, judgment_step, kind, target_id); }
};

inline const char* kOutputHeader = "scenario_id,judgment_step,model,prior,kind,target_id,probability,flags";

inline std::vector<OutputRow> flatten_outputs(const std::vector<JudgmentOutput>& outputs) {
  std::vector<OutputRow> rows;
  for (const auto& o : outputs) {
    for (const auto& [gem, p] : o.goal_probs)
      rows.push_back({o.scenario_id, o.step, o.model, o.prior, "goal", gem, p, {}});
    for (const auto& s : o.statement_probs)
      rows.push_back({o.scenario_id, o.step, o.model, o.prior, "statement", s.id, s.probability, s.flags});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const OutputRow& a, const OutputRow& b) { return a.sort_key() < b.sort_key(); });
  return rows;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

inline std::string render_csv(const std::vector<OutputRow>& rows) {
  std::string out = std::string(kOutputHeader) + "\n";
  for (const auto& r : rows) {
    out += r.scenario_id + ',' + std::to_string(r.judgment_step) + ',' + r.model + ',' + r.prior +
           ',' + r.kind + ',' + r.target_id + ',' + format_double(r.probability) + ',' +
           join_flags(r.flags) + '\n';
  }
  return out;
}

inline std::string render_json(const std::vector<OutputRow>& rows) {
  nlohmann::ordered_json doc;
  doc["format_version"] = 1;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json jr;
    jr["scenario_id"] = r.scenario_id;
    jr["judgment_step"] = r.judgment_step;
    jr["model"] = r.model;
    jr["prior"] = r.prior;
    jr["kind"] = r.kind;
    jr["target_id"] = r.target_id;
    jr["probability"] = r.probability;
    jr["flags"] = r.flags;
    doc["rows"].push_back(std::move(jr));
  }
  return doc.dump() + "\n";
}

enum class OutputFormat { Csv, Json };

inline void write_outputs(const std::vector<JudgmentOutput>& outputs, const std::string& path,
                          OutputFormat format) {
  auto rows = flatten_outputs(outputs);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file for writing: " + path);
  f << (format == OutputFormat::Csv ? render_csv(rows) : render_json(rows));
  if (!f) throw IoError("failed writing output file: " + path);
}

inline std::vector<OutputRow> parse_output_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kOutputHeader)
    throw SchemaError(origin + ": expected header '" + kOutputHeader + "', got '" + line + "'");
  std::vector<OutputRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_on(line, ',');
    if (fields.size() != 8)
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": expected 8 fields, got " +
                        std::to_string(fields.size()));
    OutputRow r;
    r.scenario_id = fields[0];
    try {
      r.judgment_step = std::stoi(fields[1]);
      r.probability = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": bad numeric field");
    }
    r.model = fields[2];
    r.prior = fields[3];
    r.kind = fields[4];
    if (r.kind != "goal" && r.kind != "statement")
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": bad kind '" + r.kind + "'");
    r.target_id = fields[5];
    if (!fields[7].empty())
      for (auto& f2 : split_on(fields[7], ';')) r.flags.push_back(f2);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<OutputRow> read_output_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open output file: " + path);
  return parse_output_csv(f, path);
}

inline std::vector<OutputRow> read_output_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open output file: " + path);
  nlohmann::json doc;
  try {
    f >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  if (!doc.contains("rows") || !doc["rows"].is_array())
    throw SchemaError(path + ": missing 'rows' array");
  std::vector<OutputRow> rows;
  for (const auto& jr : doc["rows"]) {
    OutputRow r;
    try {
      r.scenario_id = jr.at("scenario_id").get<std::string>();
      r.judgment_step = jr.at("judgment_step").get<int>();
      r.model = jr.at("model").get<std::string>();
      r.prior = jr.at("prior").get<std::string>();
      r.kind = jr.at("kind").get<std::string>();
      r.target_id = jr.at("target_id").get<std::string>();
      r.probability = jr.at("probability").get<double>();
      for (const auto& fl : jr.at("flags")) r.flags.push_back(fl.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path + ": " + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace btom
