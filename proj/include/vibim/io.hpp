#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vibim/common.hpp"
#include "vibim/schema.hpp"

namespace vibim {

enum class ResponseTransform { None, Log, Log1p };
enum class NaPolicy { Error, DropRow };

/// Declarative dataset description: which column is the response (and how
/// to transform it), the typed predictor roster, and how to treat missing
/// cells. Categorical levels must be declared, never inferred.
struct DataSchemaFile {
  std::string response_column;
  ResponseTransform transform = ResponseTransform::None;
  std::vector<PredictorSpec> predictors;
  char delimiter = ',';
  NaPolicy na_policy = NaPolicy::Error;
};

struct LoadedDataset {
  PredictorSchema schema;
  RawTable raw;
  Vector response;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

namespace detail {

// RFC 4180 field splitting: quoted fields may contain the delimiter,
// doubled quotes, and embedded newlines.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  const auto end_field = [&]() {
    row.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&]() {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r') {
      // swallowed; \r\n and \n both end the record
    } else if (c == '\n') {
      end_row();
    } else {
      field.push_back(c);
    }
    ++i;
  }
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

inline bool is_na(const std::string& s) { return s.empty() || s == "NA"; }

inline bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

inline DataSchemaFile load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("schema file '" + path + "' is not valid JSON: " + e.what());
  }

  DataSchemaFile schema;
  try {
    const auto& resp = j.at("response");
    schema.response_column = resp.at("column").get<std::string>();
    const std::string tr = resp.value("transform", "none");
    if (tr == "none") schema.transform = ResponseTransform::None;
    else if (tr == "log") schema.transform = ResponseTransform::Log;
    else if (tr == "log1p") schema.transform = ResponseTransform::Log1p;
    else throw DataError("unknown response transform '" + tr + "'");

    for (const auto& p : j.at("predictors")) {
      PredictorSpec spec;
      spec.name = p.at("column").get<std::string>();
      const std::string kind = p.at("kind").get<std::string>();
      if (kind == "continuous") {
        spec.kind = PredictorKind::Continuous;
      } else if (kind == "categorical") {
        spec.kind = PredictorKind::Categorical;
        for (const auto& l : p.at("levels")) spec.levels.push_back(l.get<std::string>());
      } else {
        throw DataError("unknown predictor kind '" + kind + "'");
      }
      if (spec.name == schema.response_column)
        throw DataError("response column '" + spec.name + "' also listed as a predictor");
      schema.predictors.push_back(std::move(spec));
    }

    const std::string delim = j.value("delimiter", ",");
    if (delim.size() != 1) throw DataError("delimiter must be a single character");
    schema.delimiter = delim[0];

    const std::string na = j.value("na_policy", "error");
    if (na == "error") schema.na_policy = NaPolicy::Error;
    else if (na == "drop_row") schema.na_policy = NaPolicy::DropRow;
    else throw DataError("unknown na_policy '" + na + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError("schema file '" + path + "' is malformed: " + e.what());
  }
  return schema;
}

/// Reads a delimited dataset against its schema: typed columns, declared
/// levels only, response transform applied, NA rows handled per policy.
inline LoadedDataset load_dataset(const std::string& csv_path, const DataSchemaFile& schema) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + csv_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto rows = detail::parse_csv(buf.str(), schema.delimiter);
  if (rows.empty()) throw DataError("dataset '" + csv_path + "' has no header row");

  const std::vector<std::string>& header = rows.front();
  const auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumnError(name);
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t resp_idx = column_index(schema.response_column);
  std::vector<std::size_t> pred_idx;
  for (const auto& p : schema.predictors) pred_idx.push_back(column_index(p.name));

  LoadedDataset out;
  out.schema = PredictorSchema(schema.predictors);
  out.raw.columns.resize(schema.predictors.size());
  for (std::size_t i = 0; i < schema.predictors.size(); ++i) {
    if (schema.predictors[i].kind == PredictorKind::Continuous)
      out.raw.columns[i] = std::vector<double>{};
    else
      out.raw.columns[i] = std::vector<int>{};
  }
  std::vector<double> response;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
    if (row.size() != header.size())
      throw DataError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                      " fields, header has " + std::to_string(header.size()));
    ++out.rows_read;

    bool has_na = row[resp_idx].empty() || row[resp_idx] == "NA";
    for (std::size_t i = 0; i < pred_idx.size() && !has_na; ++i)
      has_na = detail::is_na(row[pred_idx[i]]);
    if (has_na) {
      if (schema.na_policy == NaPolicy::DropRow) {
        ++out.rows_dropped;
        continue;
      }
      throw DataError("missing value in row " + std::to_string(r) +
                      " (na_policy is 'error')");
    }

    double y = 0.0;
    if (!detail::parse_double(row[resp_idx], y))
      throw UnparsableCellError(r, schema.response_column);
    switch (schema.transform) {
      case ResponseTransform::None: break;
      case ResponseTransform::Log:
        if (!(y > 0.0)) throw DataError("row " + std::to_string(r) +
                                        ": log transform needs a positive response");
        y = std::log(y);
        break;
      case ResponseTransform::Log1p:
        if (!(y > -1.0)) throw DataError("row " + std::to_string(r) +
                                         ": log1p transform needs response > -1");
        y = std::log1p(y);
        break;
    }
    response.push_back(y);

    for (std::size_t i = 0; i < schema.predictors.size(); ++i) {
      const PredictorSpec& spec = schema.predictors[i];
      const std::string& cell = row[pred_idx[i]];
      if (spec.kind == PredictorKind::Continuous) {
        double v = 0.0;
        if (!detail::parse_double(cell, v)) throw UnparsableCellError(r, spec.name);
        if (!std::isfinite(v)) throw NonFiniteValueError(r, spec.name);
        std::get<std::vector<double>>(out.raw.columns[i]).push_back(v);
      } else {
        const auto it = std::find(spec.levels.begin(), spec.levels.end(), cell);
        if (it == spec.levels.end()) throw UnknownLevelError(r, spec.name);
        std::get<std::vector<int>>(out.raw.columns[i])
            .push_back(static_cast<int>(it - spec.levels.begin()));
      }
    }
  }
  out.raw.n_rows = response.size();
  out.response = Eigen::Map<Vector>(response.data(), static_cast<Eigen::Index>(response.size()));
  return out;
}

/// JSON value tree with insertion-ordered keys and floats rendered at 17
/// significant digits, so emitted reports are deterministic and round-trip
/// through any reader bit-exactly.
class JsonValue {
 public:
  enum class Kind { Null, Bool, Number, Integer, String, Array, Object };

  JsonValue() : kind_(Kind::Null) {}
  static JsonValue boolean(bool b) { JsonValue v; v.kind_ = Kind::Bool; v.bool_ = b; return v; }
  static JsonValue number(double d) { JsonValue v; v.kind_ = Kind::Number; v.num_ = d; return v; }
  static JsonValue integer(long long i) { JsonValue v; v.kind_ = Kind::Integer; v.int_ = i; return v; }
  static JsonValue string(std::string s) { JsonValue v; v.kind_ = Kind::String; v.str_ = std::move(s); return v; }
  static JsonValue array() { JsonValue v; v.kind_ = Kind::Array; return v; }
  static JsonValue object() { JsonValue v; v.kind_ = Kind::Object; return v; }

  JsonValue& push_back(JsonValue v) {
    items_.push_back(std::move(v));
    return items_.back();
  }
  JsonValue& set(const std::string& key, JsonValue v) {
    members_.emplace_back(key, std::move(v));
    return members_.back().second;
  }

  void write(std::string& out) const {
    switch (kind_) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += bool_ ? "true" : "false"; break;
      case Kind::Integer: out += std::to_string(int_); break;
      case Kind::Number: {
        // JSON has no NaN/Inf literal; both become null.
        if (!std::isfinite(num_)) { out += "null"; break; }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", num_);
        out += buf;
        break;
      }
      case Kind::String: {
        out += '"';
        for (char c : str_) {
          switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
              if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
              } else {
                out += c;
              }
          }
        }
        out += '"';
        break;
      }
      case Kind::Array: {
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ',';
          items_[i].write(out);
        }
        out += ']';
        break;
      }
      case Kind::Object: {
        out += '{';
        for (std::size_t i = 0; i < members_.size(); ++i) {
          if (i) out += ',';
          JsonValue::string(members_[i].first).write(out);
          out += ':';
          members_[i].second.write(out);
        }
        out += '}';
        break;
      }
    }
  }

  std::string dump() const {
    std::string out;
    write(out);
    out += '\n';
    return out;
  }

 private:
  Kind kind_ = Kind::Null;
  bool bool_ = false;
  double num_ = 0.0;
  long long int_ = 0;
  std::string str_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

namespace detail {

inline std::string csv_escape(const std::string& field, char delimiter) {
  const bool needs_quotes = field.find(delimiter) != std::string::npos ||
                            field.find('"') != std::string::npos ||
                            field.find('\n') != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Writes a typed table (plus response) as CSV; floats carry 17 significant
/// digits so a reload reproduces the table bit-exactly.
inline void dump_dataset(const std::string& path, const PredictorSchema& schema,
                         const RawTable& raw, const Vector& response,
                         const std::string& response_name = "response",
                         char delimiter = ',') {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset '" + path + "'");
  out << detail::csv_escape(response_name, delimiter);
  for (const auto& e : schema.entries())
    out << delimiter << detail::csv_escape(e.name, delimiter);
  out << '\n';
  char buf[48];
  for (std::size_t r = 0; r < raw.n_rows; ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", response[static_cast<Eigen::Index>(r)]);
    out << buf;
    for (std::size_t i = 0; i < schema.size(); ++i) {
      out << delimiter;
      const PredictorSpec& e = schema.at(i);
      if (e.kind == PredictorKind::Continuous) {
        std::snprintf(buf, sizeof buf, "%.17g", raw.numeric(i).at(r));
        out << buf;
      } else {
        out << detail::csv_escape(e.levels.at(static_cast<std::size_t>(raw.levels(i).at(r))),
                                  delimiter);
      }
    }
    out << '\n';
  }
  if (!out) throw DataError("error while writing '" + path + "'");
}

/// Schema file describing a table produced by dump_dataset.
inline DataSchemaFile schema_for_dump(const PredictorSchema& schema,
                                      const std::string& response_name = "response") {
  DataSchemaFile out;
  out.response_column = response_name;
  out.transform = ResponseTransform::None;
  out.predictors = schema.entries();
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file '" + path + "'");
  out << content;
  if (!out) throw DataError("error while writing '" + path + "'");
}

/// Tab-separated table with a header row; cells are rendered verbatim.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string dump() const {
    std::string out;
    const auto join = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += '\t';
        out += cells[i];
      }
      out += '\n';
    };
    join(header);
    for (const auto& r : rows) join(r);
    return out;
  }
};

inline std::string format_double(double v, int significant = 17) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

}  // namespace vibim
