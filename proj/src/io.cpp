#include "ebh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ebh {

namespace {

double parse_value(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::runtime_error("malformed number '" + cell + "'");
  return v;
}

Axis axis_from_label(const std::string& label) {
  if (label == axis_label(Axis::J)) return Axis::J;
  if (label == axis_label(Axis::U_LR)) return Axis::U_LR;
  throw std::runtime_error("unknown axis column '" + label + "'");
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown output format '" + name + "' (csv|json)");
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (ec != std::errc{}) throw std::runtime_error("could not format value");
  return {buf, ptr};
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, Axis axis) {
  const auto columns = sweep_columns(axis);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    const auto values = row_values(row);
    for (std::size_t c = 0; c < values.size(); ++c)
      os << (c ? "," : "") << format_value(values[c]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows, Axis axis) {
  const auto columns = sweep_columns(axis);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    const auto values = row_values(row);
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (std::isnan(values[c]))
        obj[columns[c]] = "nan";
      else
        obj[columns[c]] = values[c];
    }
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

SweepTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV input");
  const auto header = split_line(line);
  if (header.size() != kSweepColumns) throw std::runtime_error("CSV header has wrong width");
  SweepTable table;
  table.axis = axis_from_label(header[0]);
  if (header != sweep_columns(table.axis)) throw std::runtime_error("unexpected CSV header");

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != kSweepColumns) throw std::runtime_error("CSV row has wrong width");
    std::vector<double> values;
    for (const auto& cell : cells) values.push_back(parse_value(cell));
    table.rows.push_back(row_from_values(values));
  }
  return table;
}

SweepTable read_json(std::istream& is) {
  const auto doc = nlohmann::ordered_json::parse(is);
  if (!doc.is_array()) throw std::runtime_error("JSON sweep output must be an array");
  SweepTable table;
  if (doc.empty()) return table;
  table.axis = axis_from_label(doc.front().begin().key());
  const auto columns = sweep_columns(table.axis);
  for (const auto& obj : doc) {
    std::vector<double> values;
    for (const auto& name : columns) {
      if (!obj.contains(name)) throw std::runtime_error("JSON row lacks '" + name + "'");
      const auto& v = obj.at(name);
      if (v.is_string()) {
        values.push_back(parse_value(v.get<std::string>()));
      } else if (v.is_number()) {
        values.push_back(v.get<double>());
      } else {
        throw std::runtime_error("JSON value for '" + name + "' is not a number");
      }
    }
    table.rows.push_back(row_from_values(values));
  }
  return table;
}

void emit(const std::vector<SweepRow>& rows, Axis axis, Format format,
          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (format == Format::csv)
    write_csv(out, rows, axis);
  else
    write_json(out, rows, axis);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace ebh
