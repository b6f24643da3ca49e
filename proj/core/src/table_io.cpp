#include "pathreg/error.hpp"
#include "pathreg/tables.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pathreg {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_bit(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw ParseError(line, std::string(name) + " must be 0 or 1, got '" + std::string(field) + "'");
}

ContingencyTable222::Count parse_count(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '-') {
    throw Error(ErrorCode::NegativeCount,
                "line " + std::to_string(line) + ": negative count '" + std::string(field) + "'");
  }
  ContingencyTable222::Count value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, "count must be a non-negative integer, got '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

ContingencyTable222 parse_table_csv(std::string_view text) {
  ContingencyTable222 table;
  std::array<bool, 8> seen{};
  std::size_t line_no = 0;
  bool header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                             : end - start);
    start = end == std::string_view::npos ? text.size() : end + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (!header) {
      if (fields.size() != 4 || trim(fields[0]) != "y" || trim(fields[1]) != "x1" ||
          trim(fields[2]) != "x2" || trim(fields[3]) != "count") {
        throw ParseError(line_no, "expected header 'y,x1,x2,count'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields");
    const int y = parse_bit(fields[0], line_no, "y");
    const int x1 = parse_bit(fields[1], line_no, "x1");
    const int x2 = parse_bit(fields[2], line_no, "x2");
    const auto count = parse_count(fields[3], line_no);
    const auto idx = ContingencyTable222::index(y, x1, x2);
    if (seen[idx]) throw ParseError(line_no, "duplicate cell");
    seen[idx] = true;
    table.set(y, x1, x2, count);
  }
  if (!header) throw ParseError(line_no == 0 ? 1 : line_no, "empty input, missing header");
  return table;
}

ContingencyTable222 read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table_csv(buf.str());
}

std::string format_table_csv(const ContingencyTable222& table) {
  std::string out = "y,x1,x2,count\n";
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        out += std::to_string(i) + ',' + std::to_string(j) + ',' + std::to_string(k) + ',' +
               std::to_string(table.at(i, j, k)) + '\n';
      }
  return out;
}

void write_table_csv(const ContingencyTable222& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << format_table_csv(table);
}

std::string table_to_json(const ContingencyTable222& table) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (int i = 0; i < 2; ++i) {
    nlohmann::ordered_json plane = nlohmann::ordered_json::array();
    for (int j = 0; j < 2; ++j) plane.push_back({table.at(i, j, 0), table.at(i, j, 1)});
    counts.push_back(plane);
  }
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  if (!table.labels().y.empty()) labels["y"] = table.labels().y;
  if (!table.labels().x1.empty()) labels["x1"] = table.labels().x1;
  if (!table.labels().x2.empty()) labels["x2"] = table.labels().x2;
  nlohmann::ordered_json doc;
  doc["counts"] = counts;
  doc["labels"] = labels;
  return doc.dump();
}

ContingencyTable222 table_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  const auto& counts = doc.at("counts");
  if (!counts.is_array() || counts.size() != 2) throw ParseError(1, "counts must be 2x2x2");
  ContingencyTable222 table;
  for (int i = 0; i < 2; ++i) {
    if (!counts[i].is_array() || counts[i].size() != 2) throw ParseError(1, "counts must be 2x2x2");
    for (int j = 0; j < 2; ++j) {
      const auto& row = counts[i][j];
      if (!row.is_array() || row.size() != 2) throw ParseError(1, "counts must be 2x2x2");
      for (int k = 0; k < 2; ++k) {
        if (row[k].is_number_integer() && row[k].get<long long>() < 0) {
          throw Error(ErrorCode::NegativeCount, "negative count in JSON table");
        }
        if (!row[k].is_number_unsigned()) throw ParseError(1, "counts must be integers");
        table.set(i, j, k, row[k].get<ContingencyTable222::Count>());
      }
    }
  }
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    table.set_labels({l.value("y", ""), l.value("x1", ""), l.value("x2", "")});
  }
  return table;
}

}  // namespace pathreg
