#include "midp/count_table.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace midp {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r";
  std::size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

long parse_count(const std::string& s, std::size_t lineno, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error("row " + std::to_string(lineno) + ": " + what +
                             " must be a nonnegative integer, got '" + s + "'");
  try {
    return std::stol(s);
  } catch (const std::exception&) {
    throw std::runtime_error("row " + std::to_string(lineno) + ": " + what +
                             " out of range: '" + s + "'");
  }
}

}  // namespace

CountTable parse_count_table(std::istream& in, long min_total) {
  if (min_total < 0) throw std::invalid_argument("min_total must be >= 0");
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error("empty input: missing header");
  ++lineno;
  std::vector<std::string> header = split_csv(line);

  CountTable table;
  if (header == std::vector<std::string>{"id", "c1", "c2"}) {
    table.has_margins = false;
  } else if (header == std::vector<std::string>{"id", "c1", "c2", "N1", "N2"}) {
    table.has_margins = true;
  } else {
    throw std::runtime_error("header must be id,c1,c2 or id,c1,c2,N1,N2");
  }
  const std::size_t want = table.has_margins ? 5 : 3;

  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() != want)
      throw std::runtime_error("row " + std::to_string(lineno) + ": expected " +
                               std::to_string(want) + " fields, got " +
                               std::to_string(fields.size()));
    CountRow row;
    row.id = fields[0];
    if (row.id.empty())
      throw std::runtime_error("row " + std::to_string(lineno) + ": empty id");
    if (!seen.insert(row.id).second)
      throw std::runtime_error("row " + std::to_string(lineno) + ": duplicate id '" +
                               row.id + "'");
    row.c1 = parse_count(fields[1], lineno, "c1");
    row.c2 = parse_count(fields[2], lineno, "c2");
    if (table.has_margins) {
      row.n1 = parse_count(fields[3], lineno, "N1");
      row.n2 = parse_count(fields[4], lineno, "N2");
      if (row.n1 < 1 || row.n2 < 1)
        throw std::runtime_error("row " + std::to_string(lineno) + ": margins must be >= 1");
      if (row.c1 > row.n1 || row.c2 > row.n2)
        throw std::runtime_error("row " + std::to_string(lineno) +
                                 ": count exceeds its margin");
    }
    if (row.c1 + row.c2 < min_total) {
      ++table.removed_rows;
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CountTable ingest(const std::string& path, long min_total) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_count_table(in, min_total);
}

}  // namespace midp
