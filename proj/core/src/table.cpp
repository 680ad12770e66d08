#include "secbc/table.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "secbc/errors.hpp"

namespace secbc {

std::size_t TableData::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ParseError("table has no column '" + name + "'");
}

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_int(long long v) {
  return std::to_string(v);
}

std::string render_table(const TableData& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw ValidationError("table row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

TableData parse_table(const std::string& text) {
  TableData table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("table is empty");
  table.columns = split_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.columns.size())
      throw ParseError("line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(table.columns.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_table_atomic(const std::filesystem::path& path, const TableData& table) {
  const std::string body = render_table(table);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw ValidationError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

TableData read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

double cell_as_double(const std::string& cell) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("cell '" + cell + "' is not a number");
  return v;
}

}  // namespace secbc
