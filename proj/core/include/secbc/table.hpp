#ifndef SECBC_TABLE_HPP
#define SECBC_TABLE_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace secbc {

// Comma-delimited result table with a header row. All numeric cells are
// rendered with 9 significant digits, so a table is a pure function of its
// inputs and reruns diff cleanly.
struct TableData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;  // throws ParseError
};

std::string format_sig9(double v);
std::string format_int(long long v);

std::string render_table(const TableData& table);
TableData parse_table(const std::string& text);  // throws ParseError

// Write-then-rename so readers never observe a partial file.
void write_table_atomic(const std::filesystem::path& path, const TableData& table);
TableData read_table(const std::filesystem::path& path);

double cell_as_double(const std::string& cell);  // throws ParseError

}  // namespace secbc

#endif
