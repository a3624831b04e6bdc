#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace d2dsim {

// Formats a double with the shortest representation that round-trips exactly
// (std::to_chars), so CSV output is byte-stable for a given build.
std::string fmt_double(double v);

// RFC-4180 style quoting: fields containing comma, quote, CR or LF are quoted,
// embedded quotes doubled.
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return buf_; }
  void write_file(const std::string& path) const;

 private:
  std::size_t width_;
  std::string buf_;
};

// Parses CSV text (with quoting) into rows of fields; the header row is kept.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

}  // namespace d2dsim
