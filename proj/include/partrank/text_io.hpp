#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace partrank {

/// Line cursor over a text document. Blank lines and lines starting with '#'
/// are skipped; every other line is trimmed.
class LineReader {
 public:
  explicit LineReader(std::string_view text);

  bool at_end() const noexcept { return pos_ >= lines_.size(); }
  const std::string& peek() const;
  std::string next();
  /// 1-based line number of the line peek() would return.
  std::size_t line_number() const;
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<std::string> lines_;
  std::vector<std::size_t> numbers_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace partrank
