#include "partrank/text_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "partrank/error.hpp"

namespace partrank {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw PreconditionError("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

LineReader::LineReader(std::string_view text) {
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    ++number;
    std::string line = trim(text.substr(start, pos - start));
    if (!line.empty() && line.front() != '#') {
      lines_.push_back(std::move(line));
      numbers_.push_back(number);
    }
    start = pos + 1;
  }
}

const std::string& LineReader::peek() const {
  if (at_end()) throw PreconditionError("unexpected end of input");
  return lines_[pos_];
}

std::string LineReader::next() {
  const std::string& line = peek();
  ++pos_;
  return line;
}

std::size_t LineReader::line_number() const {
  if (pos_ < numbers_.size()) return numbers_[pos_];
  return numbers_.empty() ? 0 : numbers_.back() + 1;
}

void LineReader::fail(const std::string& message) const {
  const std::size_t at = pos_ == 0 ? line_number() : numbers_[std::min(pos_, numbers_.size()) - 1];
  throw PreconditionError("line " + std::to_string(at) + ": " + message);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << contents;
}

}  // namespace partrank
