#include "tokenlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include "tokenlab/errors.hpp"

namespace tokenlab {

std::string format_g12(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

void check_no_nonfinite(const std::string& csv_content) {
  std::size_t pos = 0;
  while (pos < csv_content.size()) {
    std::size_t eol = csv_content.find('\n', pos);
    if (eol == std::string::npos) eol = csv_content.size();
    if (csv_content[pos] != '#') {
      std::string_view line(csv_content.data() + pos, eol - pos);
      for (const char* bad : {"nan", "inf", "NAN", "INF"}) {
        if (line.find(bad) != std::string_view::npos)
          throw NumericConsistencyError(
              std::string("non-finite value emitted (found '") + bad + "')");
      }
    }
    pos = eol + 1;
  }
}

}  // namespace tokenlab
