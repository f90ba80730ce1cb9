#ifndef TOKENLAB_CSV_HPP
#define TOKENLAB_CSV_HPP

#include <string>

namespace tokenlab {

// %.12g rendering via std::to_chars: locale-independent, '.' decimal.
std::string format_g12(double value);

// Writes content to path; throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

// Rejects CSV bodies carrying nan/inf tokens (post-write scan).
void check_no_nonfinite(const std::string& csv_content);

}  // namespace tokenlab

#endif  // TOKENLAB_CSV_HPP
