#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "calrisk/core.hpp"

namespace calrisk {

class ParseError : public InputError {
 public:
  ParseError(std::string_view source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// logits-csv: rows `l_0,...,l_{d-1},label`, softmaxed at temperature 1.
// probs-csv:  rows `p_0,...,p_{d-1},label`; each row must sum to 1 within
//             1e-6 and is renormalized.
// A header line is optional; labels are zero-based class indices.
enum class DataFormat { logits_csv, probs_csv };

inline constexpr double kCsvSumTolerance = 1e-6;

DataFormat parse_format(std::string_view name);
const char* to_string(DataFormat format);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format);
Dataset parse_dataset(std::istream& in, DataFormat format, std::string_view source = "<stream>");

// Writes a canonical dataset as probs-csv with a header line.
void write_probs_csv(std::ostream& out, const Dataset& data);

}  // namespace calrisk
