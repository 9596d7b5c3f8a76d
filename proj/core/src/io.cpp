#include "calrisk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace calrisk {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

}  // namespace

ParseError::ParseError(std::string_view source, std::size_t line, const std::string& what)
    : InputError(std::string(source) + ":" + std::to_string(line) + ": " + what), line_(line) {}

DataFormat parse_format(std::string_view name) {
  if (name == "logits-csv") return DataFormat::logits_csv;
  if (name == "probs-csv") return DataFormat::probs_csv;
  throw InputError("unknown data format '" + std::string(name) + "'");
}

const char* to_string(DataFormat format) {
  return format == DataFormat::logits_csv ? "logits-csv" : "probs-csv";
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_dataset(in, format, path.string());
}

Dataset parse_dataset(std::istream& in, DataFormat format, std::string_view source) {
  std::vector<double> values;
  std::vector<int> labels;
  Index width = -1;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);

    row.clear();
    bool numeric = true;
    for (auto cell : cells) {
      double v = 0.0;
      if (!parse_number(cell, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (width < 0 && labels.empty() && line_no == 1) continue;  // header
      throw ParseError(source, line_no, "non-numeric cell");
    }

    const auto cols = static_cast<Index>(cells.size());
    if (width < 0) {
      if (cols < 3) throw ParseError(source, line_no, "need at least two classes and a label");
      width = cols;
    } else if (cols != width) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(width) + " cells, found " + std::to_string(cols));
    }

    const Index d = width - 1;
    const double raw_label = row.back();
    if (raw_label != std::floor(raw_label) || raw_label < 0.0) {
      throw ParseError(source, line_no, "label must be a nonnegative integer");
    }
    if (raw_label >= static_cast<double>(d)) {
      throw ParseError(source, line_no, "label " + std::to_string(static_cast<long long>(raw_label)) +
                                            " out of range for " + std::to_string(d) + " classes");
    }
    row.pop_back();

    Eigen::Map<const Eigen::VectorXd> cell_values(row.data(), d);
    if (!cell_values.allFinite()) throw ParseError(source, line_no, "non-finite value");
    Eigen::VectorXd probs;
    if (format == DataFormat::logits_csv) {
      probs = softmax(cell_values);
    } else {
      if ((cell_values.array() < 0.0).any() || (cell_values.array() > 1.0).any()) {
        throw ParseError(source, line_no, "probability outside [0, 1]");
      }
      const double sum = cell_values.sum();
      if (std::abs(sum - 1.0) > kCsvSumTolerance) {
        std::ostringstream msg;
        msg << "probabilities sum to " << std::setprecision(10) << sum;
        throw ParseError(source, line_no, msg.str());
      }
      probs = cell_values / sum;
    }
    values.insert(values.end(), probs.data(), probs.data() + d);
    labels.push_back(static_cast<int>(raw_label));
  }
  if (labels.empty()) throw InputError(std::string(source) + ": no data rows");

  const Index d = width - 1;
  Eigen::MatrixXd points = Eigen::Map<Eigen::MatrixXd>(values.data(), d, static_cast<Index>(labels.size()));
  return Dataset::canonical(std::move(points), std::move(labels));
}

void write_probs_csv(std::ostream& out, const Dataset& data) {
  if (data.mode() != Mode::canonical) throw InputError("probs-csv holds canonical predictions only");
  for (Index k = 0; k < data.dim(); ++k) out << 'p' << k << ',';
  out << "label\n";
  out << std::setprecision(17);
  for (Index i = 0; i < data.size(); ++i) {
    for (Index k = 0; k < data.dim(); ++k) out << data.points()(k, i) << ',';
    out << data.label(i) << '\n';
  }
}

}  // namespace calrisk
