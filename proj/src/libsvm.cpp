#include "adasample/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "adasample/errors.hpp"
#include "adasample/trace_csv.hpp"

namespace adasample {
namespace {

bool parse_full_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  // from_chars rejects an explicit plus sign, but "+1" labels are standard in
  // this format.
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

bool parse_full_index(const std::string& s, Index& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

}  // namespace

Dataset parse_libsvm(const std::string& path, Index n_features_min) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<double> labels;
  std::vector<Index> row_ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  Index max_col = 0;

  std::string line;
  long line_no = 0;
  std::vector<std::pair<Index, double>> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // split on blanks
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    if (tokens.empty()) continue;  // blank line

    double raw_label;
    if (!parse_full_double(tokens[0], raw_label) || std::isnan(raw_label))
      throw ParseError("malformed label '" + tokens[0] + "'", line_no);
    labels.push_back(raw_label > 0.0 ? 1.0 : -1.0);

    entries.clear();
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string& tok = tokens[t];
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw ParseError("malformed feature entry '" + tok + "'", line_no);
      Index idx;
      if (!parse_full_index(tok.substr(0, colon), idx) || idx < 1)
        throw ParseError("malformed feature index in '" + tok + "'", line_no);
      double v;
      if (!parse_full_double(tok.substr(colon + 1), v))
        throw ParseError("malformed feature value in '" + tok + "'", line_no);
      if (!std::isfinite(v))
        throw ParseError("non-finite feature value in '" + tok + "'", line_no);
      entries.emplace_back(idx - 1, v);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t t = 1; t < entries.size(); ++t)
      if (entries[t].first == entries[t - 1].first)
        throw ParseError("duplicate feature index " +
                             std::to_string(entries[t].first + 1),
                         line_no);
    for (const auto& [c, v] : entries) {
      cols.push_back(c);
      vals.push_back(v);
      max_col = std::max(max_col, c + 1);
    }
    row_ptr.push_back(static_cast<Index>(cols.size()));
  }
  if (labels.empty()) throw ParseError("no samples in " + path);
  if (n_features_min > 0 && max_col > n_features_min)
    throw ParseError("feature index " + std::to_string(max_col) +
                     " exceeds the requested dimension");

  const Index d = std::max(max_col, n_features_min);
  Vector lab = Eigen::Map<Vector>(labels.data(), static_cast<Index>(labels.size()));
  return Dataset::sparse(std::move(row_ptr), std::move(cols), std::move(vals), d,
                         std::move(lab));
}

void write_libsvm(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (Index i = 0; i < data.n_samples(); ++i) {
    out << (data.label(i) > 0 ? "+1" : "-1");
    for (const auto& [c, v] : data.row_entries(i)) {
      if (v == 0.0) continue;
      out << ' ' << (c + 1) << ':' << format_g17(v);
    }
    out << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace adasample
