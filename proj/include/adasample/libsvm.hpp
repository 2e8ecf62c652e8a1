#pragma once

#include <string>

#include "adasample/dataset.hpp"

namespace adasample {

// Reads LIBSVM text: one sample per line, "label idx:val ...", indices
// 1-based. Labels > 0 map to +1, labels <= 0 to -1. Features are stored CSR
// in column order. d is the largest index seen, or n_features_min when that
// is larger. Throws ParseError (with line number) on malformed lines,
// duplicate indices, or non-finite values; IoError when the file cannot be
// opened.
Dataset parse_libsvm(const std::string& path, Index n_features_min = 0);

// Inverse of parse_libsvm up to float formatting: writes nonzero entries at
// 17 significant digits, labels as +1 / -1.
void write_libsvm(const Dataset& data, const std::string& path);

}  // namespace adasample
