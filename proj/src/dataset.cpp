#include "adasample/dataset.hpp"

#include <cmath>
#include <string>

#include "adasample/errors.hpp"

namespace adasample {

Dataset Dataset::dense(RowMatrix features, Vector labels) {
  Dataset d;
  d.sparse_ = false;
  d.n_features_ = features.cols();
  d.dense_ = std::move(features);
  d.labels_ = std::move(labels);
  d.validate();
  return d;
}

Dataset Dataset::sparse(std::vector<Index> row_ptr, std::vector<Index> col,
                        std::vector<double> val, Index n_features, Vector labels) {
  Dataset d;
  d.sparse_ = true;
  d.n_features_ = n_features;
  d.row_ptr_ = std::move(row_ptr);
  d.col_ = std::move(col);
  d.val_ = std::move(val);
  d.labels_ = std::move(labels);
  d.validate();
  return d;
}

double Dataset::dot(Index i, const Vector& x) const {
  if (!sparse_) return dense_.row(i).dot(x);
  double s = 0.0;
  for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += val_[p] * x(col_[p]);
  return s;
}

void Dataset::add_scaled_row(Index i, double c, double* out) const {
  if (!sparse_) {
    const double* row = dense_.data() + i * n_features_;
    for (Index j = 0; j < n_features_; ++j) out[j] += c * row[j];
    return;
  }
  for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out[col_[p]] += c * val_[p];
}

Vector Dataset::row_dense(Index i) const {
  Vector row = Vector::Zero(n_features_);
  add_scaled_row(i, 1.0, row.data());
  return row;
}

std::vector<std::pair<Index, double>> Dataset::row_entries(Index i) const {
  std::vector<std::pair<Index, double>> out;
  if (!sparse_) {
    for (Index j = 0; j < n_features_; ++j)
      if (dense_(i, j) != 0.0) out.emplace_back(j, dense_(i, j));
    return out;
  }
  for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    out.emplace_back(col_[p], val_[p]);
  return out;
}

void Dataset::validate() const {
  const Index n = labels_.size();
  if (n < 1) throw ConfigError("dataset needs at least one sample");
  if (n_features_ < 1) throw ConfigError("dataset needs at least one feature");
  for (Index i = 0; i < n; ++i)
    if (labels_(i) != 1.0 && labels_(i) != -1.0)
      throw ConfigError("label outside {-1,+1} at sample " + std::to_string(i));
  if (!sparse_) {
    if (dense_.rows() != n || dense_.cols() != n_features_)
      throw ConfigError("dense feature shape does not match labels");
    if (!dense_.allFinite()) throw ConfigError("non-finite feature value");
    return;
  }
  if (static_cast<Index>(row_ptr_.size()) != n + 1)
    throw ConfigError("CSR row pointer length must be N+1");
  if (row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<Index>(col_.size()) ||
      col_.size() != val_.size())
    throw ConfigError("inconsistent CSR arrays");
  for (Index i = 0; i < n; ++i)
    if (row_ptr_[i] > row_ptr_[i + 1]) throw ConfigError("CSR row pointer not monotone");
  for (std::size_t p = 0; p < col_.size(); ++p) {
    if (col_[p] < 0 || col_[p] >= n_features_)
      throw ConfigError("CSR column index out of range");
    if (!std::isfinite(val_[p])) throw ConfigError("non-finite feature value");
  }
}

}  // namespace adasample
