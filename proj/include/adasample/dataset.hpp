#pragma once

#include <vector>

#include "adasample/types.hpp"

namespace adasample {

// Labeled finite-sum dataset. Features are stored either densely (one row per
// sample) or as CSR; labels are always the full vector with entries in
// {-1, +1}. Access during gradient evaluation goes through dot / add_scaled_row
// so the objective code is storage-agnostic.
class Dataset {
 public:
  static Dataset dense(RowMatrix features, Vector labels);
  static Dataset sparse(std::vector<Index> row_ptr, std::vector<Index> col,
                        std::vector<double> val, Index n_features, Vector labels);

  Index n_samples() const { return labels_.size(); }
  Index n_features() const { return n_features_; }
  bool is_sparse() const { return sparse_; }
  double label(Index i) const { return labels_(i); }
  const Vector& labels() const { return labels_; }

  // x . y_i
  double dot(Index i, const Vector& x) const;
  // out += c * y_i, out dense of length d
  void add_scaled_row(Index i, double c, double* out) const;
  // Dense copy of row i (diagnostics and round-trip tests).
  Vector row_dense(Index i) const;
  // Nonzero entries of row i as (column, value), in column order.
  std::vector<std::pair<Index, double>> row_entries(Index i) const;

  const RowMatrix& dense_features() const { return dense_; }

  // Throws ConfigError when an invariant is broken: empty shape, labels
  // outside {-1,+1}, non-finite features, or CSR indices out of range.
  void validate() const;

 private:
  Dataset() = default;

  bool sparse_ = false;
  Index n_features_ = 0;
  RowMatrix dense_;             // dense storage, N x d
  std::vector<Index> row_ptr_;  // CSR storage
  std::vector<Index> col_;
  std::vector<double> val_;
  Vector labels_;
};

}  // namespace adasample
