#include "adasample/synthetic.hpp"

#include "adasample/errors.hpp"
#include "adasample/rng.hpp"

namespace adasample {

Dataset gen_synthetic(Index n, Index d, double flip_prob, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("synthetic data needs n >= 1 and d >= 1");
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0))
    throw ConfigError("flip probability must lie in [0, 1]");

  RngStream root(seed);
  RngStream plane = root.substream(0);
  RngStream feats = root.substream(1);
  RngStream flips = root.substream(2);

  Vector w(d);
  for (Index j = 0; j < d; ++j) w(j) = plane.next_gaussian();

  RowMatrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = feats.next_gaussian();

  Vector labels(n);
  for (Index i = 0; i < n; ++i) {
    double z = x.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (flips.next_double() < flip_prob) z = -z;
    labels(i) = z;
  }
  return Dataset::dense(std::move(x), std::move(labels));
}

}  // namespace adasample
