#pragma once

#include "adasample/dataset.hpp"

namespace adasample {

// Dense synthetic classification data: features i.i.d. standard normal, labels
// the sign of a random separating hyperplane, then flipped independently with
// probability flip_prob. Deterministic in seed (separate substreams for the
// hyperplane, the features in row-major order, and the flips).
Dataset gen_synthetic(Index n, Index d, double flip_prob, std::uint64_t seed);

}  // namespace adasample
