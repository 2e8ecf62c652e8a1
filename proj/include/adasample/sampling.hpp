#pragma once

#include <vector>

#include "adasample/rng.hpp"
#include "adasample/types.hpp"

namespace adasample {

// Uniform m-subset of {0..n-1} without replacement (Floyd's algorithm),
// written to out in ascending order. Pre: 1 <= m <= n.
void sample_without_replacement(RngStream& rng, Index n, Index m,
                                std::vector<Index>& out);

}  // namespace adasample
