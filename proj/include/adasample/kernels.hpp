#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace adasample::kernels {

// Fixed reduction chunk width. Every batch reduction accumulates samples
// sequentially inside chunks of this many entries and then folds the
// per-chunk partials in chunk order. The result is therefore a function of
// the data alone, independent of thread count, and the Parallel=false
// instantiation (the serial reference kept for tests and the benchmark)
// produces bitwise-identical output.
inline constexpr std::ptrdiff_t kChunk = 1024;

inline std::ptrdiff_t chunk_count(std::ptrdiff_t n) {
  return n <= 0 ? 0 : (n - 1) / kChunk + 1;
}

// Runs fn(chunk, begin, end) over [0, n). Both instantiations invoke the same
// chunk body; only the loop over chunks is threaded.
template <bool Parallel, class Fn>
void for_each_chunk(std::ptrdiff_t n, Fn&& fn) {
  const std::ptrdiff_t nc = chunk_count(n);
  if constexpr (Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t c = 0; c < nc; ++c)
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
  } else {
    for (std::ptrdiff_t c = 0; c < nc; ++c)
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
  }
}

template <bool Parallel>
double sum(const double* x, std::ptrdiff_t n) {
  std::vector<double> partial(chunk_count(n), 0.0);
  for_each_chunk<Parallel>(n, [&](std::ptrdiff_t c, std::ptrdiff_t b, std::ptrdiff_t e) {
    double s = 0.0;
    for (std::ptrdiff_t i = b; i < e; ++i) s += x[i];
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <bool Parallel>
double centered_square_sum(const double* x, std::ptrdiff_t n, double center) {
  std::vector<double> partial(chunk_count(n), 0.0);
  for_each_chunk<Parallel>(n, [&](std::ptrdiff_t c, std::ptrdiff_t b, std::ptrdiff_t e) {
    double s = 0.0;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      const double dlt = x[i] - center;
      s += dlt * dlt;
    }
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Column sums of an n-by-d row-major matrix, chunked over rows. out must hold
// d entries and is overwritten.
template <bool Parallel>
void row_sum(const double* rows, std::ptrdiff_t n, std::ptrdiff_t d, double* out) {
  const std::ptrdiff_t nc = chunk_count(n);
  std::vector<double> partial(static_cast<std::size_t>(nc) * d, 0.0);
  for_each_chunk<Parallel>(n, [&](std::ptrdiff_t c, std::ptrdiff_t b, std::ptrdiff_t e) {
    double* p = partial.data() + c * d;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      const double* row = rows + i * d;
      for (std::ptrdiff_t j = 0; j < d; ++j) p[j] += row[j];
    }
  });
  std::fill(out, out + d, 0.0);
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const double* p = partial.data() + c * d;
    for (std::ptrdiff_t j = 0; j < d; ++j) out[j] += p[j];
  }
}

}  // namespace adasample::kernels
