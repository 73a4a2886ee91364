#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops. Every kernel exists twice: a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`. The parallel
// versions only split loops whose iterations write disjoint outputs, so both
// produce bit-identical results; tests compare them directly.

namespace gnsphere::kernels {

namespace serial {

/// values[j] = sum_k basis[j, k] coeffs[k]   (basis is rows x cols, row-major)
void synthesize(std::span<const double> basis, std::size_t rows, std::size_t cols,
                std::span<const double> coeffs, std::span<double> values);

/// coeffs[k] = sum_j weights[j] values[j] basis[j, k]
void analyze(std::span<const double> basis, std::size_t rows, std::size_t cols,
             std::span<const double> weights, std::span<const double> values,
             std::span<double> coeffs);

/// out[j] = |in[j]|^q
void abs_pow(std::span<const double> in, double q, std::span<double> out);

/// sum_j w[j] f[j]
double weighted_sum(std::span<const double> w, std::span<const double> f);

/// sum_j w[j] |f[j]|^q
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double q);

}  // namespace serial

namespace parallel {

void synthesize(std::span<const double> basis, std::size_t rows, std::size_t cols,
                std::span<const double> coeffs, std::span<double> values);
void analyze(std::span<const double> basis, std::size_t rows, std::size_t cols,
             std::span<const double> weights, std::span<const double> values,
             std::span<double> coeffs);
void abs_pow(std::span<const double> in, double q, std::span<double> out);

}  // namespace parallel

// Reductions keep a fixed summation order regardless of thread count.
using serial::weighted_abs_pow_sum;
using serial::weighted_sum;

/// Minimum problem size for which the parallel kernels spawn threads.
inline constexpr std::size_t kParallelThreshold = 4096;

}  // namespace gnsphere::kernels
