#include "gnsphere/kernels.hpp"

#include <cmath>
#include <vector>

namespace gnsphere::kernels {

namespace serial {

void synthesize(std::span<const double> basis, std::size_t rows, std::size_t cols,
                std::span<const double> coeffs, std::span<double> values) {
  for (std::size_t j = 0; j < rows; ++j) {
    const double* row = basis.data() + j * cols;
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += row[k] * coeffs[k];
    values[j] = acc;
  }
}

void analyze(std::span<const double> basis, std::size_t rows, std::size_t cols,
             std::span<const double> weights, std::span<const double> values,
             std::span<double> coeffs) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rows; ++j) acc += weights[j] * values[j] * basis[j * cols + k];
    coeffs[k] = acc;
  }
}

void abs_pow(std::span<const double> in, double q, std::span<double> out) {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = std::pow(std::abs(in[j]), q);
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * f[j];
  return acc;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> f, double q) {
  double acc = 0.0;
  if (q == 2.0) {
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * f[j] * f[j];
  } else {
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * std::pow(std::abs(f[j]), q);
  }
  return acc;
}

}  // namespace serial

namespace parallel {

void synthesize(std::span<const double> basis, std::size_t rows, std::size_t cols,
                std::span<const double> coeffs, std::span<double> values) {
  const std::size_t nc = coeffs.size();
  const long long n = static_cast<long long>(rows);
#pragma omp parallel for schedule(static) if (rows * nc >= kParallelThreshold)
  for (long long j = 0; j < n; ++j) {
    const double* row = basis.data() + static_cast<std::size_t>(j) * cols;
    double acc = 0.0;
    for (std::size_t k = 0; k < nc; ++k) acc += row[k] * coeffs[k];
    values[static_cast<std::size_t>(j)] = acc;
  }
}

void analyze(std::span<const double> basis, std::size_t rows, std::size_t cols,
             std::span<const double> weights, std::span<const double> values,
             std::span<double> coeffs) {
  const long long nc = static_cast<long long>(coeffs.size());
#pragma omp parallel for schedule(static) if (rows * coeffs.size() >= kParallelThreshold)
  for (long long k = 0; k < nc; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rows; ++j)
      acc += weights[j] * values[j] * basis[j * cols + static_cast<std::size_t>(k)];
    coeffs[static_cast<std::size_t>(k)] = acc;
  }
}

void abs_pow(std::span<const double> in, double q, std::span<double> out) {
  const long long n = static_cast<long long>(in.size());
#pragma omp parallel for schedule(static) if (in.size() >= kParallelThreshold)
  for (long long j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = std::pow(std::abs(in[static_cast<std::size_t>(j)]), q);
  }
}

}  // namespace parallel

}  // namespace gnsphere::kernels
