#pragma once

#include <cstddef>

// Data-parallel float kernels used by the nn inner loops. Scalar reference
// implementations always exist; on x86 an AVX2/FMA variant is selected once
// at startup. Dispatch is fixed for the lifetime of the process, so a run is
// bitwise reproducible regardless of thread count.
namespace decnas::kernels {

// sum_i a[i]*b[i]
float dot(const float* a, const float* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(float alpha, const float* x, float* y, std::size_t n);

// y[i] = alpha * x[i]
void scale(float alpha, const float* x, float* y, std::size_t n);

// sum_i x[i]
float sum(const float* x, std::size_t n);

// sum_i x[i]*x[i]
float sum_squares(const float* x, std::size_t n);

// Name of the active backend: "scalar" or "avx2".
const char* backend_name();

namespace detail {
float dot_scalar(const float* a, const float* b, std::size_t n);
void axpy_scalar(float alpha, const float* x, float* y, std::size_t n);
void scale_scalar(float alpha, const float* x, float* y, std::size_t n);
float sum_scalar(const float* x, std::size_t n);
float sum_squares_scalar(const float* x, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
float dot_avx2(const float* a, const float* b, std::size_t n);
void axpy_avx2(float alpha, const float* x, float* y, std::size_t n);
void scale_avx2(float alpha, const float* x, float* y, std::size_t n);
float sum_avx2(const float* x, std::size_t n);
float sum_squares_avx2(const float* x, std::size_t n);
#endif
}  // namespace detail

}  // namespace decnas::kernels
