#include "decnas/kernels.hpp"

#include <cstdlib>
#include <string_view>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define DECNAS_HAVE_AVX2_BUILD 1
#endif

namespace decnas::kernels {

namespace detail {

float dot_scalar(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i];
}

float sum_scalar(const float* x, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

float sum_squares_scalar(const float* x, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

#ifdef DECNAS_HAVE_AVX2_BUILD

__attribute__((target("avx2,fma")))
static float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

__attribute__((target("avx2,fma")))
float dot_avx2(const float* a, const float* b, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
  }
  float tail = 0.0f;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum256(acc) + tail;
}

__attribute__((target("avx2,fma")))
void axpy_avx2(float alpha, const float* x, float* y, std::size_t n) {
  __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma")))
void scale_avx2(float alpha, const float* x, float* y, std::size_t n) {
  __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) y[i] = alpha * x[i];
}

__attribute__((target("avx2,fma")))
float sum_avx2(const float* x, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  float tail = 0.0f;
  for (; i < n; ++i) tail += x[i];
  return hsum256(acc) + tail;
}

__attribute__((target("avx2,fma")))
float sum_squares_avx2(const float* x, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    acc = _mm256_fmadd_ps(v, v, acc);
  }
  float tail = 0.0f;
  for (; i < n; ++i) tail += x[i] * x[i];
  return hsum256(acc) + tail;
}

#endif  // DECNAS_HAVE_AVX2_BUILD

}  // namespace detail

namespace {

struct Dispatch {
  float (*dot)(const float*, const float*, std::size_t);
  void (*axpy)(float, const float*, float*, std::size_t);
  void (*scale)(float, const float*, float*, std::size_t);
  float (*sum)(const float*, std::size_t);
  float (*sum_squares)(const float*, std::size_t);
  const char* name;
};

Dispatch select_backend() {
  // DECNAS_KERNELS=scalar pins the reference backend (useful for bitwise
  // comparisons that depend on a fixed summation order).
  const char* forced = std::getenv("DECNAS_KERNELS");
  if (forced && std::string_view(forced) == "scalar") {
    return {detail::dot_scalar, detail::axpy_scalar, detail::scale_scalar,
            detail::sum_scalar, detail::sum_squares_scalar, "scalar"};
  }
#ifdef DECNAS_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {detail::dot_avx2, detail::axpy_avx2, detail::scale_avx2,
            detail::sum_avx2, detail::sum_squares_avx2, "avx2"};
  }
#endif
  return {detail::dot_scalar, detail::axpy_scalar, detail::scale_scalar,
          detail::sum_scalar, detail::sum_squares_scalar, "scalar"};
}

const Dispatch& dispatch() {
  static const Dispatch d = select_backend();
  return d;
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) { return dispatch().dot(a, b, n); }
void axpy(float alpha, const float* x, float* y, std::size_t n) { dispatch().axpy(alpha, x, y, n); }
void scale(float alpha, const float* x, float* y, std::size_t n) { dispatch().scale(alpha, x, y, n); }
float sum(const float* x, std::size_t n) { return dispatch().sum(x, n); }
float sum_squares(const float* x, std::size_t n) { return dispatch().sum_squares(x, n); }
const char* backend_name() { return dispatch().name; }

}  // namespace decnas::kernels
