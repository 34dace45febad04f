#include "gpdp/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define GPDP_HAVE_AVX2_BUILD 1
#endif

namespace gpdp::kernels {

#ifdef GPDP_HAVE_AVX2_BUILD
namespace {

void ramp_profile_avx2(const double* coords, std::size_t n, double lambda, double b,
                       double* out) {
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(coords + i);
    const __m256d u = _mm256_mul_pd(vl, _mm256_sub_pd(vb, x));
    _mm256_storeu_pd(out + i, _mm256_max_pd(zero, _mm256_min_pd(one, u)));
  }
  for (; i < n; ++i) {
    const double u = lambda * (b - coords[i]);
    out[i] = u >= 1.0 ? 1.0 : (u <= 0.0 ? 0.0 : u);
  }
}

void scale_avx2(const double* in, std::size_t n, double factor, double* out) {
  const __m256d vf = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vf, _mm256_loadu_pd(in + i)));
  for (; i < n; ++i) out[i] = factor * in[i];
}

void axpy_avx2(const double* in, std::size_t n, double w, double* out) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_fmadd_pd(vw, _mm256_loadu_pd(in + i), _mm256_loadu_pd(out + i));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = std::fma(w, in[i], out[i]);
}

constexpr Ops kAvx2Ops{"avx2", ramp_profile_avx2, scale_avx2, axpy_avx2};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

const Ops& avx2_ops() { return scalar_ops(); }
bool avx2_supported() { return false; }

#endif

}  // namespace gpdp::kernels
