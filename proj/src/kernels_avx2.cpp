#include <immintrin.h>

#include <limits>

#include "loch/kernels.hpp"

namespace loch::kernels::avx2 {

bool compiled() { return true; }

void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im) {
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(re + i);
    const __m256d zi = _mm256_loadu_pd(im + i);
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(ar, zr), _mm256_mul_pd(ai, zi));
    const __m256d m = _mm256_sub_pd(_mm256_mul_pd(ai, zr), _mm256_mul_pd(ar, zi));
    _mm256_storeu_pd(out_re + i, _mm256_add_pd(r, br));
    _mm256_storeu_pd(out_im + i, _mm256_add_pd(m, bi));
  }
  if (i < n) scalar::conj_affine(re + i, im + i, n - i, a, b, out_re + i, out_im + i);
}

void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& s, double* out) {
  const __m256d zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
  const std::size_t full = s.count / 4 * 4;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d x = _mm256_set1_pd(px[i]), y = _mm256_set1_pd(py[i]);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < full; j += 4) {
      const __m256d dx = _mm256_loadu_pd(s.dx + j), dy = _mm256_loadu_pd(s.dy + j);
      const __m256d rx = _mm256_sub_pd(x, _mm256_loadu_pd(s.ax + j));
      const __m256d ry = _mm256_sub_pd(y, _mm256_loadu_pd(s.ay + j));
      __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(rx, dx), _mm256_mul_pd(ry, dy)),
                                _mm256_loadu_pd(s.inv_len2 + j));
      t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
      const __m256d ex = _mm256_sub_pd(rx, _mm256_mul_pd(t, dx));
      const __m256d ey = _mm256_sub_pd(ry, _mm256_mul_pd(t, dy));
      best = _mm256_min_pd(best, _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    if (full < s.count) {
      SegmentSoA tail{s.ax + full, s.ay + full, s.dx + full, s.dy + full, s.inv_len2 + full, s.count - full};
      double rest;
      scalar::min_dist2(px + i, py + i, 1, tail, &rest);
      m = std::min(m, rest);
    }
    out[i] = m;
  }
}

}  // namespace loch::kernels::avx2
