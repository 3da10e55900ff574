#include "loch/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace loch::kernels {

namespace scalar {

void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im) {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double zr = re[i], zi = im[i];
    const double r = ar * zr + ai * zi;
    const double m = ai * zr - ar * zi;
    out_re[i] = r + br;
    out_im[i] = m + bi;
  }
}

void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& s, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.count; ++j) {
      const double rx = px[i] - s.ax[j];
      const double ry = py[i] - s.ay[j];
      double t = (rx * s.dx[j] + ry * s.dy[j]) * s.inv_len2[j];
      t = std::min(std::max(t, 0.0), 1.0);
      const double ex = rx - t * s.dx[j];
      const double ey = ry - t * s.dy[j];
      best = std::min(best, ex * ex + ey * ey);
    }
    out[i] = best;
  }
}

}  // namespace scalar

#ifndef LOCH_HAVE_AVX2
namespace avx2 {
bool compiled() { return false; }
void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im) {
  scalar::conj_affine(re, im, n, a, b, out_re, out_im);
}
void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& segs, double* out) {
  scalar::min_dist2(px, py, n, segs, out);
}
}  // namespace avx2
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("LOCH_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return avx2::compiled() && cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im) {
  if (active_isa() == Isa::avx2)
    avx2::conj_affine(re, im, n, a, b, out_re, out_im);
  else
    scalar::conj_affine(re, im, n, a, b, out_re, out_im);
}

void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& segs, double* out) {
  if (active_isa() == Isa::avx2)
    avx2::min_dist2(px, py, n, segs, out);
  else
    scalar::min_dist2(px, py, n, segs, out);
}

}  // namespace loch::kernels
