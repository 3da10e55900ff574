#pragma once

#include <cstddef>

#include "loch/common.hpp"

// Batch geometry kernels over structure-of-arrays data. Every entry point has a
// scalar reference and, on x86-64, an AVX2 variant chosen once at runtime.
// Both variants perform the same floating-point operations in the same order
// (no contraction), so their outputs are bitwise equal.
namespace loch::kernels {

enum class Isa { scalar, avx2 };

struct SegmentSoA {
  const double* ax;
  const double* ay;
  const double* dx;  // end - start
  const double* dy;
  const double* inv_len2;  // 1 / |end - start|^2
  std::size_t count;
};

using ConjAffineFn = void (*)(const double* re, const double* im, std::size_t n, Complex a, Complex b,
                              double* out_re, double* out_im);
using MinDist2Fn = void (*)(const double* px, const double* py, std::size_t n, const SegmentSoA& segs,
                            double* out);

namespace scalar {
void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im);
void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& segs, double* out);
}  // namespace scalar

namespace avx2 {
bool compiled();
void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im);
void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& segs, double* out);
}  // namespace avx2

bool cpu_has_avx2();
// AVX2 when compiled in and supported, unless LOCH_SIMD=scalar is set.
Isa active_isa();
const char* isa_name(Isa isa);

// out = a * conj(z) + b
void conj_affine(const double* re, const double* im, std::size_t n, Complex a, Complex b, double* out_re,
                 double* out_im);
// out[i] = min over segments of the squared distance from point i to the segment
void min_dist2(const double* px, const double* py, std::size_t n, const SegmentSoA& segs, double* out);

}  // namespace loch::kernels
