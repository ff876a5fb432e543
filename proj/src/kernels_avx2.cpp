#include "tangentia/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define TANGENTIA_AVX2 __attribute__((target("avx2,fma")))

namespace tangentia::kernels::avx2 {

namespace {

TANGENTIA_AVX2 inline __m256i tail_mask(std::size_t remaining) {
  const long long on = -1;
  return _mm256_setr_epi64x(remaining > 0 ? on : 0, remaining > 1 ? on : 0,
                            remaining > 2 ? on : 0, remaining > 3 ? on : 0);
}

TANGENTIA_AVX2 inline __m256d load(const double* p, __m256i mask) {
  return _mm256_maskload_pd(p, mask);
}

}  // namespace

TANGENTIA_AVX2 void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                                           std::span<double> out) {
  const std::size_t n = lines.dim;
  const std::size_t m = lines.count;
  const __m256d two = _mm256_set1_pd(2.0);
  for (std::size_t j = 0; j < m; j += 4) {
    const __m256i mask = tail_mask(m - j);
    __m256d v2r = _mm256_setzero_pd(), v2i = _mm256_setzero_pd();
    __m256d p2r = _mm256_setzero_pd(), p2i = _mm256_setzero_pd();
    for (std::size_t d = 0; d < n; ++d) {
      const __m256d vr = load(&lines.v_re[d * m + j], mask);
      const __m256d vi = load(&lines.v_im[d * m + j], mask);
      const __m256d pr = load(&lines.p_re[d * m + j], mask);
      const __m256d pi = load(&lines.p_im[d * m + j], mask);
      v2r = _mm256_add_pd(v2r, _mm256_fmsub_pd(vr, vr, _mm256_mul_pd(vi, vi)));
      v2i = _mm256_fmadd_pd(_mm256_mul_pd(two, vr), vi, v2i);
      p2r = _mm256_add_pd(p2r, _mm256_fmsub_pd(pr, pr, _mm256_mul_pd(pi, pi)));
      p2i = _mm256_fmadd_pd(_mm256_mul_pd(two, pr), pi, p2i);
    }
    __m256d worst = _mm256_setzero_pd();
    for (const Sphere& s : arr.spheres()) {
      __m256d pcr = _mm256_setzero_pd(), pci = _mm256_setzero_pd();
      __m256d vcr = _mm256_setzero_pd(), vci = _mm256_setzero_pd();
      for (std::size_t d = 0; d < n; ++d) {
        const __m256d c = _mm256_set1_pd(s.center(static_cast<Eigen::Index>(d)));
        pcr = _mm256_fmadd_pd(load(&lines.p_re[d * m + j], mask), c, pcr);
        pci = _mm256_fmadd_pd(load(&lines.p_im[d * m + j], mask), c, pci);
        vcr = _mm256_fmadd_pd(load(&lines.v_re[d * m + j], mask), c, vcr);
        vci = _mm256_fmadd_pd(load(&lines.v_im[d * m + j], mask), c, vci);
      }
      const __m256d k = _mm256_set1_pd(s.center.squaredNorm() - s.radius * s.radius);
      const __m256d ar = _mm256_add_pd(_mm256_fnmadd_pd(two, pcr, p2r), k);
      const __m256d ai = _mm256_fnmadd_pd(two, pci, p2i);
      const __m256d vc2r = _mm256_fmsub_pd(vcr, vcr, _mm256_mul_pd(vci, vci));
      const __m256d vc2i = _mm256_mul_pd(_mm256_mul_pd(two, vcr), vci);
      const __m256d rr = _mm256_sub_pd(_mm256_fmsub_pd(v2r, ar, _mm256_mul_pd(v2i, ai)), vc2r);
      const __m256d ri = _mm256_sub_pd(_mm256_fmadd_pd(v2r, ai, _mm256_mul_pd(v2i, ar)), vc2i);
      const __m256d mag = _mm256_sqrt_pd(_mm256_fmadd_pd(rr, rr, _mm256_mul_pd(ri, ri)));
      worst = _mm256_max_pd(worst, mag);
    }
    _mm256_maskstore_pd(&out[j], mask, worst);
  }
}

TANGENTIA_AVX2 void evaluate_batch(const PackedSystem& sys, const PointBatch& pts,
                                   std::span<double> out_re, std::span<double> out_im) {
  const std::size_t nv = sys.nvars;
  const std::size_t m = pts.count;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    for (std::size_t j = 0; j < m; j += 4) {
      const __m256i mask = tail_mask(m - j);
      __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
      for (std::size_t t = sys.poly_offsets[k]; t < sys.poly_offsets[k + 1]; ++t) {
        __m256d tr = _mm256_set1_pd(sys.coeff_re[t]);
        __m256d ti = _mm256_set1_pd(sys.coeff_im[t]);
        const std::uint8_t* e = sys.exponents.data() + t * nv;
        for (std::size_t i = 0; i < nv; ++i) {
          if (e[i] == 0) continue;
          const __m256d xr = load(&pts.re[i * m + j], mask);
          const __m256d xi = load(&pts.im[i * m + j], mask);
          for (std::uint8_t q = 0; q < e[i]; ++q) {
            const __m256d nr = _mm256_fmsub_pd(tr, xr, _mm256_mul_pd(ti, xi));
            ti = _mm256_fmadd_pd(tr, xi, _mm256_mul_pd(ti, xr));
            tr = nr;
          }
        }
        sr = _mm256_add_pd(sr, tr);
        si = _mm256_add_pd(si, ti);
      }
      _mm256_maskstore_pd(&out_re[k * m + j], mask, sr);
      _mm256_maskstore_pd(&out_im[k * m + j], mask, si);
    }
  }
}

}  // namespace tangentia::kernels::avx2

#else

// Non-x86 targets only have the reference path; dispatch never selects
// these, but they keep the symbols defined.
namespace tangentia::kernels::avx2 {

void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out) {
  scalar::max_tangency_residuals(arr, lines, out);
}

void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im) {
  scalar::evaluate_batch(sys, pts, out_re, out_im);
}

}  // namespace tangentia::kernels::avx2

#endif
