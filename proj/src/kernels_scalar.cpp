#include <algorithm>
#include <cmath>

#include "tangentia/kernels.hpp"

namespace tangentia::kernels::scalar {

void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out) {
  const std::size_t n = lines.dim;
  const std::size_t m = lines.count;
  for (std::size_t j = 0; j < m; ++j) {
    double v2r = 0.0, v2i = 0.0, p2r = 0.0, p2i = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const double vr = lines.v_re[d * m + j], vi = lines.v_im[d * m + j];
      const double pr = lines.p_re[d * m + j], pi = lines.p_im[d * m + j];
      v2r += vr * vr - vi * vi;
      v2i += 2.0 * vr * vi;
      p2r += pr * pr - pi * pi;
      p2i += 2.0 * pr * pi;
    }
    double worst = 0.0;
    for (const Sphere& s : arr.spheres()) {
      double pcr = 0.0, pci = 0.0, vcr = 0.0, vci = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double c = s.center(static_cast<Eigen::Index>(d));
        pcr += lines.p_re[d * m + j] * c;
        pci += lines.p_im[d * m + j] * c;
        vcr += lines.v_re[d * m + j] * c;
        vci += lines.v_im[d * m + j] * c;
      }
      const double k = s.center.squaredNorm() - s.radius * s.radius;
      // v^2 (p^2 - 2 p.c + c^2 - r^2) - (v.c)^2
      const double ar = p2r - 2.0 * pcr + k;
      const double ai = p2i - 2.0 * pci;
      const double rr = v2r * ar - v2i * ai - (vcr * vcr - vci * vci);
      const double ri = v2r * ai + v2i * ar - 2.0 * vcr * vci;
      worst = std::max(worst, std::hypot(rr, ri));
    }
    out[j] = worst;
  }
}

void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im) {
  const std::size_t nv = sys.nvars;
  const std::size_t m = pts.count;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      double sr = 0.0, si = 0.0;
      for (std::size_t t = sys.poly_offsets[k]; t < sys.poly_offsets[k + 1]; ++t) {
        double tr = sys.coeff_re[t], ti = sys.coeff_im[t];
        const std::uint8_t* e = sys.exponents.data() + t * nv;
        for (std::size_t i = 0; i < nv; ++i) {
          const double xr = pts.re[i * m + j], xi = pts.im[i * m + j];
          for (std::uint8_t q = 0; q < e[i]; ++q) {
            const double nr = tr * xr - ti * xi;
            ti = tr * xi + ti * xr;
            tr = nr;
          }
        }
        sr += tr;
        si += ti;
      }
      out_re[k * m + j] = sr;
      out_im[k * m + j] = si;
    }
  }
}

}  // namespace tangentia::kernels::scalar
