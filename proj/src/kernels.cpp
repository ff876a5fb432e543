#include "tangentia/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

#include "tangentia/errors.hpp"

namespace tangentia::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("TANGENTIA_KERNEL");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Backend::scalar;
    return avx2_available() ? Backend::avx2 : Backend::scalar;
  }();
  return chosen;
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

LineBatch LineBatch::from_lines(const std::vector<Line>& lines) {
  LineBatch b;
  b.count = lines.size();
  b.dim = lines.empty() ? 0 : static_cast<std::size_t>(lines.front().v.size());
  const std::size_t total = b.dim * b.count;
  b.p_re.resize(total);
  b.p_im.resize(total);
  b.v_re.resize(total);
  b.v_im.resize(total);
  for (std::size_t j = 0; j < b.count; ++j) {
    const Line& l = lines[j];
    if (static_cast<std::size_t>(l.v.size()) != b.dim || static_cast<std::size_t>(l.p.size()) != b.dim) {
      throw DimensionMismatch("LineBatch: lines of mixed dimension");
    }
    for (std::size_t d = 0; d < b.dim; ++d) {
      const auto e = static_cast<Eigen::Index>(d);
      b.p_re[d * b.count + j] = l.p(e).real();
      b.p_im[d * b.count + j] = l.p(e).imag();
      b.v_re[d * b.count + j] = l.v(e).real();
      b.v_im[d * b.count + j] = l.v(e).imag();
    }
  }
  return b;
}

PackedSystem PackedSystem::from(const PolySystem& s) {
  PackedSystem out;
  out.nvars = s.nvars();
  out.poly_offsets.push_back(0);
  for (const auto& p : s.polys()) {
    for (const auto& [m, c] : p.terms()) {
      out.coeff_re.push_back(c.real());
      out.coeff_im.push_back(c.imag());
      for (std::size_t i = 0; i < out.nvars; ++i) {
        if (m[i] > std::numeric_limits<std::uint8_t>::max()) {
          throw InvalidArgument("PackedSystem: exponent too large");
        }
        out.exponents.push_back(static_cast<std::uint8_t>(m[i]));
      }
    }
    out.poly_offsets.push_back(out.coeff_re.size());
  }
  return out;
}

PointBatch PointBatch::from_points(const std::vector<CVector>& points) {
  PointBatch b;
  b.count = points.size();
  b.nvars = points.empty() ? 0 : static_cast<std::size_t>(points.front().size());
  b.re.resize(b.nvars * b.count);
  b.im.resize(b.nvars * b.count);
  for (std::size_t j = 0; j < b.count; ++j) {
    if (static_cast<std::size_t>(points[j].size()) != b.nvars) {
      throw DimensionMismatch("PointBatch: points of mixed dimension");
    }
    for (std::size_t i = 0; i < b.nvars; ++i) {
      b.re[i * b.count + j] = points[j](static_cast<Eigen::Index>(i)).real();
      b.im[i * b.count + j] = points[j](static_cast<Eigen::Index>(i)).imag();
    }
  }
  return b;
}

void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out, Backend backend) {
  if (lines.count > 0 && lines.dim != static_cast<std::size_t>(arr.dimension())) {
    throw DimensionMismatch("max_tangency_residuals: dimension mismatch");
  }
  if (out.size() < lines.count) throw DimensionMismatch("max_tangency_residuals: output too small");
  if (backend == Backend::avx2 && avx2_available()) {
    avx2::max_tangency_residuals(arr, lines, out);
  } else {
    scalar::max_tangency_residuals(arr, lines, out);
  }
}

void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im, Backend backend) {
  if (pts.count > 0 && pts.nvars != sys.nvars) throw DimensionMismatch("evaluate_batch: nvars mismatch");
  const std::size_t need = sys.size() * pts.count;
  if (out_re.size() < need || out_im.size() < need) {
    throw DimensionMismatch("evaluate_batch: output too small");
  }
  if (backend == Backend::avx2 && avx2_available()) {
    avx2::evaluate_batch(sys, pts, out_re, out_im);
  } else {
    scalar::evaluate_batch(sys, pts, out_re, out_im);
  }
}

}  // namespace tangentia::kernels
