#include "msgate/extract.hpp"

#include <algorithm>
#include <cmath>

namespace msgate {

double extract_oscillation_frequency(const std::vector<double>& times,
                                     const std::vector<double>& rho_gggg) {
  if (times.size() != rho_gggg.size())
    throw InvalidParams("extract_oscillation_frequency: size mismatch");
  const std::size_t n = times.size();
  if (n < 5) throw NoOscillation("extract_oscillation_frequency: too few samples");

  const double lo = *std::min_element(rho_gggg.begin(), rho_gggg.end());
  const double hi = *std::max_element(rho_gggg.begin(), rho_gggg.end());
  if (hi - lo < 0.1)
    throw NoOscillation("extract_oscillation_frequency: dynamic range below 0.1");

  // The fast off-resonant ripple can push isolated samples below any fixed
  // threshold well before the true valley, so valley detection runs on a
  // moving average wide enough to span several ripple periods yet still
  // narrow against the slow oscillation (1.5% of the sampled span).
  const double spacing = (times.back() - times.front()) / static_cast<double>(n - 1);
  const std::ptrdiff_t half_width = std::clamp<std::ptrdiff_t>(
      static_cast<std::ptrdiff_t>(std::lround(0.015 * (times.back() - times.front()) / spacing)),
      1, static_cast<std::ptrdiff_t>(n - 1) / 4);
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i > static_cast<std::size_t>(half_width) ? i - half_width : 0;
    const std::size_t b = std::min(n - 1, i + half_width);
    double acc = 0;
    for (std::size_t k = a; k <= b; ++k) acc += rho_gggg[k];
    smooth[i] = acc / static_cast<double>(b - a + 1);
  }

  // First contiguous run of the smoothed series below threshold = the first
  // deep valley; its argmin seeds the refinement on the raw data.
  const double lo_s = *std::min_element(smooth.begin(), smooth.end());
  const double hi_s = *std::max_element(smooth.begin(), smooth.end());
  const double threshold = lo_s + 0.25 * (hi_s - lo_s);
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (smooth[i] < threshold) {
      start = i;
      break;
    }
  }
  if (start == n)
    throw NoOscillation("extract_oscillation_frequency: no sample below threshold");
  std::size_t stop = start;
  while (stop + 1 < n && smooth[stop + 1] < threshold) ++stop;
  std::size_t idx = start;
  for (std::size_t i = start; i <= stop; ++i)
    if (smooth[i] < smooth[idx]) idx = i;

  // Quadratic fit of the valley over a window of 4% of the minimum time
  // (several ripple periods wide, still narrow against the slow period).
  const double t_ref = times[idx];
  const double window = std::max(0.04 * t_ref, 3.0 * spacing);
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = times[i] - t_ref;
    if (std::abs(x) > window) continue;
    const double y = rho_gggg[i];
    const double x2 = x * x;
    s0 += 1;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
    b0 += y;
    b1 += x * y;
    b2 += x2 * y;
  }
  Eigen::Matrix3d m;
  m << s0, s1, s2, s1, s2, s3, s2, s3, s4;
  Eigen::Vector3d rhs(b0, b1, b2);
  const Eigen::Vector3d c = m.fullPivLu().solve(rhs);
  // The refined minimum must stay inside the fit window; otherwise the fit
  // was degenerate and the discrete argmin is the better estimate.
  double t_min = t_ref;
  if (c(2) > 0 && std::abs(c(1) / (2.0 * c(2))) <= window) t_min = t_ref - c(1) / (2.0 * c(2));
  if (t_min <= 0) throw NoOscillation("extract_oscillation_frequency: refined minimum at t <= 0");
  return std::acos(-1.0) / t_min;
}

}  // namespace msgate
