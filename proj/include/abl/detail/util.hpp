#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace abl::detail {

// Ordinary least squares y ~ intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need at least two (x, y) samples");
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissa range");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = n;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

// Dyadic scale index l with 2^{-(l+1)} < d <= 2^{-l}.
inline int dyadic_scale(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("dyadic_scale: distance must be positive");
  int l = static_cast<int>(std::floor(-std::log2(d)));
  while (d > std::ldexp(1.0, -l)) --l;
  while (d <= std::ldexp(1.0, -(l + 1))) ++l;
  return l;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  // FNV-1a style mixing over 64-bit words.
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace abl::detail
