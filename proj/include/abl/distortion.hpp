#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "abl/detail/util.hpp"
#include "abl/metric_space.hpp"
#include "abl/slog.hpp"

namespace abl {

struct ModulusBin {
  int bin = 0;          // dyadic index l: input distances in (2^{-(l+1)}, 2^{-l}]
  double d_upper = 0.0; // 2^{-l}
  double min_out = 0.0;
  double max_out = 0.0;
  long pairs = 0;
};

// Per-pair ratio statistics of a map against the almost bi-Lipschitz form
//   (1/L) d / slog(d)^gamma <= out <= L d.
struct DistortionReport {
  double gamma = 0.0;
  double max_ratio_up = 0.0;                                      // sup out/d
  double min_ratio_up = std::numeric_limits<double>::infinity();  // inf out/d
  double min_ratio_down = std::numeric_limits<double>::infinity();  // inf out slog(d)^g / d
  double max_ratio_down = 0.0;
  double l_fit = std::numeric_limits<double>::infinity();
  double c_fit = 0.0;  // fitted lower constant (min_ratio_down)
  double theta_fit = std::numeric_limits<double>::quiet_NaN();
  bool injective = false;
  std::vector<ModulusBin> modulus;  // sorted by increasing distance
  std::uint64_t seed = 0;
  std::string map_digest;

  bool finite_l() const { return std::isfinite(l_fit); }
};

// Compares output distances against input distances pair by pair. `out` and
// `in` must be index-aligned.
inline DistortionReport audit_distortion(const FiniteMetricSpace& out, const FiniteMetricSpace& in,
                                         double gamma) {
  if (out.size() != in.size()) throw std::invalid_argument("audit_distortion: size mismatch");
  DistortionReport rep;
  rep.gamma = gamma;
  rep.injective = true;
  std::map<int, ModulusBin> bins;

  for (int i = 0; i < in.size(); ++i)
    for (int j = i + 1; j < in.size(); ++j) {
      const double d = in(i, j);
      const double o = out(i, j);
      if (!(d > 0.0)) continue;  // duplicate inputs carry no distortion information
      if (!(o > 0.0)) rep.injective = false;
      const double up = o / d;
      const double down = o * std::pow(slog(d), gamma) / d;
      rep.max_ratio_up = std::max(rep.max_ratio_up, up);
      rep.min_ratio_up = std::min(rep.min_ratio_up, up);
      rep.max_ratio_down = std::max(rep.max_ratio_down, down);
      rep.min_ratio_down = std::min(rep.min_ratio_down, down);

      const int l = detail::dyadic_scale(d);
      auto& bin = bins[l];
      if (bin.pairs == 0) {
        bin.bin = l;
        bin.d_upper = std::ldexp(1.0, -l);
        bin.min_out = o;
        bin.max_out = o;
      } else {
        bin.min_out = std::min(bin.min_out, o);
        bin.max_out = std::max(bin.max_out, o);
      }
      ++bin.pairs;
    }

  rep.c_fit = rep.min_ratio_down;
  if (rep.min_ratio_down > 0.0)
    rep.l_fit = std::max(rep.max_ratio_up, 1.0 / rep.min_ratio_down);

  // bins keyed by l descending distance; emit by increasing distance.
  for (auto it = bins.rbegin(); it != bins.rend(); ++it) rep.modulus.push_back(it->second);
  return rep;
}

// Least-squares slope of log(min output per bin) against log(bin distance):
// the Holder exponent surrogate. Requires at least 6 nonempty bins with a
// positive minimum.
inline double holder_exponent_fit(DistortionReport& rep) {
  std::vector<double> xs, ys;
  for (const auto& bin : rep.modulus)
    if (bin.pairs > 0 && bin.min_out > 0.0) {
      xs.push_back(std::log(bin.d_upper));
      ys.push_back(std::log(bin.min_out));
    }
  if (xs.size() < 6)
    throw std::invalid_argument("holder_exponent_fit: need at least 6 nonempty dyadic bins, got " +
                                std::to_string(xs.size()));
  rep.theta_fit = detail::fit_line(xs, ys).slope;
  return rep.theta_fit;
}

}  // namespace abl
