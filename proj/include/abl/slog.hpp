#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace abl {

// Symmetric logarithm log(x + 1/x). Minimum log 2 at x = 1, invariant under
// x -> 1/x.
inline double slog(double x) {
  if (!(x > 0.0)) throw std::domain_error("slog: argument must be positive");
  return std::log(x + 1.0 / x);
}

// The (p4) constant sigma = 1/(4 log 2).
inline double slog_sigma() { return 1.0 / (4.0 * std::log(2.0)); }

enum class SlogProperty { p1, p2, p3, p4 };

struct SlogAuditReport {
  SlogProperty property;
  // Empirical inf/sup of the property's quotient (p2, p3, p4) or of the
  // sandwich margins (p1) over the sample grid.
  double lower = 0.0;
  double upper = 0.0;
  double worst_margin = 0.0;  // most violated (most negative) slack seen
  bool pass = false;
  int points = 0;
};

struct SlogAuditParams {
  double L = 1.0;      // p2 scale factor
  double gamma = 0.0;  // p3 exponent
};

// Empirical bounds for the scale/composition properties of slog; these
// constants have no closed forms.
struct SlogConstants {
  double gamma = 0.0;
  double sigma = 1.0 / (4.0 * std::log(2.0));

  struct Bounds {
    double lower;
    double upper;
  };

  // A_L, B_L with A_L slog(x) <= slog(Lx) <= B_L slog(x) over the grid.
  static Bounds scaling_bounds(double L, const std::vector<double>& grid) {
    if (!(L > 0.0)) throw std::invalid_argument("scaling_bounds: L must be positive");
    if (grid.empty()) throw std::invalid_argument("scaling_bounds: empty grid");
    Bounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (double x : grid) {
      const double q = slog(L * x) / slog(x);
      b.lower = std::min(b.lower, q);
      b.upper = std::max(b.upper, q);
    }
    return b;
  }

  // a_gamma, b_gamma with a slog(x) <= slog(x slog(x)^gamma) <= b slog(x).
  static Bounds gamma_bounds(double gamma, const std::vector<double>& grid) {
    if (gamma < 0.0) throw std::invalid_argument("gamma_bounds: gamma must be >= 0");
    if (grid.empty()) throw std::invalid_argument("gamma_bounds: empty grid");
    Bounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (double x : grid) {
      const double q = slog(x * std::pow(slog(x), gamma)) / slog(x);
      b.lower = std::min(b.lower, q);
      b.upper = std::max(b.upper, q);
    }
    return b;
  }
};

inline SlogAuditReport slog_property_audit(SlogProperty property, const SlogAuditParams& params,
                                           const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("slog_property_audit: empty sample grid");
  constexpr double kTol = 1e-12;
  const double log2 = std::log(2.0);
  SlogAuditReport rep;
  rep.property = property;
  rep.points = static_cast<int>(grid.size());
  rep.lower = std::numeric_limits<double>::infinity();
  rep.upper = -std::numeric_limits<double>::infinity();
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;

  for (double x : grid) {
    const double s = slog(x);
    double quotient = 0.0;
    double margin = 0.0;
    switch (property) {
      case SlogProperty::p1: {
        const double lo_margin = s - std::abs(std::log(x));
        const double hi_margin = log2 + std::abs(std::log(x)) - s;
        quotient = lo_margin;  // sandwich slack, in [0, log 2]
        margin = std::min(lo_margin, hi_margin);
        rep.lower = std::min(rep.lower, lo_margin);
        rep.upper = std::max(rep.upper, hi_margin);
        break;
      }
      case SlogProperty::p2: {
        quotient = slog(params.L * x) / s;
        margin = quotient;  // must be finite and positive
        rep.lower = std::min(rep.lower, quotient);
        rep.upper = std::max(rep.upper, quotient);
        break;
      }
      case SlogProperty::p3: {
        quotient = slog(x * std::pow(s, params.gamma)) / s;
        margin = quotient;
        rep.lower = std::min(rep.lower, quotient);
        rep.upper = std::max(rep.upper, quotient);
        break;
      }
      case SlogProperty::p4: {
        // k with 2^{-(k+1)} <= x <= 2^{-k}; the bound must hold for it.
        int k = static_cast<int>(std::floor(-std::log2(x)));
        while (x > std::ldexp(1.0, -k)) --k;
        while (x < std::ldexp(1.0, -(k + 1))) ++k;
        quotient = s / slog(std::ldexp(1.0, -k));
        margin = quotient - slog_sigma();
        rep.lower = std::min(rep.lower, quotient);
        rep.upper = std::max(rep.upper, quotient);
        break;
      }
    }
    if (!std::isfinite(quotient)) ok = false;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -kTol * std::max(1.0, s)) ok = false;
    if (property == SlogProperty::p2 || property == SlogProperty::p3) {
      if (!(quotient > 0.0)) ok = false;
    }
  }
  rep.pass = ok;
  return rep;
}

// Log-spaced grid with `count` points covering [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  return g;
}

}  // namespace abl
