#pragma once

// Globally adaptive Gauss-Legendre quadrature. Each interval carries a
// 15-point estimate over the whole interval and over its two halves; the
// difference is the error estimate and the interval with the largest
// estimate is bisected next. Subdivision order depends only on the
// integrand values, so results are bit-reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "cpeps/common.hpp"

namespace cpeps::quad {

template <int N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
        }
        dp = N * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendreRule<15>& rule15() {
  static const GaussLegendreRule<15> rule;
  return rule;
}

template <typename F>
double gauss_legendre(F& f, double a, double b) {
  const auto& rule = rule15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

template <typename F>
Result integrate(F&& f, double a, double b, double abs_tol, long max_evaluations = 1'000'000) {
  struct Segment {
    double a, b, whole, left, right;
    double error() const { return std::abs(left + right - whole); }
  };
  auto by_error = [](const Segment& x, const Segment& y) { return x.error() < y.error(); };
  std::priority_queue<Segment, std::vector<Segment>, decltype(by_error)> heap(by_error);

  Result out;
  auto refine = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    Segment s{lo, hi, whole, gauss_legendre(f, lo, mid), gauss_legendre(f, mid, hi)};
    out.evaluations += 30;
    return s;
  };

  const double first = gauss_legendre(f, a, b);
  out.evaluations += 15;
  heap.push(refine(a, b, first));
  double err = heap.top().error();
  while (err > abs_tol) {
    if (out.evaluations >= max_evaluations) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tolerance " + std::to_string(abs_tol) + " not reached, estimate " + std::to_string(err));
    }
    const Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    const Segment l = refine(s.a, mid, s.left);
    const Segment r = refine(mid, s.b, s.right);
    err += l.error() + r.error() - s.error();
    heap.push(l);
    heap.push(r);
    if (!std::isfinite(err)) {
      throw Error(ErrorKind::QuadratureFailure, "non-finite integrand");
    }
  }

  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segments) {
    out.value += s.left + s.right;
    out.error_estimate += s.error();
  }
  return out;
}

}  // namespace cpeps::quad
