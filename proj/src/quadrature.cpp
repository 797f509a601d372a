#include "slabeb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "slabeb/errors.hpp"

namespace slabeb {
namespace {

// 15-point Kronrod extension of 7-point Gauss (nodes/weights on [-1,1]).
constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double kWg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double kron = kWgk[7] * f(c);
  double gauss = kWg[3] * f(c);
  for (int j = 0; j < 7; ++j) {
    const double fa = f(c - h * kXgk[j]), fb = f(c + h * kXgk[j]);
    kron += kWgk[j] * (fa + fb);
    if (j % 2 == 1) gauss += kWg[j / 2] * (fa + fb);
  }
  kron *= h;
  gauss *= h;
  const double diff = std::abs(kron - gauss);
  // QUADPACK-style sharpened error estimate.
  double err = diff;
  if (diff > 0.0) err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(kron), 1e-300), 1.5));
  return {a, b, kron, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt) {
  return integrate_panels(f, {a, b}, opt);
}

QuadResult integrate_panels(const std::function<double(double)>& f,
                            std::vector<double> points, const QuadOptions& opt) {
  if (points.size() < 2) throw DomainError("integrate_panels: need at least two breakpoints");
  std::sort(points.begin(), points.end());
  std::priority_queue<Interval> heap;
  double total = 0.0, toterr = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i] == points[i + 1]) continue;
    Interval iv = gk15(f, points[i], points[i + 1]);
    total += iv.value;
    toterr += iv.err;
    heap.push(iv);
    ++count;
  }
  auto good = [&] {
    return toterr <= std::max(opt.rel_tol * std::abs(total), opt.abs_floor);
  };
  while (!good() && count < opt.max_intervals) {
    Interval worst = heap.top();
    heap.pop();
    total -= worst.value;
    toterr -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at machine resolution
      total += worst.value;
      toterr += worst.err;
      break;
    }
    for (Interval iv : {gk15(f, worst.a, mid), gk15(f, mid, worst.b)}) {
      total += iv.value;
      toterr += iv.err;
      heap.push(iv);
    }
    ++count;
  }
  if (!good())
    throw NumericalError("adaptive quadrature: error " + std::to_string(toterr) +
                             " above target after " + std::to_string(count) + " intervals",
                         toterr);
  return {total, toterr, count};
}

}  // namespace slabeb
