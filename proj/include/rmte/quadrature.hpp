#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmte {

// 7-15 Gauss-Kronrod panel: returns the K15 estimate, writes |K15-G7|
// into err.
template <class Func>
double gk15_panel(const Func& f, double a, double b, double& err) {
  // node, G7 weight, K15 weight (node 0, then +/- pairs)
  static const double nw[8][3] = {
      {0.000000000000000, 0.417959183673469, 0.209482141084728},
      {0.405845151377397, 0.381830050505119, 0.190350578064785},
      {0.741531185599394, 0.279705391489277, 0.140653259715525},
      {0.949107912342759, 0.129484966168870, 0.063092092629979},
      {0.207784955007898, 0.0, 0.204432940075298},
      {0.586087235467691, 0.0, 0.169004726639267},
      {0.864864423359769, 0.0, 0.104790010322250},
      {0.991455371120813, 0.0, 0.022935322010529}};

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double y0 = f(mid);
  double g7 = nw[0][1] * y0;
  double k15 = nw[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * nw[i][0];
    const double yi = f(mid + dx) + f(mid - dx);
    g7 += nw[i][1] * yi;
    k15 += nw[i][2] * yi;
  }
  g7 *= half;
  k15 *= half;
  err = std::abs(k15 - g7);
  return k15;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Globally adaptive bisection on [a, b]. Throws if the interval budget is
// exhausted before reaching the tolerance.
template <class Func>
QuadResult integrate(const Func& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-10, int max_intervals = 4000) {
  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> segs;
  segs.reserve(64);
  double err0;
  const double v0 = gk15_panel(f, a, b, err0);
  segs.push_back({a, b, v0, err0});

  for (int iter = 0; iter < max_intervals; ++iter) {
    double total = 0.0, total_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      total_err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (total_err <= abs_tol || total_err <= rel_tol * std::abs(total))
      return {total, total_err};

    const Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    double e1, e2;
    const double v1 = gk15_panel(f, s.a, mid, e1);
    const double v2 = gk15_panel(f, mid, s.b, e2);
    segs[worst] = {s.a, mid, v1, e1};
    segs.push_back({mid, s.b, v2, e2});
  }

  double total_err = 0.0;
  for (const auto& s : segs) total_err += s.error;
  throw std::runtime_error("integrate: quadrature did not converge, achieved error " +
                           std::to_string(total_err));
}

// Integral over [a, inf) through the map x = a + u/(1-u) * scale.
template <class Func>
QuadResult integrate_semi_infinite(const Func& f, double a, double scale = 1.0,
                                   double abs_tol = 1e-10, double rel_tol = 1e-10,
                                   int max_intervals = 4000) {
  auto g = [&](double u) {
    const double one_minus = 1.0 - u;
    const double x = a + scale * u / one_minus;
    const double jac = scale / (one_minus * one_minus);
    return f(x) * jac;
  };
  return integrate(g, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

}  // namespace rmte
