#include "kappa/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace kappa {

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& options) {
  const std::size_t dim = x0.size();
  SimplexResult out;
  if (dim == 0) {
    out.value = f(x0);
    out.evaluations = 1;
    out.x = std::move(x0);
    return out;
  }

  const double nd = static_cast<double>(dim);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 1.0 / (2.0 * nd);
  const double shrink = 1.0 - 1.0 / nd;

  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> vals(dim + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };
  for (std::size_t k = 0; k < dim; ++k) pts[k + 1][k] += options.initial_step;
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(dim + 1);
    std::vector<double> v2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      p2[i] = std::move(pts[order[i]]);
      v2[i] = vals[order[i]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };
  auto along = [&](double t, std::vector<double>& dst) {
    for (std::size_t k = 0; k < dim; ++k) dst[k] = centroid[k] + t * (pts[dim][k] - centroid[k]);
  };

  sort_simplex();
  for (int it = 0; it < options.max_iterations; ++it) {
    if (vals[0] < options.target) break;
    double fspread = 0.0;
    double xspread = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      fspread = std::max(fspread, std::abs(vals[i] - vals[0]));
      for (std::size_t k = 0; k < dim; ++k) xspread = std::max(xspread, std::abs(pts[i][k] - pts[0][k]));
    }
    if (fspread <= options.f_tolerance && xspread <= options.x_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k];
    }
    for (auto& c : centroid) c /= nd;

    along(-reflect, xr);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      along(-reflect * expand, xe);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[dim] = xe;
        vals[dim] = fe;
      } else {
        pts[dim] = xr;
        vals[dim] = fr;
      }
    } else if (fr < vals[dim - 1]) {
      pts[dim] = xr;
      vals[dim] = fr;
    } else {
      const bool outside = fr < vals[dim];
      along(outside ? -reflect * contract : contract, xc);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[dim])) {
        pts[dim] = xc;
        vals[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[0][k] + shrink * (pts[i][k] - pts[0][k]);
          vals[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();
  }

  out.x = std::move(pts[0]);
  out.value = vals[0];
  out.evaluations = evals;
  return out;
}

SimplexResult nelder_mead_restarted(const Objective& f, std::vector<double> x0,
                                    const SimplexOptions& options, int max_rounds) {
  SimplexResult best = nelder_mead(f, std::move(x0), options);
  SimplexOptions again = options;
  for (int round = 1; round < max_rounds; ++round) {
    if (best.value < options.target) break;
    again.initial_step = std::max(options.initial_step * std::pow(0.5, round), 1e-3);
    SimplexResult next = nelder_mead(f, best.x, again);
    next.evaluations += best.evaluations;
    const double gain = best.value - next.value;
    if (next.value < best.value) best = std::move(next);
    else best.evaluations = next.evaluations;
    if (gain <= options.f_tolerance) break;
  }
  return best;
}

SimplexResult golden_section_polish(const Objective& f, SimplexResult start, double radius,
                                    int sweeps) {
  constexpr double kInvPhi = 0.6180339887498949;
  SimplexResult cur = std::move(start);
  std::vector<double> probe = cur.x;
  auto at = [&](std::size_t k, double t) {
    probe[k] = t;
    ++cur.evaluations;
    return f(probe);
  };

  for (int s = 0; s < sweeps; ++s) {
    const double before = cur.value;
    for (std::size_t k = 0; k < cur.x.size(); ++k) {
      probe = cur.x;
      double lo = cur.x[k] - radius;
      double hi = cur.x[k] + radius;
      double a = hi - kInvPhi * (hi - lo);
      double b = lo + kInvPhi * (hi - lo);
      double fa = at(k, a);
      double fb = at(k, b);
      while (hi - lo > 1e-12 * (1.0 + std::abs(cur.x[k]))) {
        if (fa < fb) {
          hi = b;
          b = a;
          fb = fa;
          a = hi - kInvPhi * (hi - lo);
          fa = at(k, a);
        } else {
          lo = a;
          a = b;
          fa = fb;
          b = lo + kInvPhi * (hi - lo);
          fb = at(k, b);
        }
      }
      const double t = fa < fb ? a : b;
      const double ft = std::min(fa, fb);
      if (ft < cur.value) {
        cur.x[k] = t;
        cur.value = ft;
      }
    }
    if (before - cur.value <= 1e-15) break;
  }
  return cur;
}

}  // namespace kappa
