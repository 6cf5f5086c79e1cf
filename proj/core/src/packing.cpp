#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "kappa/constructions.hpp"
#include "kappa/errors.hpp"
#include "kappa/parallel.hpp"

namespace kappa {

namespace {

using Lines = std::vector<Vector>;

constexpr double kSmoothing[] = {10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0};

struct Smoothed {
  double value = 0.0;
  double true_max = 0.0;
};

// Log-sum-exp of the pairwise squared overlaps at inverse temperature beta,
// with the gradient (projected onto each line's tangent space) written to grad.
Smoothed smoothed_max(const Lines& lines, double beta, Lines* grad) {
  const std::size_t n = lines.size();
  std::vector<Complex> gram(n * n);
  double fmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex g = lines[i].dot(lines[j]);
      gram[i * n + j] = g;
      fmax = std::max(fmax, std::norm(g));
    }
  }
  double z = 0.0;
  std::vector<double> weight(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = std::exp(beta * (std::norm(gram[i * n + j]) - fmax));
      weight[i * n + j] = w;
      z += w;
    }
  }
  if (grad != nullptr) {
    grad->assign(n, Vector::Zero(lines.front().size()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = weight[i * n + j] / z;
        const Complex g = gram[i * n + j];  // <a_i|a_j>
        // d|g|^2 / d conj(a_i) = a_j conj(g), and symmetrically for a_j
        (*grad)[i] += (2.0 * w * std::conj(g)) * lines[j];
        (*grad)[j] += (2.0 * w * g) * lines[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      (*grad)[i] -= lines[i] * lines[i].dot((*grad)[i]);
    }
  }
  return {fmax + std::log(z) / beta, fmax};
}

Lines random_lines(int dim, int n, bool real_only, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Lines lines;
  lines.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vector v(dim);
    for (int k = 0; k < dim; ++k) {
      const double re = normal(rng);
      const double im = real_only ? 0.0 : normal(rng);
      v(k) = Complex(re, im);
    }
    v.normalize();
    lines.push_back(std::move(v));
  }
  return lines;
}

struct RestartOutcome {
  Lines lines;
  double max_overlap = std::numeric_limits<double>::infinity();
};

RestartOutcome descend(Lines lines, int max_iterations) {
  RestartOutcome best{lines, max_pairwise_overlap_sq(lines)};
  Lines grad;
  Lines trial(lines.size());
  for (const double beta : kSmoothing) {
    double step = 0.1;
    Smoothed cur = smoothed_max(lines, beta, &grad);
    for (int it = 0; it < max_iterations; ++it) {
      double grad_sq = 0.0;
      for (const auto& g : grad) grad_sq += g.squaredNorm();
      if (grad_sq < 1e-24) break;

      step *= 2.0;
      bool accepted = false;
      Smoothed next;
      while (step > 1e-14) {
        for (std::size_t i = 0; i < lines.size(); ++i) {
          trial[i] = (lines[i] - step * grad[i]).normalized();
        }
        next = smoothed_max(trial, beta, nullptr);
        if (next.value <= cur.value - 1e-4 * step * grad_sq) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      lines.swap(trial);
      cur = smoothed_max(lines, beta, &grad);
      if (cur.true_max < best.max_overlap) {
        best.max_overlap = cur.true_max;
        best.lines = lines;
      }
    }
  }
  return best;
}

}  // namespace

double max_pairwise_overlap_sq(std::span<const Vector> lines) {
  double m = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      m = std::max(m, std::norm(lines[i].dot(lines[j])));
    }
  }
  return std::min(m, 1.0);
}

double packing_target(int dim, int n) {
  if (dim < 2 || n < 2) throw InvalidInput("packing needs dim >= 2 and n >= 2");
  return 1.0 - std::pow(static_cast<double>(n), -1.0 / (dim - 1));
}

PackingResult grassmannian_packing(int dim, int n, std::uint64_t seed,
                                   const PackingOptions& options) {
  if (dim > kMaxDimension) throw InvalidInput("packing dimension exceeds 64");
  if (options.restarts < 1) throw InvalidInput("packing needs at least one restart");
  PackingResult result;
  result.target_overlap_sq = packing_target(dim, n);

  if (n <= dim) {
    for (int j = 0; j < n; ++j) result.lines.push_back(Vector::Unit(dim, j));
    result.achieved_max_overlap_sq = 0.0;
    result.met_target = true;
    return result;
  }

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(options.restarts));
  parallel_for(
      outcomes.size(),
      [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r), 0x9acc1u};
        std::mt19937_64 rng(seq);
        outcomes[r] = descend(random_lines(dim, n, options.real_only, rng), options.max_iterations);
      },
      options.threads);

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].max_overlap < outcomes[best].max_overlap) best = r;
  }
  result.lines = std::move(outcomes[best].lines);
  for (auto& v : result.lines) v.normalize();
  result.achieved_max_overlap_sq = max_pairwise_overlap_sq(result.lines);
  result.met_target = result.achieved_max_overlap_sq <= result.target_overlap_sq;
  return result;
}

PackingStates packing_states(int d, int n, std::uint64_t seed, const PackingOptions& options) {
  if (d < 3) throw InvalidInput("packing family needs d >= 3");
  if (n < 2) throw InvalidInput("packing family needs n >= 2");
  const double chi = packing_overlap_sq(d, n);
  PackingResult packing = grassmannian_packing(d - 1, n, seed, options);

  const double head = std::sqrt(chi);
  const double tail = std::sqrt(1.0 - chi);
  std::vector<PureState> satellites;
  satellites.reserve(static_cast<std::size_t>(n));
  for (const Vector& phi : packing.lines) {
    Vector v(d);
    v(0) = head;
    v.tail(d - 1) = tail * phi;
    satellites.emplace_back(std::move(v));
  }
  return {StateEnsemble(PureState::basis(d, 0), std::move(satellites)), std::move(packing), chi};
}

}  // namespace kappa
