#include "kappa/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "kappa/errors.hpp"
#include "kappa/parallel.hpp"

namespace kappa {

namespace {

constexpr double kStochasticTolerance = 1e-12;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), tag};
  return std::mt19937_64(seq);
}

std::vector<double> flat_dirichlet(int size, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(static_cast<std::size_t>(size));
  double total = 0.0;
  for (auto& x : v) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace

DiscreteOntologicalModel::DiscreteOntologicalModel(int ontic_count,
                                                   std::vector<std::vector<double>> epistemic_states,
                                                   std::vector<Eigen::MatrixXd> response_functions)
    : ontic_count_(ontic_count),
      states_(std::move(epistemic_states)),
      responses_(std::move(response_functions)) {
  if (ontic_count_ < 1) throw InvalidInput("ontic space must be nonempty");
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const auto& mu = states_[s];
    if (static_cast<int>(mu.size()) != ontic_count_) {
      throw InvalidInput("epistemic state " + std::to_string(s) + " has the wrong length");
    }
    double total = 0.0;
    for (const double x : mu) {
      if (!(x >= 0.0)) throw InvalidInput("epistemic state " + std::to_string(s) + " is negative");
      total += x;
    }
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      throw InvalidInput("epistemic state " + std::to_string(s) + " does not sum to 1");
    }
  }
  for (std::size_t m = 0; m < responses_.size(); ++m) {
    const auto& xi = responses_[m];
    if (xi.cols() != ontic_count_ || xi.rows() < 1) {
      throw InvalidInput("response table " + std::to_string(m) + " has the wrong shape");
    }
    if (!(xi.array() >= 0.0).all()) {
      throw InvalidInput("response table " + std::to_string(m) + " is negative");
    }
    for (Eigen::Index l = 0; l < xi.cols(); ++l) {
      if (std::abs(xi.col(l).sum() - 1.0) > kStochasticTolerance) {
        throw InvalidInput("response table " + std::to_string(m) + " column " + std::to_string(l) +
                           " does not sum to 1");
      }
    }
  }
}

double classical_overlap(std::span<const double> mu_a, std::span<const double> mu_b) {
  if (mu_a.size() != mu_b.size()) throw InvalidInput("distribution length mismatch");
  double total = 0.0;
  for (std::size_t l = 0; l < mu_a.size(); ++l) total += std::min(mu_a[l], mu_b[l]);
  return total;
}

double model_probability(const DiscreteOntologicalModel& model, int measurement, int outcome,
                         int state_index) {
  const auto& responses = model.response_functions();
  const auto& states = model.epistemic_states();
  if (measurement < 0 || measurement >= static_cast<int>(responses.size())) {
    throw InvalidInput("measurement index out of range");
  }
  if (state_index < 0 || state_index >= static_cast<int>(states.size())) {
    throw InvalidInput("state index out of range");
  }
  const auto& xi = responses[static_cast<std::size_t>(measurement)];
  if (outcome < 0 || outcome >= xi.rows()) throw InvalidInput("outcome index out of range");
  const auto& mu = states[static_cast<std::size_t>(state_index)];
  double p = 0.0;
  for (int l = 0; l < model.ontic_count(); ++l) p += xi(outcome, l) * mu[static_cast<std::size_t>(l)];
  return p;
}

double overlap_inequality_margin(const DiscreteOntologicalModel& model) {
  const int n = static_cast<int>(model.epistemic_states().size()) - 1;
  if (n < 2) throw InvalidInput("need psi0 and at least 2 satellites");
  const auto pairs = enumerate_pairs(n);
  if (model.response_functions().size() != pairs.size()) {
    throw InvalidInput("need one response table per satellite pair");
  }
  const auto& mu = model.epistemic_states();
  double lhs = 0.0;
  for (int j = 1; j <= n; ++j) lhs += classical_overlap(mu[0], mu[static_cast<std::size_t>(j)]);
  double rhs = 1.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (model.response_functions()[k].rows() != 3) throw InvalidInput("response tables need 3 outcomes");
    const int m = static_cast<int>(k);
    rhs += model_probability(model, m, 0, 0) + model_probability(model, m, 1, pairs[k].j1) +
           model_probability(model, m, 2, pairs[k].j2);
  }
  return rhs - lhs;
}

std::vector<Eigen::MatrixXd> adversarial_responses(const std::vector<std::vector<double>>& states) {
  const int n = static_cast<int>(states.size()) - 1;
  const auto pairs = enumerate_pairs(n);
  const auto L = static_cast<Eigen::Index>(states.front().size());
  std::vector<Eigen::MatrixXd> tables;
  tables.reserve(pairs.size());
  for (const PairIndex p : pairs) {
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(3, L);
    const std::vector<double>* members[3] = {&states[0], &states[static_cast<std::size_t>(p.j1)],
                                             &states[static_cast<std::size_t>(p.j2)]};
    for (Eigen::Index l = 0; l < L; ++l) {
      int pick = 0;
      for (int i = 1; i < 3; ++i) {
        if ((*members[i])[static_cast<std::size_t>(l)] < (*members[pick])[static_cast<std::size_t>(l)]) pick = i;
      }
      xi(pick, l) = 1.0;
    }
    tables.push_back(std::move(xi));
  }
  return tables;
}

FuzzReport fuzz_overlap_inequality(long trials, std::uint64_t seed, int ontic_count, int n,
                                   const FuzzOptions& options) {
  if (trials < 1) throw InvalidInput("fuzz needs at least one trial");
  if (ontic_count < 1) throw InvalidInput("fuzz needs L >= 1");
  if (n < 2) throw InvalidInput("fuzz needs n >= 2");

  const auto pair_count = enumerate_pairs(n).size();
  std::vector<double> margins(static_cast<std::size_t>(trials));
  parallel_for(
      margins.size(),
      [&](std::size_t t) {
        auto rng = make_stream(seed, t, 0xf022u);
        std::vector<std::vector<double>> states;
        for (int j = 0; j <= n; ++j) states.push_back(flat_dirichlet(ontic_count, rng));
        std::vector<Eigen::MatrixXd> tables;
        if (options.adversarial) {
          tables = adversarial_responses(states);
        } else {
          for (std::size_t k = 0; k < pair_count; ++k) {
            Eigen::MatrixXd xi(3, ontic_count);
            for (int l = 0; l < ontic_count; ++l) {
              const auto column = flat_dirichlet(3, rng);
              for (int i = 0; i < 3; ++i) xi(i, l) = column[static_cast<std::size_t>(i)];
            }
            tables.push_back(std::move(xi));
          }
        }
        const DiscreteOntologicalModel model(ontic_count, std::move(states), std::move(tables));
        margins[t] = overlap_inequality_margin(model);
      },
      options.threads);

  FuzzReport report;
  report.trials = trials;
  report.worst_margin = margins.front();
  for (const double m : margins) {
    report.worst_margin = std::min(report.worst_margin, m);
    if (m < -kViolationTolerance) ++report.violations;
  }
  return report;
}

Eigen::Vector3d bloch_vector(const PureState& psi) {
  if (psi.dim() != 2) throw InvalidInput("Bloch vectors need a qubit state");
  const Complex a0 = psi[0];
  const Complex a1 = psi[1];
  const Complex c = std::conj(a0) * a1;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(a0) - std::norm(a1)};
}

std::optional<double> ks_qubit_kappa(const PureState& a, const PureState& b, long samples,
                                     std::uint64_t seed, unsigned threads) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  const double wq = omega_q(a, b);
  if (wq <= 0.0) return std::nullopt;

  const Eigen::Vector3d va = bloch_vector(a).normalized();
  const Eigen::Vector3d vb = bloch_vector(b).normalized();
  // Orthonormal frame (e1, e2, va).
  const Eigen::Vector3d helper =
      std::abs(va.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (helper - helper.dot(va) * va).normalized();
  const Eigen::Vector3d e2 = va.cross(e1);

  constexpr long kChunks = 64;
  const long per_chunk = (samples + kChunks - 1) / kChunks;
  std::vector<double> partial(kChunks, 0.0);
  parallel_for(
      kChunks,
      [&](std::size_t c) {
        const long begin = static_cast<long>(c) * per_chunk;
        const long end = std::min(samples, begin + per_chunk);
        auto rng = make_stream(seed, c, 0x4b53u);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double sum = 0.0;
        for (long s = begin; s < end; ++s) {
          const double u1 = unit(rng);
          const double u2 = unit(rng);
          const double r = std::sqrt(u1);
          const double phi = 2.0 * std::numbers::pi * u2;
          const Eigen::Vector3d lambda =
              r * std::cos(phi) * e1 + r * std::sin(phi) * e2 + std::sqrt(1.0 - u1) * va;
          const double ca = va.dot(lambda);
          const double cb = vb.dot(lambda);
          if (cb >= ca) {
            sum += 1.0;
          } else if (ca > 0.0 && cb > 0.0) {
            sum += cb / ca;
          }
        }
        partial[c] = sum;
      },
      threads);

  double total = 0.0;
  for (const double p : partial) total += p;
  return (total / static_cast<double>(samples)) / wq;
}

DiscreteOntologicalModel psi_ontic_model(const PureState& a, const PureState& b,
                                         const MeasurementBasis& basis) {
  const std::vector<int> outcomes = basis.distinct_labels();
  Eigen::MatrixXd xi(static_cast<Eigen::Index>(outcomes.size()), 2);
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    xi(static_cast<Eigen::Index>(m), 0) = born_probability(basis, outcomes[m], a);
    xi(static_cast<Eigen::Index>(m), 1) = born_probability(basis, outcomes[m], b);
  }
  for (Eigen::Index l = 0; l < 2; ++l) xi.col(l) /= xi.col(l).sum();
  return DiscreteOntologicalModel(2, {{1.0, 0.0}, {0.0, 1.0}}, {std::move(xi)});
}

}  // namespace kappa
