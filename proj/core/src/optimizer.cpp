#include "kappa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "kappa/errors.hpp"
#include "kappa/parallel.hpp"
#include "kappa/simplex.hpp"

namespace kappa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegeneratePenalty = 1e6;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), 0x5eedu};
  return std::mt19937_64(seq);
}

// Fast path of best_assignment: probabilities of the three states on each
// column, reduced to the minimal labeled error.
struct AssignmentScratch {
  std::vector<double> prob;  // prob[3 k + i] = |<u_k|s_i>|^2
  std::vector<double> row_min;
};

double min_assignment_error(const Matrix& u, const Vector& s0, const Vector& s1, const Vector& s2,
                            AssignmentScratch& scratch, std::array<int, 3>* columns) {
  const int d = static_cast<int>(u.rows());
  scratch.prob.resize(static_cast<std::size_t>(3 * d));
  scratch.row_min.resize(static_cast<std::size_t>(d));
  double base = 0.0;
  const Vector* states[3] = {&s0, &s1, &s2};
  for (int k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      const double p = std::norm(u.col(k).dot(*states[i]));
      scratch.prob[static_cast<std::size_t>(3 * k + i)] = p;
      lo = std::min(lo, p);
    }
    scratch.row_min[static_cast<std::size_t>(k)] = lo;
    base += lo;
  }
  double best = std::numeric_limits<double>::infinity();
  const auto& p = scratch.prob;
  const auto& m = scratch.row_min;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (b == a) continue;
      for (int c = 0; c < d; ++c) {
        if (c == a || c == b) continue;
        const double e = base - m[a] - m[b] - m[c] + p[3 * a] + p[3 * b + 1] + p[3 * c + 2];
        if (e < best) {
          best = e;
          if (columns != nullptr) *columns = {a, b, c};
        }
      }
    }
  }
  return std::max(best, 0.0);
}

std::vector<double> random_angles(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::vector<double> x(count);
  for (auto& v : x) v = angle(rng);
  return x;
}

PairMeasurement to_measurement(PairIndex pair, const Matrix& basis, const TripleAssignment& a) {
  return {pair, MeasurementBasis(basis, a.labels, 1e-10), {0, 1, 2}};
}

}  // namespace

void SearchConfig::validate() const {
  if (dim < 3 || dim > kMaxDimension) throw InvalidInput("search dimension must be in [3, 64]");
  if (n < 2) throw InvalidInput("search needs n >= 2");
  if (restarts < 1) throw InvalidInput("restarts must be >= 1");
  if (measurement_restarts < 1) throw InvalidInput("measurement restarts must be >= 1");
  if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
}

BasisParameterization::BasisParameterization(int dim, bool real_only) : dim_(dim), real_(real_only) {
  if (dim < 2) throw InvalidInput("basis dimension must be >= 2");
}

std::size_t BasisParameterization::size() const noexcept {
  const auto rotations = static_cast<std::size_t>(dim_) * (dim_ - 1) / 2;
  return real_ ? rotations : 2 * rotations;
}

void BasisParameterization::build(std::span<const double> params, Matrix& out) const {
  out.setIdentity(dim_, dim_);
  std::size_t k = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      const double c = std::cos(params[k]);
      const double s = std::sin(params[k]);
      ++k;
      Complex fwd(s, 0.0);
      Complex back(-s, 0.0);
      if (!real_) {
        const Complex phase = std::polar(1.0, params[k++]);
        fwd = s * phase;
        back = -s * std::conj(phase);
      }
      for (int r = 0; r < dim_; ++r) {
        const Complex ui = out(r, i);
        const Complex uj = out(r, j);
        out(r, i) = c * ui + fwd * uj;
        out(r, j) = back * ui + c * uj;
      }
    }
  }
}

Matrix BasisParameterization::build(std::span<const double> params) const {
  Matrix out;
  build(params, out);
  return out;
}

StateParameterization::StateParameterization(int dim, bool real_only) : dim_(dim), real_(real_only) {
  if (dim < 2) throw InvalidInput("state dimension must be >= 2");
}

std::size_t StateParameterization::size() const noexcept {
  const auto angles = static_cast<std::size_t>(dim_ - 1);
  return real_ ? angles : 2 * angles;
}

void StateParameterization::build(std::span<const double> params, Vector& out) const {
  out.resize(dim_);
  double tail = 1.0;
  for (int k = 0; k + 1 < dim_; ++k) {
    out(k) = tail * std::cos(params[static_cast<std::size_t>(k)]);
    tail *= std::sin(params[static_cast<std::size_t>(k)]);
  }
  out(dim_ - 1) = tail;
  if (!real_) {
    for (int k = 1; k < dim_; ++k) {
      out(k) *= std::polar(1.0, params[static_cast<std::size_t>(dim_ - 1 + k - 1)]);
    }
  }
}

TripleAssignment best_assignment(const Matrix& basis, const PureState& s0, const PureState& s1,
                                 const PureState& s2) {
  const int d = static_cast<int>(basis.rows());
  if (d < 3) throw InvalidInput("a 3-outcome measurement needs d >= 3");
  if (s0.dim() != d || s1.dim() != d || s2.dim() != d) {
    throw InvalidInput("basis and states differ in dimension");
  }
  AssignmentScratch scratch;
  TripleAssignment out;
  min_assignment_error(basis, s0.amplitudes(), s1.amplitudes(), s2.amplitudes(), scratch,
                       &out.columns);
  out.labels.assign(static_cast<std::size_t>(d), -1);
  for (int i = 0; i < 3; ++i) out.labels[static_cast<std::size_t>(out.columns[i])] = i;
  out.error = 0.0;
  for (int k = 0; k < d; ++k) {
    auto& label = out.labels[static_cast<std::size_t>(k)];
    if (label < 0) {
      const double* p = &scratch.prob[static_cast<std::size_t>(3 * k)];
      label = static_cast<int>(std::min_element(p, p + 3) - p);
    }
    out.error += scratch.prob[static_cast<std::size_t>(3 * k + label)];
  }
  return out;
}

TripleSolution solve_triple(const PureState& psi0, const PureState& a, const PureState& b,
                            const SearchConfig& cfg, std::uint64_t stream) {
  const int d = psi0.dim();
  const bool real =
      cfg.effective_real_only() && psi0.is_real() && a.is_real() && b.is_real();
  const BasisParameterization param(d, real);

  Matrix work;
  AssignmentScratch scratch;
  const Objective objective = [&](std::span<const double> x) {
    param.build(x, work);
    return min_assignment_error(work, psi0.amplitudes(), a.amplitudes(), b.amplitudes(), scratch,
                                nullptr);
  };

  SimplexOptions opts;
  opts.max_iterations = cfg.max_iterations;
  opts.f_tolerance = 1e-16;
  opts.x_tolerance = 1e-9;
  opts.initial_step = 0.4;
  opts.target = 1e-16;

  SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.measurement_restarts; ++r) {
    auto rng = make_stream(cfg.seed, stream, static_cast<std::uint64_t>(r));
    SimplexResult run = nelder_mead_restarted(objective, random_angles(param.size(), rng), opts, 6);
    run = golden_section_polish(objective, std::move(run), 0.05, 3);
    if (run.value < best.value) best = std::move(run);
    if (best.value < opts.target) break;
  }

  const Matrix basis = param.build(best.x);
  const TripleAssignment assignment = best_assignment(basis, psi0, a, b);
  return {to_measurement({1, 2}, basis, assignment), assignment.error};
}

BoundScenario solve_measurements(const StateEnsemble& e, const SearchConfig& cfg) {
  if (e.dim() < 3) throw InvalidInput("3-outcome measurements need d >= 3");
  const auto pairs = enumerate_pairs(e.n());
  std::vector<std::optional<PairMeasurement>> solved(pairs.size());
  parallel_for(
      pairs.size(),
      [&](std::size_t k) {
        const PairIndex p = pairs[k];
        TripleSolution s = solve_triple(e.psi0(), e.state(p.j1), e.state(p.j2), cfg, k);
        s.measurement.pair = p;
        solved[k] = std::move(s.measurement);
      },
      cfg.threads);
  std::vector<PairMeasurement> measurements;
  measurements.reserve(pairs.size());
  for (auto& m : solved) measurements.push_back(std::move(*m));
  return BoundScenario(e, std::move(measurements));
}

namespace {

// Objective of the joint search: (1 + sum of minimal triple errors) / sum omega_Q,
// with psi0 fixed to e_0.
class JointObjective {
 public:
  JointObjective(int dim, int n, bool real)
      : dim_(dim), n_(n), states_(dim, real), bases_(dim, real), pairs_(enumerate_pairs(n)) {
    sats_.resize(static_cast<std::size_t>(n));
    psi0_ = Vector::Unit(dim, 0);
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n_) * states_.size() + pairs_.size() * bases_.size();
  }

  double operator()(std::span<const double> x) {
    double omega_sum = 0.0;
    for (int j = 0; j < n_; ++j) {
      auto& v = sats_[static_cast<std::size_t>(j)];
      states_.build(x.subspan(static_cast<std::size_t>(j) * states_.size(), states_.size()), v);
      const double rest = v.tail(dim_ - 1).squaredNorm();
      omega_sum += 1.0 - std::sqrt(std::min(rest, 1.0));
    }
    if (omega_sum < 1e-9) return kDegeneratePenalty;

    double error = 0.0;
    const std::size_t offset = static_cast<std::size_t>(n_) * states_.size();
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      bases_.build(x.subspan(offset + k * bases_.size(), bases_.size()), work_);
      error += min_assignment_error(work_, psi0_, sats_[static_cast<std::size_t>(pairs_[k].j1 - 1)],
                                    sats_[static_cast<std::size_t>(pairs_[k].j2 - 1)], scratch_,
                                    nullptr);
    }
    return (1.0 + error) / omega_sum;
  }

  BoundScenario decode(std::span<const double> x) {
    std::vector<PureState> satellites;
    for (int j = 0; j < n_; ++j) {
      Vector v;
      states_.build(x.subspan(static_cast<std::size_t>(j) * states_.size(), states_.size()), v);
      satellites.emplace_back(std::move(v));
    }
    StateEnsemble ensemble(PureState(psi0_), std::move(satellites));
    const std::size_t offset = static_cast<std::size_t>(n_) * states_.size();
    std::vector<PairMeasurement> measurements;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const Matrix basis = bases_.build(x.subspan(offset + k * bases_.size(), bases_.size()));
      const PairIndex p = pairs_[k];
      const TripleAssignment a =
          best_assignment(basis, ensemble.psi0(), ensemble.state(p.j1), ensemble.state(p.j2));
      measurements.push_back(to_measurement(p, basis, a));
    }
    return BoundScenario(std::move(ensemble), std::move(measurements));
  }

 private:
  int dim_;
  int n_;
  StateParameterization states_;
  BasisParameterization bases_;
  std::vector<PairIndex> pairs_;
  Vector psi0_;
  std::vector<Vector> sats_;
  Matrix work_;
  AssignmentScratch scratch_;
};

struct RestartRun {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
};

}  // namespace

SearchResult joint_search(const SearchConfig& cfg) {
  cfg.validate();
  const bool real = cfg.effective_real_only();

  std::vector<RestartRun> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(
      runs.size(),
      [&](std::size_t r) {
        JointObjective objective(cfg.dim, cfg.n, real);
        const Objective f = [&objective](std::span<const double> x) { return objective(x); };
        auto rng = make_stream(cfg.seed, 0xfeedULL, r);
        std::vector<double> x0 = random_angles(objective.size(), rng);
        if (!real) {
          for (auto& v : x0) v *= 2.0;  // phases span a full turn
        }
        SimplexOptions opts;
        opts.max_iterations = cfg.max_iterations;
        opts.f_tolerance = cfg.tolerance;
        opts.x_tolerance = 1e-9;
        opts.initial_step = 0.3;
        SimplexResult res = nelder_mead_restarted(f, std::move(x0), opts, 8);
        res = golden_section_polish(f, std::move(res), 0.02, 3);
        runs[r] = {std::move(res.x), res.value};
      },
      cfg.threads);

  std::size_t best = 0;
  std::vector<double> history;
  history.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    history.push_back(runs[r].value);
    if (runs[r].value < runs[best].value) best = r;
  }

  JointObjective objective(cfg.dim, cfg.n, real);
  BoundScenario decoded = objective.decode(runs[best].x);

  // Re-solve each pair on the final states and keep whichever measurement is better.
  const BoundReport decoded_report = evaluate_bound(decoded);
  const BoundScenario resolved = solve_measurements(decoded.ensemble(), cfg);
  const BoundReport resolved_report = evaluate_bound(resolved);
  std::vector<PairMeasurement> merged;
  for (std::size_t k = 0; k < decoded.measurements().size(); ++k) {
    const auto& pd = decoded_report.per_pair_terms[k].p;
    const auto& pr = resolved_report.per_pair_terms[k].p;
    const bool take_resolved = (pr[0] + pr[1] + pr[2]) < (pd[0] + pd[1] + pd[2]);
    merged.push_back(take_resolved ? resolved.measurements()[k] : decoded.measurements()[k]);
  }
  BoundScenario scenario(decoded.ensemble(), std::move(merged));
  BoundReport report = evaluate_bound(scenario);
  return {std::move(scenario), std::move(report), std::move(history), cfg.seed};
}

}  // namespace kappa
