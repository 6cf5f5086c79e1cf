#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "kappa/constructions.hpp"
#include "kappa/errors.hpp"

namespace kappa {

namespace {

bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k) {
    if (d % k == 0) return false;
  }
  return true;
}

Matrix rows_to_matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Quadratic-phase bases: vector l of basis k has entries w^{k x^2 + l x}/sqrt(p)
// with w = exp(2 pi i / p). For p = 2 the quadratic term uses i instead of -1.
std::vector<Matrix> prime_mubs(int p) {
  std::vector<Matrix> bases;
  bases.push_back(Matrix::Identity(p, p));
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (int k = 0; k < p; ++k) {
    Matrix b(p, p);
    for (int l = 0; l < p; ++l) {
      for (int x = 0; x < p; ++x) {
        double turns = 0.0;
        if (p == 2) {
          turns = 0.25 * ((k * x * x) % 4) + 0.5 * ((l * x) % 2);
        } else {
          turns = static_cast<double>((k * x * x + l * x) % p) / p;
        }
        b(x, l) = scale * std::polar(1.0, 2.0 * std::numbers::pi * turns);
      }
    }
    bases.push_back(std::move(b));
  }
  return bases;
}

// Common eigenbases of the five maximal commuting sets of two-qubit Paulis.
std::vector<Matrix> two_qubit_mubs() {
  const Complex i{0.0, 1.0};
  std::vector<Matrix> bases;
  bases.push_back(Matrix::Identity(4, 4));
  bases.push_back(0.5 * rows_to_matrix({{1, 1, 1, 1}, {-1, -1, 1, 1}, {-1, 1, -1, 1}, {1, -1, -1, 1}}));
  bases.push_back(0.5 * rows_to_matrix({{1, 1, 1, 1}, {-i, -i, i, i}, {-i, i, -i, i}, {-1, 1, 1, -1}}));
  bases.push_back(0.5 * rows_to_matrix({{1, 1, 1, 1}, {-i, -i, i, i}, {-1, 1, -1, 1}, {-i, i, i, -i}}));
  bases.push_back(0.5 * rows_to_matrix({{1, 1, 1, 1}, {-1, -1, 1, 1}, {-i, i, -i, i}, {-i, i, i, -i}}));
  return bases;
}

std::vector<PureState> states_from_columns(std::initializer_list<Vector> columns) {
  std::vector<PureState> out;
  for (const auto& c : columns) out.emplace_back(c);
  return out;
}

Vector real_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (const double x : values) v(k++) = x;
  return v;
}

PairMeasurement three_outcome(int j1, int j2, Matrix basis) {
  return {{j1, j2}, MeasurementBasis(std::move(basis)), {0, 1, 2}};
}

FixtureCase fixture_d3n3() {
  const double t1 = 1.1945, t2 = 0.2839, t3 = 1.8423;
  const double t4 = 1.6276, t5 = 2.2192, t6 = 0.3100, t7 = 1.4269;
  const double c1 = std::cos(t1), s1 = std::sin(t1);
  const double c2 = std::cos(t2), s2 = std::sin(t2);
  const double c3 = std::cos(t3), s3 = std::sin(t3);
  const double c4 = std::cos(t4), s4 = std::sin(t4);
  const double c5 = std::cos(t5), s5 = std::sin(t5);
  const double c6 = std::cos(t6), s6 = std::sin(t6);
  const double c7 = std::cos(t7), s7 = std::sin(t7);
  const double r2 = std::sqrt(2.0);

  StateEnsemble ensemble(PureState(real_vector({1, 0, 0})),
                         states_from_columns({real_vector({c1, s1, 0}),
                                              real_vector({c2, s2 * c3, s2 * s3}),
                                              real_vector({c2, s2 * c3, -s2 * s3})}));
  std::vector<PairMeasurement> m;
  m.push_back(three_outcome(1, 2, rows_to_matrix({{c4, s4 * c6, s4 * s6},
                                                  {s4 * c5, -c4 * c5 * c6 - s5 * s6, -c4 * c5 * s6 + s5 * c6},
                                                  {-s4 * s5, c4 * s5 * c6 - c5 * s6, c4 * s5 * s6 + c5 * c6}})));
  m.push_back(three_outcome(1, 3, rows_to_matrix({{c4, s4 * c6, s4 * s6},
                                                  {s4 * c5, -c4 * c5 * c6 - s5 * s6, -c4 * c5 * s6 + s5 * c6},
                                                  {s4 * s5, -c4 * s5 * c6 + c5 * s6, -c4 * s5 * s6 - c5 * c6}})));
  m.push_back(three_outcome(2, 3, rows_to_matrix({{c7, s7 / r2, s7 / r2},
                                                  {-s7, c7 / r2, c7 / r2},
                                                  {0, -1 / r2, 1 / r2}})));
  return {FixtureId::d3n3,
          BoundScenario(std::move(ensemble), std::move(m)),
          0.9964,
          6e-4,
          {{"theta1", t1}, {"theta2", t2}, {"theta3", t3}, {"theta4", t4},
           {"theta5", t5}, {"theta6", t6}, {"theta7", t7}}};
}

FixtureCase fixture_d3n4() {
  const double theta = 0.7152, phi = 1.4436;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double r2 = std::sqrt(2.0);
  const double a = sp / r2, plus = (1 + cp) / 2, minus = (1 - cp) / 2;

  StateEnsemble ensemble(PureState(real_vector({1, 0, 0})),
                         states_from_columns({real_vector({ct, st, 0}), real_vector({ct, 0, st}),
                                              real_vector({ct, -st, 0}), real_vector({ct, 0, -st})}));
  std::vector<PairMeasurement> m;
  m.push_back(three_outcome(1, 2, rows_to_matrix({{cp, a, a}, {a, -plus, minus}, {a, minus, -plus}})));
  m.push_back(three_outcome(1, 3, rows_to_matrix({{0, 1 / r2, 1 / r2}, {0, -1 / r2, 1 / r2}, {1, 0, 0}})));
  m.push_back(three_outcome(1, 4, rows_to_matrix({{cp, a, a}, {a, -plus, minus}, {-a, -minus, plus}})));
  m.push_back(three_outcome(2, 3, rows_to_matrix({{cp, a, a}, {-a, -minus, plus}, {a, -plus, minus}})));
  m.push_back(three_outcome(2, 4, rows_to_matrix({{0, 1 / r2, 1 / r2}, {1, 0, 0}, {0, -1 / r2, 1 / r2}})));
  m.push_back(three_outcome(3, 4, rows_to_matrix({{cp, a, a}, {-a, plus, -minus}, {-a, -minus, plus}})));
  return {FixtureId::d3n4, BoundScenario(std::move(ensemble), std::move(m)), 0.9361, 5e-3,
          {{"theta", theta}, {"phi", phi}}};
}

FixtureCase fixture_d4n4() {
  const double theta = 0.7274, phi = 1.4946;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  const double q = st / r3;

  StateEnsemble ensemble(PureState(real_vector({1, 0, 0, 0})),
                         states_from_columns({real_vector({ct, q, q, q}), real_vector({ct, q, -q, -q}),
                                              real_vector({ct, -q, q, -q}), real_vector({ct, -q, -q, q})}));

  // Rows shared by the six bases; the last column is orthogonal to all three
  // states of its triple and is merged into outcome m0.
  const std::initializer_list<Complex> top{cp, sp / r2, sp / r2, 0};
  const std::initializer_list<Complex> lift{sp, -cp / r2, -cp / r2, 0};
  const std::initializer_list<Complex> drop{-sp, cp / r2, cp / r2, 0};
  const std::initializer_list<Complex> up{0, -0.5, 0.5, 1 / r2};
  const std::initializer_list<Complex> down{0, -0.5, 0.5, -1 / r2};
  const std::initializer_list<Complex> flip{0, 0.5, -0.5, 1 / r2};

  auto merged = [](int j1, int j2, Matrix basis) {
    return PairMeasurement{{j1, j2}, MeasurementBasis(std::move(basis), {0, 1, 2, 0}), {0, 1, 2}};
  };
  std::vector<PairMeasurement> m;
  m.push_back(merged(1, 2, rows_to_matrix({top, lift, up, down})));
  m.push_back(merged(1, 3, rows_to_matrix({top, up, lift, down})));
  m.push_back(merged(1, 4, rows_to_matrix({top, up, down, lift})));
  m.push_back(merged(2, 3, rows_to_matrix({top, up, flip, drop})));
  m.push_back(merged(2, 4, rows_to_matrix({top, up, drop, flip})));
  m.push_back(merged(3, 4, rows_to_matrix({top, drop, up, flip})));
  return {FixtureId::d4n4, BoundScenario(std::move(ensemble), std::move(m)), 0.9054, 7e-3,
          {{"theta", theta}, {"phi", phi}}};
}

}  // namespace

std::vector<Matrix> mutually_unbiased_bases(int d) {
  if (d == 4) return two_qubit_mubs();
  if (is_prime(d)) return prime_mubs(d);
  throw InvalidInput("no complete set of mutually unbiased bases is built in for d = " +
                     std::to_string(d) + " (supported: prime d and d = 4)");
}

StateEnsemble mub_states(int d) {
  const std::vector<Matrix> bases = mutually_unbiased_bases(d);
  std::vector<PureState> satellites;
  for (std::size_t b = 1; b < bases.size(); ++b) {
    for (int c = 0; c < d; ++c) satellites.emplace_back(Vector(bases[b].col(c)));
  }
  return StateEnsemble(PureState::basis(d, 0), std::move(satellites));
}

StateEnsemble hadamard_states(int d) {
  if (d < 3) throw InvalidInput("Hadamard family needs d >= 3");
  if (d > kMaxHadamardDimension) {
    throw InvalidInput("Hadamard family capped at d = " + std::to_string(kMaxHadamardDimension) +
                       " (2^(d-1) satellites)");
  }
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  const long count = 1L << (d - 1);
  std::vector<PureState> satellites;
  satellites.reserve(static_cast<std::size_t>(count));
  for (long pattern = 0; pattern < count; ++pattern) {
    Vector v(d);
    v(0) = a;
    for (int k = 1; k < d; ++k) v(k) = ((pattern >> (k - 1)) & 1) ? -a : a;
    satellites.emplace_back(std::move(v));
  }
  return StateEnsemble(PureState::basis(d, 0), std::move(satellites));
}

std::string_view to_string(FixtureId id) {
  switch (id) {
    case FixtureId::d3n3: return "d3n3";
    case FixtureId::d3n4: return "d3n4";
    case FixtureId::d4n4: return "d4n4";
  }
  return "?";
}

std::optional<FixtureId> parse_fixture_id(std::string_view text) {
  for (const FixtureId id : kAllFixtures) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

FixtureCase reference_fixture(FixtureId id) {
  switch (id) {
    case FixtureId::d3n3: return fixture_d3n3();
    case FixtureId::d3n4: return fixture_d3n4();
    case FixtureId::d4n4: return fixture_d4n4();
  }
  throw InvalidInput("unknown fixture id");
}

}  // namespace kappa
