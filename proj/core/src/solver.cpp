#include "doubtfire/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "doubtfire/errors.hpp"
#include "doubtfire/euler.hpp"
#include "doubtfire/gauss_legendre.hpp"

namespace doubtfire {

namespace {

constexpr int kMaxUnknowns = 4;
using NodeState = std::array<double, kMaxUnknowns>;

std::size_t line_node(int dim, int n, int dir, int k, int line) {
  if (dim == 1) return static_cast<std::size_t>(k);
  return dir == 0 ? static_cast<std::size_t>(k + n * line) : static_cast<std::size_t>(line + n * k);
}

NodeState node_state(const CellPolynomial& q, std::size_t node) {
  NodeState s{};
  for (int u = 0; u < q.unknowns(); ++u) s[u] = q.at(u, node);
  return s;
}

std::span<const double> view(const NodeState& s, int unknowns) { return {s.data(), static_cast<std::size_t>(unknowns)}; }

/// Face trace along one line; written as u_0 + sum_k l_k (u_k - u_0) so that
/// constant data reproduces u_0 exactly.
NodeState line_trace(const CellPolynomial& q, int dir, int line, std::span<const double> basis_values) {
  const int n = q.order() + 1;
  NodeState t{};
  for (int u = 0; u < q.unknowns(); ++u) {
    const double v0 = q.at(u, line_node(q.dim(), n, dir, 0, line));
    double acc = 0.0;
    for (int k = 1; k < n; ++k) {
      acc += basis_values[k] * (q.at(u, line_node(q.dim(), n, dir, k, line)) - v0);
    }
    t[u] = v0 + acc;
  }
  return t;
}

NodeState rusanov(const NodeState& left, const NodeState& right, int dim, int dir, double gamma) {
  const int nu = dim + 2;
  NodeState fl{}, fr{}, out{};
  euler::flux(view(left, nu), dim, dir, gamma, {fl.data(), static_cast<std::size_t>(nu)});
  euler::flux(view(right, nu), dim, dir, gamma, {fr.data(), static_cast<std::size_t>(nu)});
  const double lambda = std::max(euler::wave_speed(view(left, nu), dim, dir, gamma),
                                 euler::wave_speed(view(right, nu), dim, dir, gamma));
  for (int u = 0; u < nu; ++u) {
    out[u] = 0.5 * (fl[u] + fr[u]) - 0.5 * lambda * (right[u] - left[u]);
  }
  return out;
}

int stage_count(TimeScheme scheme) {
  switch (scheme) {
    case TimeScheme::ForwardEuler: return 1;
    case TimeScheme::SspRk2: return 2;
    case TimeScheme::SspRk3: return 3;
  }
  return 1;
}

/// Weight c of stage k in u_k = u_0 + c * (u_{k-1} - u_0 + dt * L(u_{k-1})).
double stage_weight(TimeScheme scheme, int stage) {
  if (stage == 1) return 1.0;
  if (scheme == TimeScheme::SspRk2) return 0.5;
  return stage == 2 ? 0.25 : 2.0 / 3.0;
}

struct StageValue {
  std::uint32_t cell;
  CellPolynomial value;
};

const CellPolynomial& lookup(const std::vector<StageValue>& values, std::uint32_t cell) {
  for (const auto& v : values) {
    if (v.cell == cell) return v.value;
  }
  throw std::logic_error("predictor stencil: missing stage value");
}

}  // namespace

std::size_t Grid::cell_count() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(cells_per_dim);
  return n;
}

std::uint32_t Grid::neighbor(std::uint32_t cell, int dir, int side) const {
  const auto n = static_cast<std::uint32_t>(cells_per_dim);
  const std::uint32_t stride = dir == 0 ? 1u : n;
  const std::uint32_t coord = (cell / stride) % n;
  const std::uint32_t next = side > 0 ? (coord + 1) % n : (coord + n - 1) % n;
  return cell - coord * stride + next * stride;
}

double Grid::origin(std::uint32_t cell, int dir) const {
  const auto n = static_cast<std::uint32_t>(cells_per_dim);
  const std::uint32_t coord = dir == 0 ? cell % n : (cell / n) % n;
  return coord * cell_width();
}

Solver::Solver(Grid grid, SolverOptions options)
    : grid_(grid), options_(options), shape_{options.order, grid.dim, euler_unknowns(grid.dim)} {
  if (grid_.dim != 1 && grid_.dim != 2) throw std::invalid_argument("Solver: dim must be 1 or 2");
  if (grid_.cells_per_dim < 3) throw std::invalid_argument("Solver: need at least 3 cells per dimension");
  if (options_.order < 1) throw std::invalid_argument("Solver: order must be >= 1");
  if (!(options_.gamma > 1.0)) throw std::invalid_argument("Solver: gamma must exceed 1");
  if (!(options_.cfl > 0.0)) throw std::invalid_argument("Solver: CFL must be positive");
  (void)basis_for(options_.order);
}

double Solver::node_coordinate(std::uint32_t cell, std::size_t node, int dir) const {
  const auto& basis = basis_for(options_.order);
  const int n = basis.size();
  const std::size_t k = dir == 0 ? node % n : (node / n) % n;
  const double h = grid_.cell_width();
  return grid_.origin(cell, dir) + 0.5 * h * (basis.nodes()[k] + 1.0);
}

double Solver::node_weight(std::size_t node) const {
  const auto& basis = basis_for(options_.order);
  const int n = basis.size();
  double w = basis.weights()[node % n];
  if (grid_.dim == 2) w *= basis.weights()[(node / n) % n];
  return w;
}

SolverState Solver::initial_state(InitialCondition kind) const {
  const double gamma = options_.gamma;
  const int dim = grid_.dim;
  SolverState state;
  state.field.reserve(grid_.cell_count());
  for (std::uint32_t c = 0; c < grid_.cell_count(); ++c) {
    CellPolynomial q(shape_);
    for (std::size_t node = 0; node < q.nodes(); ++node) {
      const double x = node_coordinate(c, node, 0);
      const double y = dim == 2 ? node_coordinate(c, node, 1) : 0.0;
      double rho = 1.0;
      double vel = 0.0;
      const double p = 1.0;
      switch (kind) {
        case InitialCondition::Constant:
          break;
        case InitialCondition::SmoothWave:
          rho = 1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * (x + y));
          vel = 1.0;
          break;
        case InitialCondition::GaussianBump: {
          double r2 = (x - 0.5) * (x - 0.5);
          if (dim == 2) r2 += (y - 0.5) * (y - 0.5);
          rho = 1.0 + 0.5 * std::exp(-r2 / 0.01);
          vel = 1.0;
          break;
        }
      }
      q.at(0, node) = rho;
      double kinetic = 0.0;
      for (int d = 0; d < dim; ++d) {
        q.at(1 + d, node) = rho * vel;
        kinetic += 0.5 * rho * vel * vel;
      }
      q.at(dim + 1, node) = p / (gamma - 1.0) + kinetic;
    }
    state.field.push_back(std::move(q));
  }
  state.dt_per_cell.reserve(state.field.size());
  for (const auto& q : state.field) state.dt_per_cell.push_back(admissible_dt(q));
  state.global_dt = *std::min_element(state.dt_per_cell.begin(), state.dt_per_cell.end());
  return state;
}

double Solver::admissible_dt(const CellPolynomial& q) const {
  const int dim = grid_.dim;
  const int nu = shape_.unknowns;
  double lambda_max = 0.0;
  for (std::size_t node = 0; node < q.nodes(); ++node) {
    const NodeState s = node_state(q, node);
    if (!euler::admissible(view(s, nu), dim, options_.gamma)) return 0.0;
    double lambda = 0.0;
    for (int d = 0; d < dim; ++d) lambda += euler::wave_speed(view(s, nu), dim, d, options_.gamma);
    lambda_max = std::max(lambda_max, lambda);
  }
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) return 0.0;
  return options_.cfl * grid_.cell_width() / ((2.0 * options_.order + 1.0) * lambda_max);
}

void Solver::residual(const CellPolynomial& self, std::span<const CellPolynomial* const> neighbors,
                      CellPolynomial& out) const {
  const auto& basis = basis_for(options_.order);
  const int n = basis.size();
  const int dim = grid_.dim;
  const int nu = shape_.unknowns;
  const double gamma = options_.gamma;
  const double scale = 2.0 / grid_.cell_width();
  const auto d1 = basis.first_derivative();
  const auto left_values = basis.left_values();
  const auto right_values = basis.right_values();
  const auto weights = basis.weights();
  const int lines = static_cast<int>(self.nodes()) / n;

  std::fill(out.coefficients().begin(), out.coefficients().end(), 0.0);
  std::array<NodeState, 17> f{};

  for (int dir = 0; dir < dim; ++dir) {
    const CellPolynomial& lower = *neighbors[2 * dir];
    const CellPolynomial& upper = *neighbors[2 * dir + 1];
    for (int line = 0; line < lines; ++line) {
      for (int k = 0; k < n; ++k) {
        const NodeState s = node_state(self, line_node(dim, n, dir, k, line));
        euler::flux(view(s, nu), dim, dir, gamma, {f[k].data(), static_cast<std::size_t>(nu)});
      }
      // Interpolated flux at both faces, anchored at node 0.
      NodeState flux_left{}, flux_right{};
      for (int u = 0; u < nu; ++u) {
        double al = 0.0;
        double ar = 0.0;
        for (int k = 1; k < n; ++k) {
          al += left_values[k] * (f[k][u] - f[0][u]);
          ar += right_values[k] * (f[k][u] - f[0][u]);
        }
        flux_left[u] = f[0][u] + al;
        flux_right[u] = f[0][u] + ar;
      }
      const NodeState self_left = line_trace(self, dir, line, left_values);
      const NodeState self_right = line_trace(self, dir, line, right_values);
      const NodeState lower_right = line_trace(lower, dir, line, right_values);
      const NodeState upper_left = line_trace(upper, dir, line, left_values);
      const NodeState star_left = rusanov(lower_right, self_left, dim, dir, gamma);
      const NodeState star_right = rusanov(self_right, upper_left, dim, dir, gamma);

      for (int i = 0; i < n; ++i) {
        const std::size_t node = line_node(dim, n, dir, i, line);
        for (int u = 0; u < nu; ++u) {
          double volume = 0.0;
          for (int q = 0; q < n; ++q) volume += d1[i * n + q] * (f[q][u] - f[i][u]);
          const double surface = (right_values[i] * (star_right[u] - flux_right[u]) -
                                  left_values[i] * (star_left[u] - flux_left[u])) /
                                 weights[i];
          out.at(u, node) -= scale * (volume + surface);
        }
      }
    }
  }
}

TaskOutcome Solver::predictor_task(std::uint32_t cell, const SolverState& state) const {
  if (state.field.size() != grid_.cell_count()) throw ShapeMismatch("predictor_task: field size mismatch");
  const int stages = stage_count(options_.scheme);
  const double dt = state.global_dt;
  const int dim = grid_.dim;

  // rings[r] = cells within graph distance r of `cell` (deduplicated).
  std::vector<std::vector<std::uint32_t>> rings(static_cast<std::size_t>(stages));
  rings[0] = {cell};
  for (int r = 1; r < stages; ++r) {
    auto next = rings[r - 1];
    for (std::uint32_t c : rings[r - 1]) {
      for (int d = 0; d < dim; ++d) {
        next.push_back(grid_.neighbor(c, d, -1));
        next.push_back(grid_.neighbor(c, d, +1));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    rings[r] = std::move(next);
  }

  std::vector<StageValue> previous;
  std::vector<StageValue> current;
  CellPolynomial rhs(shape_);
  std::array<const CellPolynomial*, 4> nbrs{};
  for (int stage = 1; stage <= stages; ++stage) {
    current.clear();
    const double weight = stage_weight(options_.scheme, stage);
    for (std::uint32_t c : rings[stages - stage]) {
      auto prev = [&](std::uint32_t x) -> const CellPolynomial& {
        return stage == 1 ? state.field[x] : lookup(previous, x);
      };
      for (int d = 0; d < dim; ++d) {
        nbrs[2 * d] = &prev(grid_.neighbor(c, d, -1));
        nbrs[2 * d + 1] = &prev(grid_.neighbor(c, d, +1));
      }
      const CellPolynomial& from = prev(c);
      residual(from, {nbrs.data(), static_cast<std::size_t>(2 * dim)}, rhs);
      const CellPolynomial& base = state.field[c];
      CellPolynomial next(shape_);
      const auto b = base.coefficients();
      const auto v = from.coefficients();
      const auto r = rhs.coefficients();
      auto o = next.coefficients();
      for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = b[i] + weight * ((v[i] - b[i]) + dt * r[i]);
      }
      current.push_back({c, std::move(next)});
    }
    std::swap(previous, current);
  }

  TaskOutcome outcome;
  outcome.id = {state.step, cell};
  outcome.payload = std::move(previous.front().value);
  outcome.local_dt = admissible_dt(outcome.payload);
  return outcome;
}

SolverState Solver::corrector(const SolverState& state,
                              std::span<const std::optional<CellPolynomial>> approved) const {
  if (approved.size() != state.field.size()) throw ShapeMismatch("corrector: outcome count mismatch");
  SolverState next;
  next.step = state.step + 1;
  next.time = state.time + state.global_dt;
  next.field.reserve(approved.size());
  next.dt_per_cell.reserve(approved.size());
  for (std::size_t c = 0; c < approved.size(); ++c) {
    if (!approved[c]) {
      throw MissingVerdict("corrector: cell " + std::to_string(c) + " of step " +
                           std::to_string(state.step) + " has no approved outcome");
    }
    next.field.push_back(*approved[c]);
    next.dt_per_cell.push_back(admissible_dt(next.field.back()));
  }
  next.global_dt = *std::min_element(next.dt_per_cell.begin(), next.dt_per_cell.end());
  return next;
}

double Solver::integral(const SolverState& state, int unknown) const {
  double jacobian = 1.0;
  for (int d = 0; d < grid_.dim; ++d) jacobian *= 0.5 * grid_.cell_width();
  double total = 0.0;
  for (const auto& q : state.field) {
    double cell_sum = 0.0;
    for (std::size_t node = 0; node < q.nodes(); ++node) cell_sum += node_weight(node) * q.at(unknown, node);
    total += jacobian * cell_sum;
  }
  return total;
}

void write_field_csv(std::ostream& os, const Solver& solver, const SolverState& state, bool header) {
  const int dim = solver.grid().dim;
  if (header) {
    os << "step,cell,node,x";
    if (dim == 2) os << ",y";
    os << ",rho,momentum_x";
    if (dim == 2) os << ",momentum_y";
    os << ",energy\n";
  }
  char buf[64];
  for (std::uint32_t c = 0; c < state.field.size(); ++c) {
    const auto& q = state.field[c];
    for (std::size_t node = 0; node < q.nodes(); ++node) {
      os << state.step << ',' << c << ',' << node;
      for (int d = 0; d < dim; ++d) {
        std::snprintf(buf, sizeof buf, ",%.17g", solver.node_coordinate(c, node, d));
        os << buf;
      }
      for (int u = 0; u < q.unknowns(); ++u) {
        std::snprintf(buf, sizeof buf, ",%.17g", q.at(u, node));
        os << buf;
      }
      os << '\n';
    }
  }
}

SolverState run_reference(const Solver& solver, InitialCondition ic, std::uint32_t steps) {
  SolverState state = solver.initial_state(ic);
  std::vector<std::optional<CellPolynomial>> approved(state.field.size());
  for (std::uint32_t s = 0; s < steps; ++s) {
    for (std::uint32_t c = 0; c < state.field.size(); ++c) {
      approved[c] = solver.predictor_task(c, state).payload;
    }
    state = solver.corrector(state, approved);
  }
  return state;
}

InitialCondition parse_initial_condition(const std::string& name) {
  if (name == "constant") return InitialCondition::Constant;
  if (name == "smooth_wave") return InitialCondition::SmoothWave;
  if (name == "gaussian_bump") return InitialCondition::GaussianBump;
  throw ConfigError("unknown initial condition '" + name + "'");
}

TimeScheme parse_time_scheme(const std::string& name) {
  if (name == "euler") return TimeScheme::ForwardEuler;
  if (name == "ssprk2") return TimeScheme::SspRk2;
  if (name == "ssprk3") return TimeScheme::SspRk3;
  throw ConfigError("unknown time scheme '" + name + "'");
}

const char* to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::Constant: return "constant";
    case InitialCondition::SmoothWave: return "smooth_wave";
    case InitialCondition::GaussianBump: return "gaussian_bump";
  }
  return "?";
}

const char* to_string(TimeScheme scheme) {
  switch (scheme) {
    case TimeScheme::ForwardEuler: return "euler";
    case TimeScheme::SspRk2: return "ssprk2";
    case TimeScheme::SspRk3: return "ssprk3";
  }
  return "?";
}

}  // namespace doubtfire
