#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doubtfire/cell_polynomial.hpp"
#include "doubtfire/resilience.hpp"

namespace doubtfire {

/// Uniform periodic Cartesian grid on the unit square/interval.
struct Grid {
  int cells_per_dim = 20;
  int dim = 1;

  double cell_width() const { return 1.0 / cells_per_dim; }
  std::size_t cell_count() const;
  /// Periodic neighbour of `cell` in direction `dir`, `side` = -1 or +1.
  std::uint32_t neighbor(std::uint32_t cell, int dir, int side) const;
  /// Lower-left corner coordinate of `cell` along `dir`.
  double origin(std::uint32_t cell, int dir) const;
};

enum class InitialCondition { Constant, SmoothWave, GaussianBump };
enum class TimeScheme { ForwardEuler, SspRk2, SspRk3 };

struct SolverOptions {
  int order = 3;
  double cfl = 0.5;
  double gamma = 1.4;
  TimeScheme scheme = TimeScheme::SspRk3;
};

struct SolverState {
  std::uint32_t step = 0;
  double time = 0.0;
  std::vector<CellPolynomial> field;
  std::vector<double> dt_per_cell;
  double global_dt = 0.0;
};

/// Explicit nodal DG discretisation of the compressible Euler equations with
/// Rusanov interface fluxes.
///
/// A predictor task advances one cell by a full time step using only the
/// previous accepted field: multi-stage schemes recompute the neighbouring
/// stage values they need locally, so tasks of one step are independent.
class Solver {
 public:
  Solver(Grid grid, SolverOptions options);

  const Grid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }
  PolynomialShape shape() const { return shape_; }

  SolverState initial_state(InitialCondition kind) const;

  /// Candidate update of `cell` over state.global_dt. Criteria are left empty;
  /// local_dt is the admissible step size of the candidate.
  TaskOutcome predictor_task(std::uint32_t cell, const SolverState& state) const;

  /// CFL * h / ((2p+1) * lambda_max), or 0 when some node is not admissible.
  double admissible_dt(const CellPolynomial& q) const;

  /// Installs the approved payloads and advances time by the old global dt.
  /// Throws MissingVerdict if any cell has no approved payload.
  SolverState corrector(const SolverState& state,
                        std::span<const std::optional<CellPolynomial>> approved) const;

  /// Right-hand side du/dt of one cell given its periodic neighbours' values.
  void residual(const CellPolynomial& self, std::span<const CellPolynomial* const> neighbors,
                CellPolynomial& out) const;

  /// Sum over cells of the quadrature integral of unknown `u` (0 = mass).
  double integral(const SolverState& state, int unknown = 0) const;

  /// Physical coordinate of node `node` of `cell` along `dir`.
  double node_coordinate(std::uint32_t cell, std::size_t node, int dir) const;

  /// Tensor-product quadrature weight of `node` on the reference cell.
  double node_weight(std::size_t node) const;

 private:
  Grid grid_;
  SolverOptions options_;
  PolynomialShape shape_;
};

/// CSV dump: step,cell,node,x[,y],rho,momentum_x[,momentum_y],energy
void write_field_csv(std::ostream& os, const Solver& solver, const SolverState& state,
                     bool header = true);

/// Runs a single team without any checking or sharing.
SolverState run_reference(const Solver& solver, InitialCondition ic, std::uint32_t steps);

InitialCondition parse_initial_condition(const std::string& name);
TimeScheme parse_time_scheme(const std::string& name);
const char* to_string(InitialCondition ic);
const char* to_string(TimeScheme scheme);

}  // namespace doubtfire
