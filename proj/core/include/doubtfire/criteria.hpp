#pragma once

#include <string>

#include "doubtfire/cell_polynomial.hpp"
#include "doubtfire/resilience.hpp"

namespace doubtfire {

/// Which criteria take part in evaluation. Disabled criteria report 0, which
/// never exceeds a (non-negative) tolerance.
struct CriterionSet {
  bool nan = true;
  bool pa = true;
  bool dt = true;
  bool der = true;

  bool any_cheap() const { return nan || pa || dt; }
  bool none() const { return !nan && !pa && !dt && !der; }

  static CriterionSet all() { return {}; }
  static CriterionSet disabled() { return {false, false, false, false}; }
  static CriterionSet pa_nan() { return {true, true, false, false}; }
  static CriterionSet dt_only() { return {false, false, true, false}; }
  static CriterionSet der_only() { return {false, false, false, true}; }

  friend bool operator==(const CriterionSet&, const CriterionSet&) = default;
};

/// Parses "all", "none", "pa_nan", "dt" or "der".
CriterionSet parse_criterion_set(const std::string& name);
std::string to_string(const CriterionSet& set);

struct CriteriaConfig {
  double gamma = 1.4;
  Tolerances tol;
  double denom_floor = 1e-12;
  /// Cell width h; second derivatives are scaled by (2/h)^2.
  double cell_width = 1.0;
  CriterionSet enabled;
  /// Sum the smoothness criterion over every unknown instead of density only.
  bool der_all_unknowns = true;
};

/// +inf if any coefficient is NaN or +-inf, else 0.
double f_nan(const CellPolynomial& y);

/// +inf if some node has rho <= 0 or reconstructed pressure <= 0, else 0.
double f_pa(const CellPolynomial& y, double gamma);

/// |dt_new - dt_old| / dt_old. Without a positive history value the change is
/// 0 if both agree and +inf otherwise.
double f_dt(double dt_new, double dt_old);

/// Smoothness evolution: per direction d the node average of
/// |D2 y_new - D2 y_old| / max(|D2 y_old|, denom_floor), summed over
/// directions (and unknowns when `all_unknowns`). NaN propagates.
/// Throws ShapeMismatch.
double f_der(const CellPolynomial& y_new, const CellPolynomial& y_old, double cell_width,
             double denom_floor, bool all_unknowns = false);

/// Second derivative along `dir` of unknown `u` at every node.
void second_derivative(const CellPolynomial& y, int u, int dir, double cell_width, std::span<double> out);

/// Evaluates the enabled criteria in the configured mode. In lazy mode f_der is
/// only computed if the NaN/PA/dt pre-filter fired. A NaN f_der maps to +inf.
CriteriaVector evaluate(const CellPolynomial& y_new, const CellPolynomial& y_old, double dt_new,
                        double dt_old, const CriteriaConfig& cfg);

}  // namespace doubtfire
