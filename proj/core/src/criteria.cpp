#include "doubtfire/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "doubtfire/errors.hpp"
#include "doubtfire/euler.hpp"
#include "doubtfire/gauss_legendre.hpp"

namespace doubtfire {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CriterionSet parse_criterion_set(const std::string& name) {
  if (name == "all") return CriterionSet::all();
  if (name == "none") return CriterionSet::disabled();
  if (name == "pa_nan") return CriterionSet::pa_nan();
  if (name == "dt") return CriterionSet::dt_only();
  if (name == "der") return CriterionSet::der_only();
  throw ConfigError("unknown criterion set '" + name + "'");
}

std::string to_string(const CriterionSet& set) {
  if (set == CriterionSet::all()) return "all";
  if (set == CriterionSet::disabled()) return "none";
  if (set == CriterionSet::pa_nan()) return "pa_nan";
  if (set == CriterionSet::dt_only()) return "dt";
  if (set == CriterionSet::der_only()) return "der";
  std::string s;
  if (set.nan) s += "nan+";
  if (set.pa) s += "pa+";
  if (set.dt) s += "dt+";
  if (set.der) s += "der+";
  s.pop_back();
  return s;
}

double f_nan(const CellPolynomial& y) {
  for (double c : y.coefficients()) {
    if (!std::isfinite(c)) return kInf;
  }
  return 0.0;
}

double f_pa(const CellPolynomial& y, double gamma) {
  const int dim = y.dim();
  std::array<double, 4> q{};
  for (std::size_t node = 0; node < y.nodes(); ++node) {
    for (int u = 0; u < y.unknowns(); ++u) q[u] = y.at(u, node);
    if (!euler::admissible({q.data(), static_cast<std::size_t>(y.unknowns())}, dim, gamma)) return kInf;
  }
  return 0.0;
}

double f_dt(double dt_new, double dt_old) {
  if (!(dt_old > 0.0)) return dt_new == dt_old ? 0.0 : kInf;
  return std::abs(dt_new - dt_old) / dt_old;
}

void second_derivative(const CellPolynomial& y, int u, int dir, double cell_width, std::span<double> out) {
  const auto& basis = basis_for(y.order());
  const int n = basis.size();
  const auto d2 = basis.second_derivative();
  const double scale = (2.0 / cell_width) * (2.0 / cell_width);
  const auto values = y.unknown(u);
  const int lines = static_cast<int>(y.nodes()) / n;
  for (int line = 0; line < lines; ++line) {
    auto node = [&](int k) -> std::size_t {
      if (y.dim() == 1) return static_cast<std::size_t>(k);
      return dir == 0 ? static_cast<std::size_t>(k + n * line) : static_cast<std::size_t>(line + n * k);
    };
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += d2[i * n + k] * values[node(k)];
      out[node(i)] = scale * s;
    }
  }
}

double f_der(const CellPolynomial& y_new, const CellPolynomial& y_old, double cell_width,
             double denom_floor, bool all_unknowns) {
  if (y_new.shape() != y_old.shape()) throw ShapeMismatch("f_der: payload shapes differ");
  const std::size_t nodes = y_new.nodes();
  std::vector<double> d2_new(nodes), d2_old(nodes);
  const int unknown_count = all_unknowns ? y_new.unknowns() : 1;
  double total = 0.0;
  for (int u = 0; u < unknown_count; ++u) {
    for (int dir = 0; dir < y_new.dim(); ++dir) {
      second_derivative(y_new, u, dir, cell_width, d2_new);
      second_derivative(y_old, u, dir, cell_width, d2_old);
      double sum = 0.0;
      for (std::size_t k = 0; k < nodes; ++k) {
        sum += std::abs(d2_new[k] - d2_old[k]) / std::max(std::abs(d2_old[k]), denom_floor);
      }
      total += sum / static_cast<double>(nodes);
    }
  }
  return total;
}

CriteriaVector evaluate(const CellPolynomial& y_new, const CellPolynomial& y_old, double dt_new,
                        double dt_old, const CriteriaConfig& cfg) {
  if (y_new.shape() != y_old.shape()) throw ShapeMismatch("evaluate: payload shapes differ");
  CriteriaVector c;
  if (cfg.enabled.nan) c.f_nan = f_nan(y_new);
  if (cfg.enabled.pa) c.f_pa = f_pa(y_new, cfg.gamma);
  if (cfg.enabled.dt) c.f_dt = f_dt(dt_new, dt_old);
  if (std::isnan(c.f_dt)) c.f_dt = kInf;

  bool want_der = cfg.enabled.der;
  if (cfg.tol.mode == EvaluationMode::Lazy) want_der = want_der && prefilter_fires(c, cfg.tol);
  if (want_der) {
    c.f_der = f_der(y_new, y_old, cfg.cell_width, cfg.denom_floor, cfg.der_all_unknowns);
    if (std::isnan(c.f_der)) c.f_der = kInf;
    c.f_der_evaluated = true;
  }
  return c;
}

}  // namespace doubtfire
