#include "doubtfire/gauss_legendre.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace doubtfire {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

LagrangeBasis::LagrangeBasis(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("LagrangeBasis: order must be >= 1");
  const int n = order + 1;
  gauss_legendre(n, nodes_, weights_);

  barycentric_.assign(static_cast<std::size_t>(n), 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) barycentric_[j] /= (nodes_[j] - nodes_[k]);
    }
  }

  d1_.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (barycentric_[j] / barycentric_[i]) / (nodes_[i] - nodes_[j]);
      d1_[i * n + j] = v;
      diag -= v;
    }
    d1_[i * n + i] = diag;
  }

  d2_.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += d1_[i * n + k] * d1_[k * n + j];
      d2_[i * n + j] = s;
    }
  }

  left_ = evaluate(-1.0);
  right_ = evaluate(1.0);
}

std::vector<double> LagrangeBasis::evaluate(double xi) const {
  const int n = size();
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    if (xi == nodes_[j]) {
      values[j] = 1.0;
      return values;
    }
  }
  for (int j = 0; j < n; ++j) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) v *= (xi - nodes_[k]) / (nodes_[j] - nodes_[k]);
    }
    values[j] = v;
  }
  return values;
}

const LagrangeBasis& basis_for(int order) {
  constexpr int kMaxOrder = 16;
  static std::array<std::unique_ptr<LagrangeBasis>, kMaxOrder + 1> cache;
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  if (order < 1 || order > kMaxOrder) throw std::invalid_argument("basis_for: unsupported order");
  std::call_once(flags[order], [order] { cache[order] = std::make_unique<LagrangeBasis>(order); });
  return *cache[order];
}

}  // namespace doubtfire
