#pragma once

#include <span>
#include <vector>

namespace doubtfire {

/// Nodal Lagrange basis on the Gauss-Legendre points of the reference cell
/// [-1, 1], with quadrature weights, boundary values and differentiation
/// matrices. Matrices are row-major with entry (i, j) = l_j^(k)(x_i).
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int order);

  int order() const { return order_; }
  int size() const { return order_ + 1; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> first_derivative() const { return d1_; }
  std::span<const double> second_derivative() const { return d2_; }
  /// l_j(-1) and l_j(+1).
  std::span<const double> left_values() const { return left_; }
  std::span<const double> right_values() const { return right_; }

  /// Values l_j(xi) of every basis function at a reference coordinate.
  std::vector<double> evaluate(double xi) const;

 private:
  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> barycentric_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> left_;
  std::vector<double> right_;
};

/// Shared immutable basis for the given order (built once, thread-safe).
const LagrangeBasis& basis_for(int order);

/// Gauss-Legendre nodes and weights with n points on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace doubtfire
