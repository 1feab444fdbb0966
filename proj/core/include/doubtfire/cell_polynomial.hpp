#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace doubtfire {

/// Shape of a nodal cell polynomial: order p, spatial dimension and number of
/// conserved unknowns. Nodes are the tensor-product Gauss-Legendre points.
struct PolynomialShape {
  int order = 3;
  int dim = 1;
  int unknowns = 3;

  int nodes_per_dim() const { return order + 1; }
  std::size_t nodes() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(order + 1);
    return n;
  }
  std::size_t coefficient_count() const { return nodes() * static_cast<std::size_t>(unknowns); }

  friend bool operator==(const PolynomialShape&, const PolynomialShape&) = default;
};

/// Number of conserved unknowns of the Euler system in `dim` dimensions.
constexpr int euler_unknowns(int dim) { return dim + 2; }

/// Per-cell nodal solution. Coefficients are stored unknown-major: all nodes of
/// unknown 0, then all nodes of unknown 1, ... In 2D the node index is
/// ix + (p+1) * iy.
class CellPolynomial {
 public:
  CellPolynomial() = default;
  explicit CellPolynomial(PolynomialShape shape, double fill = 0.0)
      : shape_(shape), coefficients_(shape.coefficient_count(), fill) {}

  const PolynomialShape& shape() const { return shape_; }
  int order() const { return shape_.order; }
  int dim() const { return shape_.dim; }
  int unknowns() const { return shape_.unknowns; }
  std::size_t nodes() const { return shape_.nodes(); }
  std::size_t size() const { return coefficients_.size(); }

  double& at(int unknown, std::size_t node) {
    return coefficients_[static_cast<std::size_t>(unknown) * shape_.nodes() + node];
  }
  double at(int unknown, std::size_t node) const {
    return coefficients_[static_cast<std::size_t>(unknown) * shape_.nodes() + node];
  }

  std::span<double> unknown(int u) {
    return {coefficients_.data() + static_cast<std::size_t>(u) * shape_.nodes(), shape_.nodes()};
  }
  std::span<const double> unknown(int u) const {
    return {coefficients_.data() + static_cast<std::size_t>(u) * shape_.nodes(), shape_.nodes()};
  }

  std::span<double> coefficients() { return coefficients_; }
  std::span<const double> coefficients() const { return coefficients_; }

  /// Bitwise equality (NaN payloads compare equal to themselves bit for bit).
  bool bitwise_equal(const CellPolynomial& other) const;

 private:
  PolynomialShape shape_{};
  std::vector<double> coefficients_;
};

}  // namespace doubtfire
