#include "doubtfire/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "doubtfire/errors.hpp"

namespace doubtfire {

namespace {

constexpr double kRelativeFloor = 1e-300;

bool hard_corrupt(const CriteriaVector& c) {
  return std::isinf(c.f_nan) || std::isinf(c.f_pa);
}

}  // namespace

double CriteriaVector::operator[](std::size_t k) const {
  switch (k) {
    case 0: return f_nan;
    case 1: return f_pa;
    case 2: return f_der;
    case 3: return f_dt;
    default: throw std::out_of_range("criteria index");
  }
}

bool CellPolynomial::bitwise_equal(const CellPolynomial& other) const {
  if (shape_ != other.shape_) return false;
  return std::memcmp(coefficients_.data(), other.coefficients_.data(),
                     coefficients_.size() * sizeof(double)) == 0;
}

bool prefilter_fires(const CriteriaVector& c, const Tolerances& tol) {
  return c.f_nan > 0.0 || c.f_pa > 0.0 || c.f_dt > tol.tol_dt;
}

bool dubiosity(const CriteriaVector& c, const Tolerances& tol) {
  if (tol.mode == EvaluationMode::Rigorous) {
    return c.f_nan > 0.0 || c.f_pa > 0.0 || c.f_der > tol.tol_der || c.f_dt > tol.tol_dt;
  }
  return prefilter_fires(c, tol) && c.f_der > tol.tol_der;
}

Likelihood more_likely(const CriteriaVector& a, const CriteriaVector& b) {
  for (std::size_t k = 0; k < CriteriaVector::size(); ++k) {
    const double fa = a[k];
    const double fb = b[k];
    if (fa == fb) continue;
    // NaN never appears in an evaluated vector; treat it as the larger value.
    if (std::isnan(fa) && std::isnan(fb)) continue;
    if (std::isnan(fa)) return Likelihood::B;
    if (std::isnan(fb)) return Likelihood::A;
    return fa < fb ? Likelihood::A : Likelihood::B;
  }
  return Likelihood::Undecided;
}

bool outcomes_agree(const CellPolynomial& a, const CellPolynomial& b, double tol_y) {
  if (a.shape() != b.shape()) {
    throw ShapeMismatch("outcomes_agree: payload shapes differ");
  }
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const double x = ca[i];
    const double y = cb[i];
    if (std::isnan(x) || std::isnan(y)) return false;
    if (x == y) continue;
    const double denom = std::max({std::abs(x), std::abs(y), kRelativeFloor});
    const double rel = std::abs(x - y) / denom;
    // inf - inf of the same sign is handled by x == y above.
    if (!(rel <= tol_y)) return false;
  }
  return true;
}

Verdict resolve(const std::optional<TaskOutcome>& local,
                const std::optional<TaskOutcome>& remote,
                const Tolerances& tol) {
  using Kind = Verdict::Kind;
  if (!local && !remote) {
    throw std::invalid_argument("resolve: neither local nor remote outcome present");
  }
  if (local && !remote) {
    // A dubious local outcome without a counterpart cannot be decided yet;
    // the harness parks it behind a check task instead of calling resolve.
    if (local->dubious) {
      throw std::logic_error("resolve: dubious local outcome needs its remote counterpart");
    }
    return {Kind::AcceptLocal, std::nullopt, false};
  }
  if (!local) {
    if (remote->dubious) {
      throw NeedLocalComputation("resolve: remote outcome is dubious, compute locally");
    }
    return {Kind::AdoptRemote, std::nullopt, false};
  }

  if (hard_corrupt(local->criteria) && hard_corrupt(remote->criteria)) {
    return {Kind::Fatal, std::string("both teams report NaN or inadmissible outcomes"),
            !outcomes_agree(local->payload, remote->payload, tol.tol_y)};
  }
  if (outcomes_agree(local->payload, remote->payload, tol.tol_y)) {
    return {Kind::AcceptLocal, std::nullopt, false};
  }
  switch (more_likely(local->criteria, remote->criteria)) {
    case Likelihood::B: return {Kind::AdoptRemote, std::nullopt, true};
    case Likelihood::A: return {Kind::AcceptLocal, std::nullopt, true};
    case Likelihood::Undecided: break;
  }
  return {Kind::ModerateKeepLocal, std::string("silent error could not be corrected"), true};
}

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::AcceptLocal: return "accept-local";
    case Verdict::Kind::AdoptRemote: return "adopt-remote";
    case Verdict::Kind::ModerateKeepLocal: return "moderate-keep-local";
    case Verdict::Kind::Fatal: return "fatal";
  }
  return "?";
}

const char* to_string(EvaluationMode mode) {
  return mode == EvaluationMode::Rigorous ? "rigorous" : "lazy";
}

}  // namespace doubtfire
