#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "doubtfire/cell_polynomial.hpp"

namespace doubtfire {

/// Identifies one predictor task instance: (time step, cell).
struct TaskId {
  std::uint32_t step = 0;
  std::uint32_t cell = 0;

  friend auto operator<=>(const TaskId&, const TaskId&) = default;
};

enum class EvaluationMode { Rigorous, Lazy };

/// Error criterion values of one outcome. f_nan and f_pa are boolean-valued
/// (0 or +inf); f_der and f_dt are relative changes. An unevaluated f_der is 0.
struct CriteriaVector {
  double f_nan = 0.0;
  double f_pa = 0.0;
  double f_der = 0.0;
  double f_dt = 0.0;
  bool f_der_evaluated = false;

  /// Values in cascade order (NaN, PA, Der, dt).
  double operator[](std::size_t k) const;
  static constexpr std::size_t size() { return 4; }
};

struct Tolerances {
  double tol_y = 0.0;
  double tol_dt = 0.0;
  double tol_der = 0.0;
  EvaluationMode mode = EvaluationMode::Rigorous;
};

struct TaskOutcome {
  TaskId id;
  CellPolynomial payload;
  double local_dt = 0.0;
  CriteriaVector criteria;
  bool dubious = false;
};

struct Verdict {
  enum class Kind { AcceptLocal, AdoptRemote, ModerateKeepLocal, Fatal };

  Kind kind = Kind::AcceptLocal;
  std::optional<std::string> warning;
  /// True when both outcomes were present and their payloads disagreed.
  bool disagreement = false;
};

enum class Likelihood { A, B, Undecided };

/// Boolean error indicator.
///
/// Rigorous: (f_nan>0) or (f_pa>0) or (f_der>tol_der) or (f_dt>tol_dt).
/// Lazy: the cheap pre-filter (f_nan>0) or (f_pa>0) or (f_dt>tol_dt) must fire
/// and f_der must exceed tol_der. Comparisons against tolerances are strict.
bool dubiosity(const CriteriaVector& criteria, const Tolerances& tol);

/// Just the lazy pre-filter (NaN, PA and dt criteria).
bool prefilter_fires(const CriteriaVector& criteria, const Tolerances& tol);

/// Confidence vote: walks f_nan, f_pa, f_der, f_dt and returns the outcome with
/// the smaller value at the first index where the two differ.
Likelihood more_likely(const CriteriaVector& a, const CriteriaVector& b);

/// Relative agreement test max_c |a_c-b_c| / max(|a_c|,|b_c|,1e-300) <= tol_y.
/// Any NaN coefficient makes the payloads disagree. Throws ShapeMismatch.
bool outcomes_agree(const CellPolynomial& a, const CellPolynomial& b, double tol_y);

/// Decision procedure for one task given the local and/or remote outcome.
/// Throws NeedLocalComputation when only a dubious remote outcome is present.
Verdict resolve(const std::optional<TaskOutcome>& local,
                const std::optional<TaskOutcome>& remote,
                const Tolerances& tol);

const char* to_string(Verdict::Kind kind);
const char* to_string(EvaluationMode mode);

}  // namespace doubtfire
