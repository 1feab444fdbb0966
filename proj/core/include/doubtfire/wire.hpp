#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "doubtfire/resilience.hpp"
#include "doubtfire/team.hpp"

namespace doubtfire {

/// Outcome shared with the counterpart team.
struct TeamMessage {
  TeamId sender = TeamId::A;
  TaskOutcome outcome;
  double send_time = 0.0;
};

/// Little-endian wire layout:
///   u8 team | u32 step | u32 cell | u8 dubious |
///   f64 f_nan | f64 f_pa | f64 f_der | f64 f_dt | f64 local_dt |
///   u32 count | count x f64 coefficients
/// send_time travels with the channel, not in the frame.
std::vector<std::uint8_t> encode(const TeamMessage& message);

/// Decodes a frame for a receiver that knows the polynomial shape. Throws
/// doubtfire::Error on truncated frames and ShapeMismatch on a wrong count.
/// f_der_evaluated is not transmitted; it is restored as f_der != 0.
TeamMessage decode(std::span<const std::uint8_t> frame, const PolynomialShape& shape);

constexpr std::size_t frame_size(std::size_t coefficients) { return 1 + 4 + 4 + 1 + 5 * 8 + 4 + 8 * coefficients; }

}  // namespace doubtfire
