#pragma once

#include <cstddef>
#include <cstdint>

namespace doubtfire {

enum class TeamId : std::uint8_t { A = 0, B = 1 };

constexpr TeamId other(TeamId t) { return t == TeamId::A ? TeamId::B : TeamId::A; }
constexpr std::size_t index(TeamId t) { return static_cast<std::size_t>(t); }
constexpr char team_letter(TeamId t) { return t == TeamId::A ? 'A' : 'B'; }

}  // namespace doubtfire
