#pragma once

#include <optional>
#include <string_view>

namespace ivr {

enum class Phase { Listening, Classifying, Confirming, Routed, Escalated, Abandoned };

constexpr bool is_terminal(Phase p) noexcept {
  return p == Phase::Routed || p == Phase::Escalated || p == Phase::Abandoned;
}

std::string_view to_string(Phase p) noexcept;
std::optional<Phase> parse_phase(std::string_view name) noexcept;

}  // namespace ivr
