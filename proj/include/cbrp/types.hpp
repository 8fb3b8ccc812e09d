#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace cbrp {

using NodeId = std::uint32_t;

enum class Role : std::uint8_t { Undecided, ClusterHead, ClusterMember, Dead };

enum class ProtocolMode : std::uint8_t { Cbrp, Ecbrp };

std::string_view to_string(Role role);
std::string_view to_string(ProtocolMode mode);
std::optional<ProtocolMode> parse_protocol_mode(std::string_view text);

}  // namespace cbrp
