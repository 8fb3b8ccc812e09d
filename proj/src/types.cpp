#include "cbrp/types.hpp"

namespace cbrp {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Undecided: return "undecided";
    case Role::ClusterHead: return "head";
    case Role::ClusterMember: return "member";
    case Role::Dead: return "dead";
  }
  return "?";
}

std::string_view to_string(ProtocolMode mode) {
  return mode == ProtocolMode::Cbrp ? "cbrp" : "ecbrp";
}

std::optional<ProtocolMode> parse_protocol_mode(std::string_view text) {
  if (text == "cbrp") return ProtocolMode::Cbrp;
  if (text == "ecbrp") return ProtocolMode::Ecbrp;
  return std::nullopt;
}

}  // namespace cbrp
