#include "cbrp/metrics.hpp"

namespace cbrp {

std::string_view to_string(DropCause cause) {
  switch (cause) {
    case DropCause::NoRoute: return "no_route";
    case DropCause::RouteError: return "route_error";
    case DropCause::DeadForwarder: return "dead_forwarder";
    case DropCause::DeadSender: return "dead_sender";
  }
  return "?";
}

std::optional<double> pdr(const RunMetrics& metrics) {
  if (metrics.packets_sent == 0) return std::nullopt;
  return static_cast<double>(metrics.packets_delivered) / static_cast<double>(metrics.packets_sent);
}

}  // namespace cbrp
