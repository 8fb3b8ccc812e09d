#include "cbrp/snapshot.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cbrp/simulator.hpp"

namespace cbrp {
namespace {

const char* fill_for(Role role) {
  switch (role) {
    case Role::ClusterHead: return "blue";
    case Role::ClusterMember: return "black";
    case Role::Dead: return "red";
    case Role::Undecided: return "gray";
  }
  return "gray";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<SnapshotNode> snapshot_nodes(const Simulator& sim) {
  std::vector<SnapshotNode> out;
  for (const Node& n : sim.nodes()) {
    SnapshotNode s;
    s.id = n.id;
    s.position = n.position;
    s.role = n.cluster.role;
    s.head = n.cluster.role == Role::ClusterMember ? n.cluster.head : std::nullopt;
    s.weight = n.cluster.weight;
    out.push_back(s);
  }
  return out;
}

std::string render_svg(std::span<const SnapshotNode> nodes, const Area& area, double range,
                       const SnapshotOptions& options) {
  const double k = options.scale;
  const double margin = 10.0;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << area.width * k + 2 * margin
     << "\" height=\"" << area.height * k + 2 * margin << "\">\n";
  if (!options.title.empty()) os << "  <title>" << escape(options.title) << "</title>\n";
  os << "  <g transform=\"translate(" << margin << "," << margin << ")\">\n";
  os << "    <rect x=\"0\" y=\"0\" width=\"" << area.width * k << "\" height=\"" << area.height * k
     << "\" fill=\"white\" stroke=\"#888\"/>\n";

  std::map<NodeId, const SnapshotNode*> by_id;
  for (const auto& n : nodes) by_id[n.id] = &n;

  for (const auto& n : nodes) {
    const bool circle = n.role != Role::Dead && (options.range_circles || options.highlight == n.id);
    if (!circle) continue;
    os << "    <circle class=\"range\" cx=\"" << n.position.x * k << "\" cy=\"" << n.position.y * k
       << "\" r=\"" << range * k << "\" fill=\"none\" stroke=\"#9bb\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const auto& n : nodes) {
    if (n.role != Role::ClusterMember || !n.head) continue;
    auto it = by_id.find(*n.head);
    if (it == by_id.end()) continue;
    const Position h = it->second->position;
    os << "    <line class=\"membership\" x1=\"" << n.position.x * k << "\" y1=\"" << n.position.y * k
       << "\" x2=\"" << h.x * k << "\" y2=\"" << h.y * k << "\" stroke=\"#bbb\"/>\n";
  }

  for (const auto& n : nodes) {
    const double r = n.role == Role::ClusterHead ? 6.0 : 4.0;
    os << "    <circle class=\"node\" id=\"n" << n.id << "\" cx=\"" << n.position.x * k << "\" cy=\""
       << n.position.y * k << "\" r=\"" << r << "\" fill=\"" << fill_for(n.role) << "\"/>\n";
    os << "    <text x=\"" << n.position.x * k + 7 << "\" y=\"" << n.position.y * k - 5
       << "\" font-size=\"9\">" << n.id;
    if (options.weight_labels || options.highlight == n.id) os << " W=" << n.weight;
    os << "</text>\n";
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

void write_snapshot(const Simulator& sim, const std::filesystem::path& path, const SnapshotOptions& options) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot to " + path.string());
  const auto nodes = snapshot_nodes(sim);
  out << render_svg(nodes, sim.config().area(), sim.config().tx_range_m, options);
  if (!out) throw std::runtime_error("failed writing snapshot to " + path.string());
}

}  // namespace cbrp
