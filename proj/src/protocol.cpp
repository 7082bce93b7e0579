#include "termite/protocol.hpp"

#include "termite/baselines.hpp"
#include "termite/termite_hill.hpp"

namespace termite {

void RoutingProtocol::start() {
  net().set_receive_handler(
      [this](NodeId self, const Frame& f) { on_packet(self, f); });
  net().set_failure_handler(
      [this](NodeId self, const Frame& f) { on_mac_failure(self, f); });
  on_start();
}

std::unique_ptr<RoutingProtocol> make_protocol(const std::string& name,
                                               RoutingProtocol::Deps deps) {
  if (name == "termite-hill")
    return std::make_unique<TermiteHill>(std::move(deps));
  if (name == "ff") return std::make_unique<FloodedForward>(std::move(deps));
  if (name == "sc") return std::make_unique<SensorCost>(std::move(deps));
  if (name == "aodv") return std::make_unique<AodvLite>(std::move(deps));
  return nullptr;
}

}  // namespace termite
