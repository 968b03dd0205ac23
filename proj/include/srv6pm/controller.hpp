#pragma once

// The measurement controller: provisions SRv6 entities and monitoring
// sessions over the routers' southbound API — always through the encoded
// message frames, exactly as a remote controller would — and harvests loss
// reports into record sinks.

#include <stdexcept>
#include <string>
#include <vector>

#include "srv6pm/collect.hpp"
#include "srv6pm/sim.hpp"

namespace srv6pm {

// A southbound call came back with a non-Ok status during orchestration.
struct ControllerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Controller {
 public:
  explicit Controller(Simulation& sim) : sim_(sim) {}

  void add_sink(RecordSink& sink) { sinks_.push_back(&sink); }

  // Provisions local behaviors (including each node's punt behavior),
  // policies, then sessions (reflector before its sender, so no query can
  // arrive unanswered). Throws ControllerError on any rejected call.
  void apply_scenario();

  // Stops every session the scenario started, sender and reflector sides.
  void stop_all();

  // Retrieves every session's reports and publishes them as records to all
  // sinks in (session, epoch, direction) order. Returns records published.
  std::size_t collect();

  TopologyRecord topology() const { return topology_from_config(sim_.config()); }

 private:
  Simulation& sim_;
  std::vector<RecordSink*> sinks_;
};

}  // namespace srv6pm
