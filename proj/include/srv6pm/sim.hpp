#pragma once

// Deterministic discrete-event network simulator: routers from a scenario
// config, links with fixed delay and seeded random loss, traffic generation,
// and a ground-truth drop oracle that attributes every lost packet to its
// (flow, block). The full event trace is a pure function of the config.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "srv6pm/counting.hpp"
#include "srv6pm/node.hpp"
#include "srv6pm/scenario.hpp"

namespace srv6pm {

// Raised when a block's ground truth is read while packets of that block are
// still in flight (sent != delivered + dropped).
struct EpochNotQuiesced : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ground-truth ledger: every monitored packet is stamped at ingress with an
// interned flow id and its marking epoch; delivery/drop events settle it.
class DropOracle {
 public:
  int intern(const FlowKey& key);
  std::optional<int> find(const FlowKey& key) const;

  void on_sent(int flow, std::uint64_t epoch);
  void on_delivered(int flow, std::uint64_t epoch);
  void on_dropped(int flow, std::uint64_t epoch);

  // Raw per-(flow, epoch) tallies; zero for untouched pairs.
  std::uint64_t sent(const FlowKey& key, std::uint64_t epoch) const;
  std::uint64_t delivered(const FlowKey& key, std::uint64_t epoch) const;
  std::uint64_t dropped(const FlowKey& key, std::uint64_t epoch) const;

  // Exact drop count for a settled block; EpochNotQuiesced while in flight.
  std::uint64_t block_drops(const FlowKey& key, std::uint64_t epoch) const;

  // Sum of drops over all epochs of the key's color up to and including
  // up_to_epoch — the ground-truth cumulative loss a color counter pair
  // should show after that block settles.
  std::uint64_t cumulative_color_drops(const FlowKey& key, Color color,
                                       std::uint64_t up_to_epoch) const;

  // Epochs this flow touched, ascending.
  std::vector<std::uint64_t> epochs(const FlowKey& key) const;

 private:
  struct Rec {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
  };
  const Rec* rec(const FlowKey& key, std::uint64_t epoch) const;

  std::unordered_map<FlowKey, int, FlowKeyHash> ids_;
  std::vector<std::map<std::uint64_t, Rec>> per_flow_;
};

enum class PacketKind : std::uint8_t { Data, Query, Response };

class Simulation final : public NodeHost {
 public:
  // Topology, routing and traffic come up immediately; policies, behaviors
  // and monitoring sessions are provisioned through the nodes' southbound
  // API (see Controller). The config must already be validated.
  explicit Simulation(const ScenarioConfig& cfg);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // --- NodeHost --------------------------------------------------------------
  std::int64_t now_ns() const override { return now_; }
  void schedule(std::int64_t at_ns, std::function<void()> fn) override;
  void originate(const std::string& node_id, Packet&& pkt) override;
  void deliver_direct(const Ipv6Addr& dst_addr, Packet&& pkt) override;
  void oracle_sent(Packet& pkt, const FlowKey& key, std::uint64_t epoch) override;
  void oracle_delivered(const Packet& pkt) override;
  void oracle_dropped(const Packet& pkt) override;

  // --- execution -------------------------------------------------------------
  // Fires all events with time <= t, in (time, insertion) order, then parks
  // the clock at t. Monotonic: earlier targets are no-ops.
  void run_until_ns(std::int64_t t_ns);
  void run_until(double seconds);

  // --- topology access -------------------------------------------------------
  Node& node(const std::string& id);            // throws std::out_of_range
  Node* find_node(const std::string& id);
  Node* node_by_address(const Ipv6Addr& addr);  // router addresses only
  std::vector<std::string> node_ids() const;    // sorted

  const ScenarioConfig& config() const { return cfg_; }
  DropOracle& oracle() { return oracle_; }
  const DropOracle& oracle() const { return oracle_; }

  struct LinkStats {
    std::string a;
    std::string b;
    std::uint64_t transmitted = 0;  // handed to the link, either direction
    std::uint64_t dropped = 0;
  };
  std::vector<LinkStats> link_stats() const;

  // --- trace -----------------------------------------------------------------
  // Order-sensitive digest of every packet visit and link drop; two runs of
  // the same config produce the same hash.
  std::uint64_t trace_hash() const { return trace_hash_; }
  // Node-id sequence a packet visited (injection + every arrival).
  std::vector<std::string> packet_path(std::uint64_t uid) const;
  std::optional<PacketKind> packet_kind(std::uint64_t uid) const;

  std::uint64_t injected_packets() const { return injected_; }
  std::uint64_t delivered_packets() const { return deliveries_; }
  std::uint64_t events_processed() const { return events_processed_; }

 private:
  struct Event {
    std::int64_t at = 0;
    std::uint64_t seq = 0;
    std::function<void()> fn;
  };
  struct EventAfter {  // max-heap comparator inverted -> (time, seq) min-heap
    bool operator()(const Event& x, const Event& y) const {
      return x.at != y.at ? x.at > y.at : x.seq > y.seq;
    }
  };

  struct LinkRuntime {
    int a = 0;  // node indices
    int b = 0;
    std::int64_t delay_ns = 0;
    double loss_rate = 0.0;
    std::mt19937_64 rng;
    std::uint64_t transmitted = 0;
    std::uint64_t dropped = 0;
  };

  struct FlowRuntime {
    int ingress = 0;  // node index
    Ipv6Addr src;
    Ipv6Addr dst;
    std::uint64_t count = 0;
    std::int64_t start_ns = 0;
    std::int64_t period_ns = 0;
    std::uint32_t payload_size = 0;
  };

  void build_routes();
  void process_at(Node& node, Packet&& pkt);
  void link_transmit(int from, const std::string& to_id, Packet&& pkt);
  void arrive(int node_idx, Packet&& pkt);
  void emit_flow_packet(std::size_t flow_idx, std::uint64_t k);
  void record_visit(int node_idx, std::uint64_t uid);
  void fold_trace(std::uint64_t a, std::uint64_t b, std::uint64_t c);
  int node_index(const std::string& id) const;  // -1 if unknown

  ScenarioConfig cfg_;
  std::int64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_uid_ = 0;
  std::uint64_t injected_ = 0;
  std::uint64_t deliveries_ = 0;
  std::uint64_t events_processed_ = 0;
  std::vector<Event> heap_;

  std::vector<std::unique_ptr<Node>> nodes_;  // parallel to cfg_.nodes
  std::unordered_map<std::string, int> node_index_;
  std::unordered_map<Ipv6Addr, int, Ipv6AddrHash> address_owner_;
  std::vector<LinkRuntime> links_;
  std::map<std::pair<int, int>, std::size_t> adjacency_;  // directed -> link
  std::vector<FlowRuntime> flows_;

  DropOracle oracle_;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
  std::unordered_map<std::uint64_t, std::vector<int>> visits_;
  std::unordered_map<std::uint64_t, PacketKind> kinds_;
};

// Parses, validates and constructs in one step (ParseError/ValidationError).
std::unique_ptr<Simulation> load_scenario(const std::string& config_text);

}  // namespace srv6pm
