#pragma once

// Per-flow TX/RX counting engine. One instance lives inside each router and
// mirrors a kernel-offload layout: 32 lookup tables (2 directions x 16
// segment-count classes), each flow holding per-color, per-worker counter
// shards so the packet path touches one atomic pair and nothing else.

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srv6pm/addr.hpp"
#include "srv6pm/packet.hpp"

namespace srv6pm {

// Ingress counts packets entering the monitored path (TX side), Egress counts
// packets leaving it (RX side). The direction is part of the flow key: the
// same segment list can be monitored independently in both roles.
enum class FlowDirection : std::uint8_t { Ingress = 0, Egress = 1 };

inline const char* direction_name(FlowDirection d) {
  return d == FlowDirection::Ingress ? "ingress" : "egress";
}

struct FlowKey {
  FlowDirection direction = FlowDirection::Ingress;
  SidList sids;

  bool operator==(const FlowKey&) const = default;
  auto operator<=>(const FlowKey&) const = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const {
    std::uint64_t h = SidListHash{}(k.sids);
    return static_cast<std::size_t>(
        h ^ (static_cast<std::uint64_t>(k.direction) * 0x9e3779b97f4a7c15ULL));
  }
};

struct AlreadyMonitored : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotMonitored : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// set_active_color must advance the epoch by exactly one.
struct EpochSkew : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CounterSnapshot {
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  std::uint64_t epoch_at_read = 0;  // engine epoch when the snapshot was taken
  bool active_read = false;         // the color read was active at that moment
};

class CountingEngine {
 public:
  explicit CountingEngine(unsigned workers = 1);

  CountingEngine(const CountingEngine&) = delete;
  CountingEngine& operator=(const CountingEngine&) = delete;

  unsigned workers() const { return workers_; }

  // Current marking epoch; the active color is its parity (even = R).
  std::uint64_t current_epoch() const {
    return epoch_.load(std::memory_order_acquire);
  }
  Color active_color() const { return color_of_epoch(current_epoch()); }

  // Advances the epoch. new_epoch must be exactly current + 1, else EpochSkew.
  // Counters are never reset: they are cumulative across the engine lifetime.
  void set_active_color(std::uint64_t new_epoch);

  // Registers a flow with all counters zero. Throws AlreadyMonitored.
  void add_monitored_flow(const FlowKey& key);

  // Unregisters a flow, returning its final {R, B} snapshots. NotMonitored if
  // the key was never added (or already removed).
  std::pair<CounterSnapshot, CounterSnapshot> remove_monitored_flow(const FlowKey& key);

  // Hot path. Adds one packet of `bytes` bytes under `color` to the flow's
  // shard for worker_id. Returns false (and counts nothing) when the flow is
  // not monitored. Never throws, never blocks on other counters.
  bool count_packet(const FlowKey& key, Color color, std::uint32_t bytes,
                    unsigned worker_id = 0) noexcept;

  // Non-destructive read: sums the shards for one color. active_read reports
  // whether that color was the active one at read time (a reader should wait
  // out the delay margin so it only ever sees settled blocks; the flag makes
  // violations observable instead of silent). Throws NotMonitored.
  CounterSnapshot read_counters(const FlowKey& key, Color color) const;

  // Monitored keys for one direction, in deterministic (sorted) order.
  std::vector<FlowKey> list_flows(FlowDirection direction) const;

  std::size_t flow_count() const;

 private:
  struct alignas(64) Cell {
    std::atomic<std::uint64_t> packets{0};
    std::atomic<std::uint64_t> bytes{0};
  };

  // Per-flow counter block: 2 colors x workers cells.
  struct FlowCounters {
    explicit FlowCounters(unsigned workers)
        : cells(std::make_unique<Cell[]>(2 * static_cast<std::size_t>(workers))) {}
    std::unique_ptr<Cell[]> cells;
  };

  using Table = std::unordered_map<SidList, FlowCounters, SidListHash>;

  Cell& cell(FlowCounters& fc, Color c, unsigned worker) const {
    return fc.cells[static_cast<std::size_t>(c) * workers_ + worker];
  }
  const Cell& cell(const FlowCounters& fc, Color c, unsigned worker) const {
    return fc.cells[static_cast<std::size_t>(c) * workers_ + worker];
  }

  // Table index: direction picks the bank, segment count picks the slot.
  // Returns -1 for segment counts outside 1..16 (such keys are never valid).
  static int table_index(const FlowKey& key);

  unsigned workers_;
  std::atomic<std::uint64_t> epoch_{0};
  mutable std::shared_mutex mu_;  // guards table structure, not the cells
  std::array<Table, 32> tables_;
};

}  // namespace srv6pm
