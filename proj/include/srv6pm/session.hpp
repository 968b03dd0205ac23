#pragma once

// Monitoring-session state and the interval-loss arithmetic. A session binds
// a forward and a reverse segment list between a sender and a reflector node;
// the sender side owns the session record and turns cumulative counter
// samples into per-interval loss reports by differencing consecutive
// same-color cumulative values.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srv6pm/addr.hpp"
#include "srv6pm/southbound.hpp"

namespace srv6pm {

enum class SessionState : std::uint8_t { Running, Stopped };

// One cumulative counter observation for a settled block: the sender's TX
// and the far end's RX for the block's color, as of read_timestamp_ns.
struct LossSample {
  std::uint64_t block_epoch = 0;
  std::uint64_t tx_cum = 0;
  std::uint64_t rx_cum = 0;
  std::int64_t read_timestamp_ns = 0;
  std::uint8_t flags = 0;  // pre-set anomaly bits (e.g. active-color read)
};

// Maps an 8-bit wire block number back to a full epoch: the epoch congruent
// to `wire_block` mod 256 that lies nearest to `reference`. Ties (distance
// exactly 128) resolve downward.
std::uint64_t resolve_block_epoch(std::uint8_t wire_block, std::uint64_t reference);

class MonitoringSession {
 public:
  MonitoringSession(std::uint32_t measure_id, SidList sdlist, SidList sdlistreverse,
                    std::string sender_node, std::string reflector_node,
                    ColorOptions color_options);

  std::uint32_t measure_id() const { return measure_id_; }
  const SidList& sdlist() const { return sdlist_; }
  const SidList& sdlistreverse() const { return sdlistreverse_; }
  const std::string& sender_node() const { return sender_node_; }
  const std::string& reflector_node() const { return reflector_node_; }
  const ColorOptions& color_options() const { return color_options_; }

  SessionState state() const { return state_; }
  void stop() { state_ = SessionState::Stopped; }
  bool running() const { return state_ == SessionState::Running; }

  // Folds a new cumulative sample for block b into an interval report:
  //   cumulative_loss(b) = tx_cum(b) - rx_cum(b)
  //   interval_*(b)      = cumulative_*(b) - cumulative_*(previous same-color
  //                        block), zero baseline for the first sample.
  // rx > tx marks the report NegativeLoss (anomalous, still recorded).
  // Throws std::invalid_argument if b is not newer than the previous
  // same-color sample (stale or duplicate block).
  LossReport compute_interval_loss(MeasureDirection direction, const LossSample& s);

  // All reports so far, ordered by (block_epoch, direction). Non-destructive.
  std::vector<LossReport> reports() const;

  std::size_t report_count() const { return records_.size(); }

 private:
  struct Lane {  // one (direction, color) differencing lane
    bool has_prev = false;
    std::uint64_t prev_epoch = 0;
    std::uint64_t prev_tx = 0;
    std::uint64_t prev_rx = 0;
    std::int64_t prev_loss = 0;
  };

  Lane& lane(MeasureDirection d, Color c) {
    return lanes_[static_cast<std::size_t>(d) * 2 + static_cast<std::size_t>(c)];
  }

  std::uint32_t measure_id_;
  SidList sdlist_;
  SidList sdlistreverse_;
  std::string sender_node_;
  std::string reflector_node_;
  ColorOptions color_options_;
  SessionState state_ = SessionState::Running;
  std::array<Lane, 4> lanes_;
  std::vector<LossReport> records_;
};

}  // namespace srv6pm
