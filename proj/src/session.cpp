#include "srv6pm/session.hpp"

#include <algorithm>
#include <stdexcept>

namespace srv6pm {

std::uint64_t resolve_block_epoch(std::uint8_t wire_block, std::uint64_t reference) {
  // Epochs congruent to wire_block mod 256 nearest to the reference: one at or
  // below the reference's 256-aligned base, and its neighbors either side.
  std::uint64_t base = reference & ~std::uint64_t{0xff};
  std::uint64_t best = 0;
  std::uint64_t best_dist = ~std::uint64_t{0};
  for (int step = -1; step <= 1; ++step) {
    if (step < 0 && base < 256) continue;
    std::uint64_t candidate = base + static_cast<std::uint64_t>(step) * 256 + wire_block;
    std::uint64_t dist =
        candidate > reference ? candidate - reference : reference - candidate;
    if (dist < best_dist || (dist == best_dist && candidate < best)) {
      best = candidate;
      best_dist = dist;
    }
  }
  return best;
}

MonitoringSession::MonitoringSession(std::uint32_t measure_id, SidList sdlist,
                                     SidList sdlistreverse, std::string sender_node,
                                     std::string reflector_node,
                                     ColorOptions color_options)
    : measure_id_(measure_id),
      sdlist_(std::move(sdlist)),
      sdlistreverse_(std::move(sdlistreverse)),
      sender_node_(std::move(sender_node)),
      reflector_node_(std::move(reflector_node)),
      color_options_(color_options) {}

LossReport MonitoringSession::compute_interval_loss(MeasureDirection direction,
                                                    const LossSample& s) {
  Color color = color_of_epoch(s.block_epoch);
  Lane& ln = lane(direction, color);
  if (ln.has_prev && s.block_epoch <= ln.prev_epoch)
    throw std::invalid_argument(
        "stale sample: block " + std::to_string(s.block_epoch) + " not newer than " +
        std::to_string(ln.prev_epoch));

  LossReport rep;
  rep.measure_id = measure_id_;
  rep.block_epoch = s.block_epoch;
  rep.color = color;
  rep.direction = direction;
  rep.cumulative_tx = s.tx_cum;
  rep.cumulative_rx = s.rx_cum;
  rep.cumulative_loss =
      static_cast<std::int64_t>(s.tx_cum) - static_cast<std::int64_t>(s.rx_cum);
  rep.interval_tx = s.tx_cum - (ln.has_prev ? ln.prev_tx : 0);
  rep.interval_rx = s.rx_cum - (ln.has_prev ? ln.prev_rx : 0);
  rep.interval_loss = rep.cumulative_loss - (ln.has_prev ? ln.prev_loss : 0);
  rep.read_timestamp_ns = s.read_timestamp_ns;
  rep.flags = s.flags;
  if (rep.interval_loss < 0 || rep.cumulative_loss < 0)
    rep.flags |= kReportFlagNegativeLoss;

  ln.has_prev = true;
  ln.prev_epoch = s.block_epoch;
  ln.prev_tx = s.tx_cum;
  ln.prev_rx = s.rx_cum;
  ln.prev_loss = rep.cumulative_loss;

  records_.push_back(rep);
  return rep;
}

std::vector<LossReport> MonitoringSession::reports() const {
  std::vector<LossReport> out = records_;
  std::stable_sort(out.begin(), out.end(), [](const LossReport& a, const LossReport& b) {
    if (a.block_epoch != b.block_epoch) return a.block_epoch < b.block_epoch;
    return a.direction < b.direction;
  });
  return out;
}

}  // namespace srv6pm
