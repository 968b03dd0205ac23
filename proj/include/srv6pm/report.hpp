#pragma once

// Text renderers over measurement records: per-session totals, per-block
// tables, anomaly listings and the per-flow total-loss histogram. Shared by
// the CLI and the tests so both present the same numbers.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srv6pm/collect.hpp"

namespace srv6pm {

// One monitored direction of one session, folded over all its records.
struct SessionTotals {
  std::uint32_t measure_id = 0;
  MeasureDirection direction = MeasureDirection::Forward;
  std::string sid_list;
  std::uint64_t blocks = 0;
  std::uint64_t cumulative_tx = 0;  // from the latest epoch's record
  std::uint64_t cumulative_rx = 0;
  std::int64_t cumulative_loss = 0;
  std::uint8_t flags_union = 0;
};

// Ordered by (measure_id, direction).
std::vector<SessionTotals> summarize_records(
    const std::vector<MeasurementRecord>& records);

// Per-flow total loss -> number of flows with that total. A "flow" is one
// direction of one session; its total is the final cumulative loss.
std::map<std::int64_t, std::size_t> loss_histogram(
    const std::vector<MeasurementRecord>& records);

std::string flags_text(std::uint8_t flags);  // "-", or comma-joined names

std::string render_summary_table(const std::vector<SessionTotals>& totals);
std::string render_block_table(const std::vector<MeasurementRecord>& records);
std::string render_anomalies(const std::vector<MeasurementRecord>& records);

// Side-by-side bucket columns; buckets are the union of both keys.
std::string render_loss_histogram(const std::map<std::int64_t, std::size_t>& left,
                                  const std::map<std::int64_t, std::size_t>& right,
                                  const std::string& left_label,
                                  const std::string& right_label);

}  // namespace srv6pm
