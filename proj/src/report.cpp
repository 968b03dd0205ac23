#include "srv6pm/report.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <set>
#include <sstream>

namespace srv6pm {

namespace {

using FlowId = std::pair<std::uint32_t, std::uint8_t>;  // measure_id, direction

FlowId flow_id(const MeasurementRecord& r) {
  return {r.measure_id, static_cast<std::uint8_t>(r.direction)};
}

}  // namespace

std::vector<SessionTotals> summarize_records(
    const std::vector<MeasurementRecord>& records) {
  // Cumulative counters run per color lane, so a flow's totals are the sum of
  // its latest R-lane and latest B-lane cumulatives.
  struct Lane {
    bool seen = false;
    std::uint64_t epoch = 0;
    const MeasurementRecord* last = nullptr;
  };
  std::map<FlowId, SessionTotals> agg;
  std::map<FlowId, std::array<Lane, 2>> lanes;
  for (const auto& r : records) {
    FlowId id = flow_id(r);
    auto [it, inserted] = agg.try_emplace(id);
    SessionTotals& t = it->second;
    if (inserted) {
      t.measure_id = r.measure_id;
      t.direction = r.direction;
      t.sid_list = r.sid_list;
    }
    t.blocks++;
    t.flags_union |= r.flags;
    Lane& lane = lanes[id][static_cast<std::size_t>(r.color)];
    if (!lane.seen || r.epoch >= lane.epoch) {
      lane.seen = true;
      lane.epoch = r.epoch;
      lane.last = &r;
    }
  }
  std::vector<SessionTotals> out;
  out.reserve(agg.size());
  for (auto& [id, t] : agg) {
    for (const Lane& lane : lanes[id]) {
      if (!lane.seen) continue;
      t.cumulative_tx += lane.last->cumulative_tx;
      t.cumulative_rx += lane.last->cumulative_rx;
      t.cumulative_loss += lane.last->cumulative_loss;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::map<std::int64_t, std::size_t> loss_histogram(
    const std::vector<MeasurementRecord>& records) {
  std::map<std::int64_t, std::size_t> hist;
  for (const auto& t : summarize_records(records)) hist[t.cumulative_loss]++;
  return hist;
}

std::string flags_text(std::uint8_t flags) {
  if (flags == 0) return "-";
  std::string out;
  if (flags & kReportFlagNegativeLoss) out += "negative-loss";
  if (flags & kReportFlagActiveRead) {
    if (!out.empty()) out += ",";
    out += "active-read";
  }
  std::uint8_t known = kReportFlagNegativeLoss | kReportFlagActiveRead;
  if (flags & static_cast<std::uint8_t>(~known)) {
    if (!out.empty()) out += ",";
    out += "unknown";
  }
  return out;
}

std::string render_summary_table(const std::vector<SessionTotals>& totals) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "session" << std::setw(9) << "dir"
      << std::setw(44) << "sid_list" << std::right << std::setw(7) << "blocks"
      << std::setw(10) << "tx" << std::setw(10) << "rx" << std::setw(7) << "loss"
      << "  flags\n";
  for (const auto& t : totals) {
    out << std::left << std::setw(8) << t.measure_id << std::setw(9)
        << measure_direction_name(t.direction) << std::setw(44) << t.sid_list
        << std::right << std::setw(7) << t.blocks << std::setw(10) << t.cumulative_tx
        << std::setw(10) << t.cumulative_rx << std::setw(7) << t.cumulative_loss
        << "  " << flags_text(t.flags_union) << "\n";
  }
  return out.str();
}

std::string render_block_table(const std::vector<MeasurementRecord>& records) {
  std::map<FlowId, std::vector<const MeasurementRecord*>> groups;
  for (const auto& r : records) groups[flow_id(r)].push_back(&r);
  std::ostringstream out;
  for (auto& [id, rows] : groups) {
    std::sort(rows.begin(), rows.end(),
              [](const auto* x, const auto* y) { return x->epoch < y->epoch; });
    out << "session " << id.first << " "
        << measure_direction_name(static_cast<MeasureDirection>(id.second)) << " ("
        << rows.front()->sid_list << ")\n";
    out << "  " << std::right << std::setw(6) << "epoch" << std::setw(7) << "color"
        << std::setw(9) << "tx" << std::setw(9) << "rx" << std::setw(7) << "loss"
        << std::setw(10) << "cum_loss" << "  flags\n";
    for (const auto* r : rows) {
      out << "  " << std::setw(6) << r->epoch << std::setw(7) << color_name(r->color)
          << std::setw(9) << r->interval_tx << std::setw(9) << r->interval_rx
          << std::setw(7) << r->interval_loss << std::setw(10) << r->cumulative_loss
          << "  " << flags_text(r->flags) << "\n";
    }
  }
  return out.str();
}

std::string render_anomalies(const std::vector<MeasurementRecord>& records) {
  std::ostringstream out;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.flags == 0) continue;
    count++;
    out << "session " << r.measure_id << " " << measure_direction_name(r.direction)
        << " epoch " << r.epoch << ": " << flags_text(r.flags) << "\n";
  }
  if (count == 0) return "no anomalies\n";
  return out.str();
}

std::string render_loss_histogram(const std::map<std::int64_t, std::size_t>& left,
                                  const std::map<std::int64_t, std::size_t>& right,
                                  const std::string& left_label,
                                  const std::string& right_label) {
  auto cell = [](std::size_t n) {
    std::string bar(std::min<std::size_t>(n, 40), '#');
    if (n > 40) bar += "+";
    if (n > 0) bar += " ";
    return bar + "(" + std::to_string(n) + ")";
  };
  std::set<std::int64_t> buckets;
  for (const auto& [k, v] : left) buckets.insert(k);
  for (const auto& [k, v] : right) buckets.insert(k);

  std::ostringstream out;
  out << std::right << std::setw(6) << "loss" << "  " << std::left << std::setw(28)
      << left_label << right_label << "\n";
  for (std::int64_t b : buckets) {
    auto lit = left.find(b);
    auto rit = right.find(b);
    out << std::right << std::setw(6) << b << "  " << std::left << std::setw(28)
        << cell(lit == left.end() ? 0 : lit->second)
        << cell(rit == right.end() ? 0 : rit->second) << "\n";
  }
  return out.str();
}

}  // namespace srv6pm
