#pragma once

// Measurement-record sinks and file formats: an in-process time-series store
// with the ordered-delivery contract of a networked pipeline, lossless
// JSONL/CSV export/import, and the topology record.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "srv6pm/scenario.hpp"
#include "srv6pm/southbound.hpp"

namespace srv6pm {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One settled measurement interval, as persisted. Field order here is the
// documented column/key order of both file formats.
struct MeasurementRecord {
  std::uint32_t measure_id = 0;
  std::string sid_list;  // textual segment list of the measured direction
  MeasureDirection direction = MeasureDirection::Forward;
  std::uint64_t epoch = 0;
  Color color = Color::R;
  std::uint64_t interval_tx = 0;
  std::uint64_t interval_rx = 0;
  std::int64_t interval_loss = 0;
  std::uint64_t cumulative_tx = 0;
  std::uint64_t cumulative_rx = 0;
  std::int64_t cumulative_loss = 0;
  double timestamp = 0;  // simulated seconds of the counter read
  std::uint8_t flags = 0;

  bool operator==(const MeasurementRecord&) const = default;
};

MeasurementRecord record_from_report(const LossReport& report,
                                     const std::string& sid_list);

class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void append(const MeasurementRecord& record) = 0;
};

// Append-only store with one record per (measure_id, direction, epoch); a
// duplicate key replaces the earlier record in place (keeping arrival order)
// and is counted. Single writer, concurrent readers.
class TimeSeriesStore : public RecordSink {
 public:
  void append(const MeasurementRecord& record) override;

  // Records for one session direction with epoch in [from, to], epoch-sorted.
  std::vector<MeasurementRecord> query_series(std::uint32_t measure_id,
                                              MeasureDirection direction,
                                              std::uint64_t epoch_from,
                                              std::uint64_t epoch_to) const;

  std::vector<MeasurementRecord> all_records() const;  // arrival order
  std::size_t size() const;
  std::uint64_t duplicates_replaced() const;

 private:
  mutable std::shared_mutex mu_;
  std::vector<MeasurementRecord> records_;
  std::map<std::tuple<std::uint32_t, std::uint8_t, std::uint64_t>, std::size_t> index_;
  std::uint64_t duplicates_ = 0;
};

// --- file formats ------------------------------------------------------------
// JSONL: one object per line, keys in MeasurementRecord field order.
// CSV: header + one row per record, same order; sid_list is double-quoted.
// Both round-trip every field exactly (doubles use shortest-exact form).

enum class RecordFormat : std::uint8_t { Jsonl, Csv };

// Returns "jsonl"/"csv"; parse_record_format accepts the same names.
const char* record_format_name(RecordFormat f);
std::optional<RecordFormat> parse_record_format(const std::string& name);

std::string render_records(const std::vector<MeasurementRecord>& records,
                           RecordFormat format);

// Writes render_records output to path; returns records written. IoError on
// any filesystem failure.
std::size_t export_records(const std::vector<MeasurementRecord>& records,
                           const std::string& path, RecordFormat format);

// Inverse of render_records; sniffs the format from the content. Throws
// FormatError naming the offending line.
std::vector<MeasurementRecord> parse_records(const std::string& content);

// Reads and parses a records file. IoError if unreadable.
std::vector<MeasurementRecord> import_records(const std::string& path);

// --- topology record -----------------------------------------------------------

struct TopologyRecord {
  struct NodeEntry {
    std::string id;
    std::vector<std::string> addresses;
  };
  struct EdgeEntry {
    std::string a;
    std::string b;
    double delay = 0;
    double loss_rate = 0;
  };
  std::vector<NodeEntry> nodes;
  std::vector<EdgeEntry> edges;
};

TopologyRecord topology_from_config(const ScenarioConfig& cfg);
std::string render_topology(const TopologyRecord& topo);  // JSON
void export_topology(const TopologyRecord& topo, const std::string& path);

}  // namespace srv6pm
