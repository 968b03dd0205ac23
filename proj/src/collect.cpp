#include "srv6pm/collect.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace srv6pm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string double_text(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

constexpr const char* kCsvHeader =
    "measure_id,sid_list,direction,epoch,color,interval_tx,interval_rx,"
    "interval_loss,cumulative_tx,cumulative_rx,cumulative_loss,timestamp,flags";

}  // namespace

MeasurementRecord record_from_report(const LossReport& report,
                                     const std::string& sid_list) {
  MeasurementRecord r;
  r.measure_id = report.measure_id;
  r.sid_list = sid_list;
  r.direction = report.direction;
  r.epoch = report.block_epoch;
  r.color = report.color;
  r.interval_tx = report.interval_tx;
  r.interval_rx = report.interval_rx;
  r.interval_loss = report.interval_loss;
  r.cumulative_tx = report.cumulative_tx;
  r.cumulative_rx = report.cumulative_rx;
  r.cumulative_loss = report.cumulative_loss;
  r.timestamp = static_cast<double>(report.read_timestamp_ns) / 1e9;
  r.flags = report.flags;
  return r;
}

// --- TimeSeriesStore -----------------------------------------------------------

void TimeSeriesStore::append(const MeasurementRecord& record) {
  std::unique_lock lock(mu_);
  auto key = std::make_tuple(record.measure_id,
                             static_cast<std::uint8_t>(record.direction), record.epoch);
  auto [it, inserted] = index_.try_emplace(key, records_.size());
  if (inserted) {
    records_.push_back(record);
  } else {
    records_[it->second] = record;
    duplicates_++;
  }
}

std::vector<MeasurementRecord> TimeSeriesStore::query_series(
    std::uint32_t measure_id, MeasureDirection direction, std::uint64_t epoch_from,
    std::uint64_t epoch_to) const {
  std::shared_lock lock(mu_);
  std::vector<MeasurementRecord> out;
  for (const auto& r : records_) {
    if (r.measure_id == measure_id && r.direction == direction &&
        r.epoch >= epoch_from && r.epoch <= epoch_to)
      out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.epoch < y.epoch; });
  return out;
}

std::vector<MeasurementRecord> TimeSeriesStore::all_records() const {
  std::shared_lock lock(mu_);
  return records_;
}

std::size_t TimeSeriesStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

std::uint64_t TimeSeriesStore::duplicates_replaced() const {
  std::shared_lock lock(mu_);
  return duplicates_;
}

// --- serialization ---------------------------------------------------------------

const char* record_format_name(RecordFormat f) {
  return f == RecordFormat::Jsonl ? "jsonl" : "csv";
}

std::optional<RecordFormat> parse_record_format(const std::string& name) {
  if (name == "jsonl") return RecordFormat::Jsonl;
  if (name == "csv") return RecordFormat::Csv;
  return std::nullopt;
}

std::string render_records(const std::vector<MeasurementRecord>& records,
                           RecordFormat format) {
  std::string out;
  if (format == RecordFormat::Jsonl) {
    for (const auto& r : records) {
      ordered_json j;
      j["measure_id"] = r.measure_id;
      j["sid_list"] = r.sid_list;
      j["direction"] = measure_direction_name(r.direction);
      j["epoch"] = r.epoch;
      j["color"] = color_name(r.color);
      j["interval_tx"] = r.interval_tx;
      j["interval_rx"] = r.interval_rx;
      j["interval_loss"] = r.interval_loss;
      j["cumulative_tx"] = r.cumulative_tx;
      j["cumulative_rx"] = r.cumulative_rx;
      j["cumulative_loss"] = r.cumulative_loss;
      j["timestamp"] = r.timestamp;
      j["flags"] = r.flags;
      out += j.dump();
      out += '\n';
    }
    return out;
  }
  out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.measure_id);
    out += ",\"";
    out += r.sid_list;
    out += "\",";
    out += measure_direction_name(r.direction);
    out += ',';
    out += std::to_string(r.epoch);
    out += ',';
    out += color_name(r.color);
    out += ',';
    out += std::to_string(r.interval_tx);
    out += ',';
    out += std::to_string(r.interval_rx);
    out += ',';
    out += std::to_string(r.interval_loss);
    out += ',';
    out += std::to_string(r.cumulative_tx);
    out += ',';
    out += std::to_string(r.cumulative_rx);
    out += ',';
    out += std::to_string(r.cumulative_loss);
    out += ',';
    out += double_text(r.timestamp);
    out += ',';
    out += std::to_string(r.flags);
    out += '\n';
  }
  return out;
}

std::size_t export_records(const std::vector<MeasurementRecord>& records,
                           const std::string& path, RecordFormat format) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << render_records(records, format);
  file.flush();
  if (!file) throw IoError("write failed on " + path);
  return records.size();
}

namespace {

std::optional<MeasureDirection> parse_direction(const std::string& s) {
  if (s == "forward") return MeasureDirection::Forward;
  if (s == "reverse") return MeasureDirection::Reverse;
  return std::nullopt;
}

std::optional<Color> parse_color(const std::string& s) {
  if (s == "R") return Color::R;
  if (s == "B") return Color::B;
  return std::nullopt;
}

template <typename T>
T parse_int_field(const std::string& text, std::size_t line_no, const char* field) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    bad_line(line_no, std::string("bad ") + field + " \"" + text + "\"");
  return value;
}

double parse_double_field(const std::string& text, std::size_t line_no,
                          const char* field) {
  double value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    bad_line(line_no, std::string("bad ") + field + " \"" + text + "\"");
  return value;
}

MeasurementRecord record_from_json_line(const std::string& line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    bad_line(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_line(line_no, "expected an object");
  const char* const keys[] = {"measure_id",    "sid_list",      "direction",
                              "epoch",         "color",         "interval_tx",
                              "interval_rx",   "interval_loss", "cumulative_tx",
                              "cumulative_rx", "cumulative_loss", "timestamp",
                              "flags"};
  for (const char* k : keys)
    if (!j.contains(k)) bad_line(line_no, std::string("missing key \"") + k + "\"");
  MeasurementRecord r;
  try {
    r.measure_id = j["measure_id"].get<std::uint32_t>();
    r.sid_list = j["sid_list"].get<std::string>();
    auto dir = parse_direction(j["direction"].get<std::string>());
    if (!dir) bad_line(line_no, "bad direction");
    r.direction = *dir;
    r.epoch = j["epoch"].get<std::uint64_t>();
    auto color = parse_color(j["color"].get<std::string>());
    if (!color) bad_line(line_no, "bad color");
    r.color = *color;
    r.interval_tx = j["interval_tx"].get<std::uint64_t>();
    r.interval_rx = j["interval_rx"].get<std::uint64_t>();
    r.interval_loss = j["interval_loss"].get<std::int64_t>();
    r.cumulative_tx = j["cumulative_tx"].get<std::uint64_t>();
    r.cumulative_rx = j["cumulative_rx"].get<std::uint64_t>();
    r.cumulative_loss = j["cumulative_loss"].get<std::int64_t>();
    r.timestamp = j["timestamp"].get<double>();
    r.flags = static_cast<std::uint8_t>(j["flags"].get<std::uint32_t>());
  } catch (const json::exception& e) {
    bad_line(line_no, std::string("bad field type: ") + e.what());
  }
  return r;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) bad_line(line_no, "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

MeasurementRecord record_from_csv_line(const std::string& line, std::size_t line_no) {
  auto f = split_csv_line(line, line_no);
  if (f.size() != 13)
    bad_line(line_no, "expected 13 fields, got " + std::to_string(f.size()));
  MeasurementRecord r;
  r.measure_id = parse_int_field<std::uint32_t>(f[0], line_no, "measure_id");
  r.sid_list = f[1];
  auto dir = parse_direction(f[2]);
  if (!dir) bad_line(line_no, "bad direction \"" + f[2] + "\"");
  r.direction = *dir;
  r.epoch = parse_int_field<std::uint64_t>(f[3], line_no, "epoch");
  auto color = parse_color(f[4]);
  if (!color) bad_line(line_no, "bad color \"" + f[4] + "\"");
  r.color = *color;
  r.interval_tx = parse_int_field<std::uint64_t>(f[5], line_no, "interval_tx");
  r.interval_rx = parse_int_field<std::uint64_t>(f[6], line_no, "interval_rx");
  r.interval_loss = parse_int_field<std::int64_t>(f[7], line_no, "interval_loss");
  r.cumulative_tx = parse_int_field<std::uint64_t>(f[8], line_no, "cumulative_tx");
  r.cumulative_rx = parse_int_field<std::uint64_t>(f[9], line_no, "cumulative_rx");
  r.cumulative_loss = parse_int_field<std::int64_t>(f[10], line_no, "cumulative_loss");
  r.timestamp = parse_double_field(f[11], line_no, "timestamp");
  r.flags = parse_int_field<std::uint8_t>(f[12], line_no, "flags");
  return r;
}

}  // namespace

std::vector<MeasurementRecord> parse_records(const std::string& content) {
  std::vector<MeasurementRecord> out;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  bool csv = false;
  bool decided = false;
  while (std::getline(in, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!decided) {
      decided = true;
      if (line[0] == '{') {
        csv = false;
      } else if (line == kCsvHeader) {
        csv = true;
        continue;
      } else {
        bad_line(line_no, "expected a JSONL object or the CSV header");
      }
    }
    out.push_back(csv ? record_from_csv_line(line, line_no)
                      : record_from_json_line(line, line_no));
  }
  return out;
}

std::vector<MeasurementRecord> import_records(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  if (file.bad()) throw IoError("read failed on " + path);
  return parse_records(buf.str());
}

// --- topology --------------------------------------------------------------------

TopologyRecord topology_from_config(const ScenarioConfig& cfg) {
  TopologyRecord topo;
  for (const auto& n : cfg.nodes) topo.nodes.push_back({n.id, n.addresses});
  for (const auto& l : cfg.links)
    topo.edges.push_back({l.a, l.b, l.delay, l.loss_rate});
  return topo;
}

std::string render_topology(const TopologyRecord& topo) {
  ordered_json root;
  root["nodes"] = ordered_json::array();
  for (const auto& n : topo.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["addresses"] = n.addresses;
    root["nodes"].push_back(std::move(j));
  }
  root["edges"] = ordered_json::array();
  for (const auto& e : topo.edges) {
    ordered_json j;
    j["a"] = e.a;
    j["b"] = e.b;
    j["delay"] = e.delay;
    j["loss_rate"] = e.loss_rate;
    root["edges"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

void export_topology(const TopologyRecord& topo, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << render_topology(topo);
  file.flush();
  if (!file) throw IoError("write failed on " + path);
}

}  // namespace srv6pm
