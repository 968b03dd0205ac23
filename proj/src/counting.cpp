#include "srv6pm/counting.hpp"

#include <algorithm>
#include <mutex>

namespace srv6pm {

CountingEngine::CountingEngine(unsigned workers)
    : workers_(workers == 0 ? 1 : workers) {}

int CountingEngine::table_index(const FlowKey& key) {
  std::size_t n = key.sids.size();
  if (n < 1 || n > kMaxSegments) return -1;
  return static_cast<int>(key.direction) * 16 + static_cast<int>(n - 1);
}

void CountingEngine::set_active_color(std::uint64_t new_epoch) {
  if (new_epoch == 0)
    throw EpochSkew("epoch 0 is the initial state and cannot be re-entered");
  std::uint64_t expected = new_epoch - 1;
  if (!epoch_.compare_exchange_strong(expected, new_epoch, std::memory_order_acq_rel))
    throw EpochSkew("active epoch is " + std::to_string(expected) +
                    ", cannot jump to " + std::to_string(new_epoch));
}

void CountingEngine::add_monitored_flow(const FlowKey& key) {
  int ti = table_index(key);
  if (ti < 0)
    throw InvalidSidList("flow key segment count out of range: " +
                         std::to_string(key.sids.size()));
  std::unique_lock lock(mu_);
  auto [it, inserted] = tables_[ti].try_emplace(key.sids, workers_);
  (void)it;
  if (!inserted)
    throw AlreadyMonitored(std::string(direction_name(key.direction)) + " flow " +
                           key.sids.to_string() + " is already monitored");
}

std::pair<CounterSnapshot, CounterSnapshot> CountingEngine::remove_monitored_flow(
    const FlowKey& key) {
  int ti = table_index(key);
  std::unique_lock lock(mu_);
  auto* table = ti >= 0 ? &tables_[ti] : nullptr;
  auto it = table ? table->find(key.sids) : Table::iterator{};
  if (!table || it == table->end())
    throw NotMonitored(std::string(direction_name(key.direction)) + " flow " +
                       key.sids.to_string() + " is not monitored");
  std::uint64_t epoch = epoch_.load(std::memory_order_acquire);
  Color active = color_of_epoch(epoch);
  std::pair<CounterSnapshot, CounterSnapshot> out;
  for (Color c : {Color::R, Color::B}) {
    CounterSnapshot s;
    for (unsigned wkr = 0; wkr < workers_; ++wkr) {
      const Cell& cl = cell(it->second, c, wkr);
      s.packets += cl.packets.load(std::memory_order_relaxed);
      s.bytes += cl.bytes.load(std::memory_order_relaxed);
    }
    s.epoch_at_read = epoch;
    s.active_read = (c == active);
    (c == Color::R ? out.first : out.second) = s;
  }
  table->erase(it);
  return out;
}

bool CountingEngine::count_packet(const FlowKey& key, Color color,
                                  std::uint32_t bytes, unsigned worker_id) noexcept {
  int ti = table_index(key);
  if (ti < 0) return false;
  std::shared_lock lock(mu_);
  auto& table = tables_[ti];
  auto it = table.find(key.sids);
  if (it == table.end()) return false;
  Cell& cl = cell(it->second, color, worker_id % workers_);
  cl.packets.fetch_add(1, std::memory_order_relaxed);
  cl.bytes.fetch_add(bytes, std::memory_order_relaxed);
  return true;
}

CounterSnapshot CountingEngine::read_counters(const FlowKey& key, Color color) const {
  int ti = table_index(key);
  std::shared_lock lock(mu_);
  const auto* table = ti >= 0 ? &tables_[ti] : nullptr;
  auto it = table ? table->find(key.sids) : Table::const_iterator{};
  if (!table || it == table->end())
    throw NotMonitored(std::string(direction_name(key.direction)) + " flow " +
                       key.sids.to_string() + " is not monitored");
  CounterSnapshot s;
  for (unsigned wkr = 0; wkr < workers_; ++wkr) {
    const Cell& cl = cell(it->second, color, wkr);
    s.packets += cl.packets.load(std::memory_order_relaxed);
    s.bytes += cl.bytes.load(std::memory_order_relaxed);
  }
  s.epoch_at_read = epoch_.load(std::memory_order_acquire);
  s.active_read = (color == color_of_epoch(s.epoch_at_read));
  return s;
}

std::vector<FlowKey> CountingEngine::list_flows(FlowDirection direction) const {
  std::shared_lock lock(mu_);
  std::vector<FlowKey> out;
  int base = static_cast<int>(direction) * 16;
  for (int i = base; i < base + 16; ++i)
    for (const auto& [sids, fc] : tables_[i]) out.push_back({direction, sids});
  lock.unlock();
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CountingEngine::flow_count() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

}  // namespace srv6pm
