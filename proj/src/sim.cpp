#include "srv6pm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srv6pm {

// --- DropOracle ----------------------------------------------------------------

int DropOracle::intern(const FlowKey& key) {
  auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(per_flow_.size()));
  if (inserted) per_flow_.emplace_back();
  return it->second;
}

std::optional<int> DropOracle::find(const FlowKey& key) const {
  auto it = ids_.find(key);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void DropOracle::on_sent(int flow, std::uint64_t epoch) {
  per_flow_[static_cast<std::size_t>(flow)][epoch].sent++;
}
void DropOracle::on_delivered(int flow, std::uint64_t epoch) {
  per_flow_[static_cast<std::size_t>(flow)][epoch].delivered++;
}
void DropOracle::on_dropped(int flow, std::uint64_t epoch) {
  per_flow_[static_cast<std::size_t>(flow)][epoch].dropped++;
}

const DropOracle::Rec* DropOracle::rec(const FlowKey& key, std::uint64_t epoch) const {
  auto f = find(key);
  if (!f) return nullptr;
  const auto& m = per_flow_[static_cast<std::size_t>(*f)];
  auto it = m.find(epoch);
  return it == m.end() ? nullptr : &it->second;
}

std::uint64_t DropOracle::sent(const FlowKey& key, std::uint64_t epoch) const {
  const Rec* r = rec(key, epoch);
  return r ? r->sent : 0;
}
std::uint64_t DropOracle::delivered(const FlowKey& key, std::uint64_t epoch) const {
  const Rec* r = rec(key, epoch);
  return r ? r->delivered : 0;
}
std::uint64_t DropOracle::dropped(const FlowKey& key, std::uint64_t epoch) const {
  const Rec* r = rec(key, epoch);
  return r ? r->dropped : 0;
}

std::uint64_t DropOracle::block_drops(const FlowKey& key, std::uint64_t epoch) const {
  const Rec* r = rec(key, epoch);
  if (!r) return 0;  // nothing ever sent in this block
  if (r->sent != r->delivered + r->dropped)
    throw EpochNotQuiesced("block " + std::to_string(epoch) +
                           " still has packets in flight");
  return r->dropped;
}

std::uint64_t DropOracle::cumulative_color_drops(const FlowKey& key, Color color,
                                                 std::uint64_t up_to_epoch) const {
  auto f = find(key);
  if (!f) return 0;
  std::uint64_t total = 0;
  for (const auto& [epoch, r] : per_flow_[static_cast<std::size_t>(*f)]) {
    if (epoch > up_to_epoch) break;
    if (color_of_epoch(epoch) == color) total += r.dropped;
  }
  return total;
}

std::vector<std::uint64_t> DropOracle::epochs(const FlowKey& key) const {
  std::vector<std::uint64_t> out;
  auto f = find(key);
  if (!f) return out;
  for (const auto& [epoch, r] : per_flow_[static_cast<std::size_t>(*f)])
    out.push_back(epoch);
  return out;
}

// --- Simulation ------------------------------------------------------------------

Simulation::Simulation(const ScenarioConfig& cfg) : cfg_(cfg) {
  nodes_.reserve(cfg_.nodes.size());
  for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
    const NodeSpec& spec = cfg_.nodes[i];
    Ipv6Addr primary = *Ipv6Addr::parse(spec.addresses[0]);
    auto node = std::make_unique<Node>(spec.id, primary, *this);
    for (std::size_t k = 1; k < spec.addresses.size(); ++k)
      node->add_address(*Ipv6Addr::parse(spec.addresses[k]));
    for (const auto& hp : spec.host_prefixes)
      node->add_host_prefix(*Ipv6Prefix::parse(hp));
    node_index_[spec.id] = static_cast<int>(i);
    for (const auto& a : spec.addresses)
      address_owner_[*Ipv6Addr::parse(a)] = static_cast<int>(i);
    nodes_.push_back(std::move(node));
  }

  // One generator per link, each on its own seed-derived stream, so adding a
  // link never perturbs the draws of the others.
  std::uint64_t seed_state = cfg_.seed;
  for (std::size_t i = 0; i < cfg_.links.size(); ++i) {
    const LinkSpec& spec = cfg_.links[i];
    LinkRuntime link;
    link.a = node_index(spec.a);
    link.b = node_index(spec.b);
    link.delay_ns = std::llround(spec.delay * 1e9);
    link.loss_rate = spec.loss_rate;
    link.rng.seed(splitmix64(seed_state));
    adjacency_[{link.a, link.b}] = i;
    adjacency_[{link.b, link.a}] = i;
    links_.push_back(std::move(link));
  }

  build_routes();

  for (const auto& spec : cfg_.flows) {
    FlowRuntime flow;
    flow.src = *Ipv6Addr::parse(spec.src);
    flow.dst = *Ipv6Addr::parse(spec.dst);
    flow.ingress = -1;
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i)
      for (const auto& hp : cfg_.nodes[i].host_prefixes)
        if (Ipv6Prefix::parse(hp)->contains(flow.src))
          flow.ingress = static_cast<int>(i);
    flow.count = static_cast<std::uint64_t>(std::llround(spec.rate * spec.duration));
    flow.start_ns = std::llround(spec.start * 1e9);
    flow.period_ns = std::llround(1e9 / spec.rate);
    flow.payload_size = spec.payload_size;
    flows_.push_back(flow);
  }
  for (std::size_t i = 0; i < flows_.size(); ++i)
    if (flows_[i].count > 0 && flows_[i].ingress >= 0)
      schedule(flows_[i].start_ns, [this, i] { emit_flow_packet(i, 0); });
}

int Simulation::node_index(const std::string& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? -1 : it->second;
}

void Simulation::build_routes() {
  const std::size_t n = nodes_.size();
  std::vector<std::vector<int>> neigh(n);
  for (const auto& [key, link] : adjacency_) neigh[static_cast<std::size_t>(key.first)].push_back(key.second);
  for (auto& list : neigh)
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      return nodes_[static_cast<std::size_t>(x)]->id() < nodes_[static_cast<std::size_t>(y)]->id();
    });

  for (std::size_t y = 0; y < n; ++y) {
    // Shortest paths toward y; ties broken by node id so routing is a pure
    // function of the config.
    std::vector<int> dist(n, std::numeric_limits<int>::max());
    std::vector<int> queue{static_cast<int>(y)};
    dist[y] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int v : neigh[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] != std::numeric_limits<int>::max()) continue;
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }

    std::vector<Ipv6Prefix> owned;
    const NodeSpec& spec = cfg_.nodes[y];
    for (const auto& a : spec.addresses)
      owned.push_back(Ipv6Prefix{*Ipv6Addr::parse(a), 128});
    if (!spec.punt_sid.empty())
      owned.push_back(Ipv6Prefix{*Ipv6Addr::parse(spec.punt_sid), 128});
    for (const auto& ls : cfg_.local_sids)
      if (ls.node == spec.id)
        owned.push_back(Ipv6Prefix{*Ipv6Addr::parse(ls.sid), 128});
    for (const auto& hp : spec.host_prefixes)
      owned.push_back(*Ipv6Prefix::parse(hp));

    for (std::size_t x = 0; x < n; ++x) {
      if (x == y || dist[x] == std::numeric_limits<int>::max()) continue;
      int via = -1;
      for (int v : neigh[x]) {
        if (dist[static_cast<std::size_t>(v)] == dist[x] - 1) {
          via = v;
          break;
        }
      }
      if (via < 0) continue;
      const std::string& via_id = nodes_[static_cast<std::size_t>(via)]->id();
      for (const auto& prefix : owned) nodes_[x]->add_route(prefix, via_id);
    }
  }
}

// --- events ----------------------------------------------------------------------

void Simulation::schedule(std::int64_t at_ns, std::function<void()> fn) {
  heap_.push_back(Event{std::max(at_ns, now_), next_seq_++, std::move(fn)});
  std::push_heap(heap_.begin(), heap_.end(), EventAfter{});
}

void Simulation::run_until_ns(std::int64_t t_ns) {
  while (!heap_.empty() && heap_.front().at <= t_ns) {
    std::pop_heap(heap_.begin(), heap_.end(), EventAfter{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = std::max(now_, ev.at);
    events_processed_++;
    ev.fn();
  }
  now_ = std::max(now_, t_ns);
}

void Simulation::run_until(double seconds) { run_until_ns(std::llround(seconds * 1e9)); }

// --- packet movement ---------------------------------------------------------------

void Simulation::originate(const std::string& node_id, Packet&& pkt) {
  int idx = node_index(node_id);
  if (idx < 0) throw std::logic_error("originate at unknown node " + node_id);
  if (pkt.uid == 0) pkt.uid = ++next_uid_;
  PacketKind kind = PacketKind::Data;
  if (pkt.udp && pkt.payload.size() == kLmQuerySize) kind = PacketKind::Query;
  else if (pkt.udp && pkt.payload.size() == kLmResponseSize) kind = PacketKind::Response;
  kinds_.emplace(pkt.uid, kind);
  record_visit(idx, pkt.uid);
  process_at(*nodes_[static_cast<std::size_t>(idx)], std::move(pkt));
}

void Simulation::deliver_direct(const Ipv6Addr& dst_addr, Packet&& pkt) {
  if (pkt.uid == 0) pkt.uid = ++next_uid_;
  if (pkt.udp && pkt.payload.size() == kLmResponseSize)
    kinds_.emplace(pkt.uid, PacketKind::Response);
  auto carried = std::make_shared<Packet>(std::move(pkt));
  // Management-plane hop: fixed small delay, no loss, no topology traversal.
  schedule(now_ + 1'000'000, [this, dst_addr, carried]() {
    auto it = address_owner_.find(dst_addr);
    if (it == address_owner_.end()) return;
    arrive(it->second, std::move(*carried));
  });
}

void Simulation::process_at(Node& node, Packet&& pkt) {
  Packet p = std::move(pkt);
  ForwardingDecision decision = node.process_packet(p);
  if (const auto* fwd = std::get_if<Forward>(&decision)) {
    link_transmit(node_index(node.id()), fwd->next_hop, std::move(p));
  } else if (std::holds_alternative<DeliverLocal>(decision)) {
    deliveries_++;
  }
  // Punted and Dropped need nothing further: agents and the oracle already ran.
}

void Simulation::link_transmit(int from, const std::string& to_id, Packet&& pkt) {
  int to = node_index(to_id);
  auto it = adjacency_.find({from, to});
  if (it == adjacency_.end())
    throw std::logic_error("no link " + nodes_[static_cast<std::size_t>(from)]->id() +
                           " -> " + to_id);
  LinkRuntime& link = links_[it->second];
  link.transmitted++;
  double draw = static_cast<double>(link.rng() >> 11) * 0x1.0p-53;
  if (draw < link.loss_rate) {
    link.dropped++;
    oracle_dropped(pkt);
    fold_trace(static_cast<std::uint64_t>(now_),
               0x8000000000000000ULL | it->second, pkt.uid);
    return;
  }
  auto carried = std::make_shared<Packet>(std::move(pkt));
  schedule(now_ + link.delay_ns,
           [this, to, carried]() { arrive(to, std::move(*carried)); });
}

void Simulation::arrive(int node_idx, Packet&& pkt) {
  record_visit(node_idx, pkt.uid);
  process_at(*nodes_[static_cast<std::size_t>(node_idx)], std::move(pkt));
}

void Simulation::emit_flow_packet(std::size_t flow_idx, std::uint64_t k) {
  FlowRuntime& flow = flows_[flow_idx];
  Packet pkt;
  pkt.outer.src = flow.src;
  pkt.outer.dst = flow.dst;
  pkt.outer.next_header = kProtoNone;
  pkt.outer.hop_limit = 64;
  pkt.outer.payload_len = static_cast<std::uint16_t>(flow.payload_size);
  pkt.payload.assign(flow.payload_size, static_cast<std::uint8_t>(k & 0xff));
  injected_++;
  originate(nodes_[static_cast<std::size_t>(flow.ingress)]->id(), std::move(pkt));
  if (k + 1 < flow.count)
    schedule(flow.start_ns + static_cast<std::int64_t>(k + 1) * flow.period_ns,
             [this, flow_idx, k] { emit_flow_packet(flow_idx, k + 1); });
}

// --- oracle hooks ------------------------------------------------------------------

void Simulation::oracle_sent(Packet& pkt, const FlowKey& key, std::uint64_t epoch) {
  int flow = oracle_.intern(key);
  pkt.oracle_flow = flow;
  pkt.oracle_epoch = epoch;
  oracle_.on_sent(flow, epoch);
}

void Simulation::oracle_delivered(const Packet& pkt) {
  if (pkt.oracle_flow >= 0) oracle_.on_delivered(pkt.oracle_flow, pkt.oracle_epoch);
}

void Simulation::oracle_dropped(const Packet& pkt) {
  if (pkt.oracle_flow >= 0) oracle_.on_dropped(pkt.oracle_flow, pkt.oracle_epoch);
}

// --- inspection --------------------------------------------------------------------

Node& Simulation::node(const std::string& id) {
  int idx = node_index(id);
  if (idx < 0) throw std::out_of_range("unknown node " + id);
  return *nodes_[static_cast<std::size_t>(idx)];
}

Node* Simulation::find_node(const std::string& id) {
  int idx = node_index(id);
  return idx < 0 ? nullptr : nodes_[static_cast<std::size_t>(idx)].get();
}

Node* Simulation::node_by_address(const Ipv6Addr& addr) {
  auto it = address_owner_.find(addr);
  return it == address_owner_.end() ? nullptr
                                    : nodes_[static_cast<std::size_t>(it->second)].get();
}

std::vector<std::string> Simulation::node_ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n->id());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simulation::LinkStats> Simulation::link_stats() const {
  std::vector<LinkStats> out;
  out.reserve(links_.size());
  for (const auto& l : links_) {
    out.push_back({nodes_[static_cast<std::size_t>(l.a)]->id(),
                   nodes_[static_cast<std::size_t>(l.b)]->id(), l.transmitted,
                   l.dropped});
  }
  return out;
}

void Simulation::record_visit(int node_idx, std::uint64_t uid) {
  fold_trace(static_cast<std::uint64_t>(now_), static_cast<std::uint64_t>(node_idx),
             uid);
  visits_[uid].push_back(node_idx);
}

void Simulation::fold_trace(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const std::uint64_t v[3] = {a, b, c};
  trace_hash_ = fnv1a64(v, sizeof v, trace_hash_);
}

std::vector<std::string> Simulation::packet_path(std::uint64_t uid) const {
  std::vector<std::string> out;
  auto it = visits_.find(uid);
  if (it == visits_.end()) return out;
  out.reserve(it->second.size());
  for (int idx : it->second) out.push_back(nodes_[static_cast<std::size_t>(idx)]->id());
  return out;
}

std::optional<PacketKind> Simulation::packet_kind(std::uint64_t uid) const {
  auto it = kinds_.find(uid);
  if (it == kinds_.end()) return std::nullopt;
  return it->second;
}

std::unique_ptr<Simulation> load_scenario(const std::string& config_text) {
  ScenarioConfig cfg = parse_scenario(config_text);
  validate_scenario(cfg);
  return std::make_unique<Simulation>(cfg);
}

}  // namespace srv6pm
