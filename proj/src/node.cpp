#include "srv6pm/node.hpp"

#include <algorithm>
#include <cmath>

namespace srv6pm {

std::optional<SidBehavior> parse_sid_behavior(std::string_view action) {
  if (action == "End") return SidBehavior::End;
  if (action == "End.DT6" || action == "EndDecap") return SidBehavior::EndDecap;
  if (action == "End.OP" || action == "EndOP") return SidBehavior::EndOP;
  return std::nullopt;
}

const char* sid_behavior_action(SidBehavior b) {
  switch (b) {
    case SidBehavior::End: return "End";
    case SidBehavior::EndDecap: return "End.DT6";
    case SidBehavior::EndOP: return "End.OP";
  }
  return "?";
}

const char* drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no_route";
    case DropReason::Malformed: return "malformed";
    case DropReason::HopLimitExpired: return "hop_limit";
  }
  return "?";
}

Node::Node(std::string id, Ipv6Addr address, NodeHost& host, unsigned workers)
    : id_(std::move(id)), address_(address), host_(host), engine_(workers) {
  addresses_.push_back(address);
}

void Node::add_address(const Ipv6Addr& a) {
  if (!owns_address(a)) addresses_.push_back(a);
}

void Node::add_host_prefix(const Ipv6Prefix& p) { host_prefixes_.push_back(p); }

void Node::add_route(const Ipv6Prefix& prefix, const std::string& next_hop) {
  auto at = std::find_if(routes_.begin(), routes_.end(), [&](const auto& r) {
    return r.first.len < prefix.len;  // keep descending length: first match wins
  });
  routes_.insert(at, {prefix, next_hop});
}

bool Node::owns_address(const Ipv6Addr& a) const {
  return std::find(addresses_.begin(), addresses_.end(), a) != addresses_.end();
}

bool Node::owns_host(const Ipv6Addr& a) const {
  return std::any_of(host_prefixes_.begin(), host_prefixes_.end(),
                     [&](const Ipv6Prefix& p) { return p.contains(a); });
}

// --- dataplane ---------------------------------------------------------------

ForwardingDecision Node::process_packet(Packet& pkt) {
  // A packet may pass through several local stages (encap, segment advance,
  // decap) before leaving; the pass cap breaks provisioning loops.
  for (int pass = 0; pass < 8; ++pass) {
    if (auto decision = dispatch(pkt)) return *decision;
  }
  return drop(pkt, DropReason::Malformed);
}

std::optional<ForwardingDecision> Node::dispatch(Packet& pkt) {
  const Ipv6Addr& dst = pkt.outer.dst;
  if (const LocalSid* ls = find_local_sid(dst)) return process_local_sid(pkt, *ls);
  if (owns_address(dst)) {
    if (pkt.udp) pm_dispatch(pkt, nullptr);  // e.g. out-of-band responses
    return DeliverLocal{};
  }
  if (owns_host(dst)) return DeliverLocal{};
  if (!pkt.srh) {
    if (const SrPolicy* pol = match_policy(dst)) {
      apply_policy_encap(pkt, *pol);
      return std::nullopt;  // now an SRv6 packet; classify again
    }
  }
  return route_or_drop(pkt);
}

const SrPolicy* Node::match_policy(const Ipv6Addr& dst) const {
  const SrPolicy* best = nullptr;
  for (const auto& p : policies_)
    if (p.destination.contains(dst) && (!best || p.destination.len > best->destination.len))
      best = &p;
  return best;
}

const LocalSid* Node::find_local_sid(const Ipv6Addr& dst) const {
  for (const auto& ls : local_sids_)
    if (ls.sid == dst) return &ls;
  return nullptr;
}

void Node::apply_policy_encap(Packet& pkt, const SrPolicy& policy) {
  std::uint32_t inner_bytes = static_cast<std::uint32_t>(
      kIpv6HeaderSize + encoded_payload_size(pkt));
  Packet inner = std::move(pkt);
  pkt = Packet{};
  pkt.uid = inner.uid;
  pkt.outer.src = address_;
  pkt.outer.dst = policy.sid_list[0];
  pkt.outer.hop_limit = 255;
  pkt.srh = make_srh(policy.sid_list, kProtoIpv6);

  // Mark-and-count against one epoch read: the packet's color and its counter
  // attribution can never disagree.
  std::uint64_t epoch = engine_.current_epoch();
  Color color = color_of_epoch(epoch);
  FlowKey key{FlowDirection::Ingress, policy.sid_list};
  bool monitored = engine_.count_packet(key, color, inner_bytes, 0);
  pkt.inner = std::make_shared<const Packet>(std::move(inner));
  pkt.outer.payload_len = encoded_payload_size(pkt);
  if (monitored) {
    set_color(pkt, color, true);
    host_.oracle_sent(pkt, key, epoch);
  }
}

std::optional<ForwardingDecision> Node::process_local_sid(Packet& pkt,
                                                          const LocalSid& ls) {
  switch (ls.behavior) {
    case SidBehavior::End: {
      if (!pkt.srh) return drop(pkt, DropReason::Malformed);
      try {
        srh_advance(pkt);
      } catch (const std::runtime_error&) {
        return drop(pkt, DropReason::Malformed);
      }
      return std::nullopt;  // head toward the new active segment
    }
    case SidBehavior::EndDecap: {
      if (!pkt.srh || pkt.srh->segments_left != 0 || !pkt.inner)
        return drop(pkt, DropReason::Malformed);
      auto [color, monitored] = get_color(pkt);
      if (monitored) {
        SidList path;
        try {
          path = srh_path_sids(*pkt.srh);
        } catch (const InvalidSidList&) {
          return drop(pkt, DropReason::Malformed);
        }
        std::uint32_t inner_bytes = static_cast<std::uint32_t>(
            kIpv6HeaderSize + encoded_payload_size(*pkt.inner));
        // Egress count happens before the outer header (and its color) is gone.
        engine_.count_packet({FlowDirection::Egress, path}, color, inner_bytes, 0);
      }
      host_.oracle_delivered(pkt);
      Packet next = *pkt.inner;
      next.uid = pkt.uid;
      next.oracle_flow = -1;  // settled at the egress count point
      next.oracle_epoch = 0;
      pkt = std::move(next);
      return std::nullopt;  // forward the inner datagram
    }
    case SidBehavior::EndOP: {
      if (!pkt.srh || !pkt.udp) return drop(pkt, DropReason::Malformed);
      SidList path;
      try {
        path = srh_path_sids(*pkt.srh);
      } catch (const InvalidSidList&) {
        return drop(pkt, DropReason::Malformed);
      }
      pm_dispatch(pkt, &path);
      return Punted{};
    }
  }
  return drop(pkt, DropReason::Malformed);
}

ForwardingDecision Node::route_or_drop(Packet& pkt) {
  const std::string* next_hop = nullptr;
  for (const auto& [prefix, nh] : routes_) {
    if (prefix.contains(pkt.outer.dst)) {
      next_hop = &nh;
      break;  // routes are kept sorted longest-prefix-first
    }
  }
  if (!next_hop) return drop(pkt, DropReason::NoRoute);
  if (pkt.outer.hop_limit <= 1) return drop(pkt, DropReason::HopLimitExpired);
  pkt.outer.hop_limit--;
  return Forward{*next_hop};
}

ForwardingDecision Node::drop(Packet& pkt, DropReason reason) {
  switch (reason) {
    case DropReason::NoRoute: diag_.drops_no_route++; break;
    case DropReason::Malformed: diag_.drops_malformed++; break;
    case DropReason::HopLimitExpired: diag_.drops_hop_limit++; break;
  }
  host_.oracle_dropped(pkt);
  return Dropped{reason};
}

// --- measurement agents ------------------------------------------------------

// A probe carries the monitored segment list with only the final segment
// swapped for a punt SID; everything before it must match exactly.
static bool probe_path_matches(const SidList& probe, const SidList& expected) {
  if (probe.size() != expected.size()) return false;
  for (std::size_t i = 0; i + 1 < probe.size(); ++i)
    if (!(probe[i] == expected[i])) return false;
  return true;
}

bool Node::pm_dispatch(const Packet& pkt, const SidList* probe_sids) {
  const UdpHeader& udp = *pkt.udp;
  if (pkt.payload.size() == kLmQuerySize && probe_sids) {
    for (auto& [key, rs] : reflectors_) {
      if (!rs.running || udp.dst_port != rs.refl_port || udp.src_port != rs.ss_port)
        continue;
      if (!probe_path_matches(*probe_sids, rs.sdlist)) continue;
      LmQuery q;
      try {
        q = decode_lm_query(pkt.payload);
      } catch (const std::runtime_error&) {
        diag_.malformed_probes++;
        return false;
      }
      reflector_on_query(rs, q, pkt.outer.src);
      return true;
    }
  }
  if (pkt.payload.size() == kLmResponseSize) {
    for (auto& [key, st] : senders_) {
      if (!st.session->running() || udp.dst_port != st.ss_port ||
          udp.src_port != st.refl_port)
        continue;
      if (probe_sids && !probe_path_matches(*probe_sids, st.session->sdlistreverse()))
        continue;
      LmResponse resp;
      try {
        resp = decode_lm_response(pkt.payload);
      } catch (const std::runtime_error&) {
        diag_.malformed_probes++;
        return false;
      }
      sender_on_response(st, resp);
      return true;
    }
  }
  diag_.unknown_session++;
  return false;
}

bool Node::attach_marking(std::int64_t period_ns) {
  if (marking_.armed) {
    if (marking_.period_ns != period_ns) {
      diag_.duplicate_marking_period++;
      return false;
    }
    marking_.attached++;
    return true;
  }
  marking_.armed = true;
  marking_.anchor_ns = host_.now_ns();
  marking_.period_ns = period_ns;
  marking_.base_epoch = engine_.current_epoch();
  marking_.attached = 1;
  host_.schedule(marking_.anchor_ns + period_ns, [this] { marking_tick(); });
  return true;
}

void Node::detach_marking() {
  if (marking_.attached > 0) marking_.attached--;
}

void Node::marking_tick() {
  if (marking_.attached == 0) {
    marking_.armed = false;  // schedule dies with its last subscriber
    return;
  }
  std::uint64_t deactivated = engine_.current_epoch();
  engine_.set_active_color(deactivated + 1);
  for (auto& [key, st] : senders_) {
    if (!st.session->running()) continue;
    host_.schedule(host_.now_ns() + st.margin_ns,
                   [this, key = key, deactivated] {
                     auto it = senders_.find(key);
                     if (it != senders_.end() && it->second.session->running())
                       sender_emit_query(it->second, deactivated);
                   });
  }
  host_.schedule(host_.now_ns() + marking_.period_ns, [this] { marking_tick(); });
}

void Node::sender_emit_query(SenderState& st, std::uint64_t block_epoch) {
  CounterSnapshot snap;
  try {
    snap = engine_.read_counters({FlowDirection::Ingress, st.session->sdlist()},
                                 color_of_epoch(block_epoch));
  } catch (const NotMonitored&) {
    diag_.unknown_session++;
    return;
  }
  std::uint8_t flags = 0;
  if (snap.active_read) {
    diag_.early_active_reads++;
    flags |= kReportFlagActiveRead;
  }
  LmQuery q;
  q.sender_seq = st.next_seq++;
  q.sender_tx_counter = snap.packets;
  q.block_number = static_cast<std::uint8_t>(block_epoch & 0xff);
  q.ctrl_code = st.ctrl_code;
  st.pending.emplace(q.sender_seq,
                     PendingQuery{block_epoch, snap.packets, host_.now_ns(), flags});
  ProbeSpec spec{st.session->sdlist(), st.reflector_punt, address_,
                 st.ss_port, st.refl_port, 255};
  host_.originate(id_, build_probe_packet(q, spec));
}

void Node::reflector_on_query(ReflectorState& rs, const LmQuery& q,
                              const Ipv6Addr& query_src) {
  std::uint64_t block_epoch = resolve_block_epoch(q.block_number, engine_.current_epoch());
  Color color = color_of_epoch(block_epoch);
  CounterSnapshot rx;
  try {
    rx = engine_.read_counters({FlowDirection::Egress, rs.sdlist}, color);
  } catch (const NotMonitored&) {
    diag_.unknown_session++;
    return;
  }
  // Answering an early query (block still active) is allowed; the read is
  // noted here and the sender flags the sample from response timing.
  if (rx.active_read) diag_.early_active_reads++;

  LmResponse resp;
  resp.sender_seq = q.sender_seq;
  resp.sender_tx_counter = q.sender_tx_counter;
  resp.sender_block = q.block_number;
  resp.flags = q.flags;
  resp.ctrl_code = q.ctrl_code;
  resp.reflector_rx_counter = rx.packets;

  if (q.ctrl_code == kCtrlInBand) {
    CounterSnapshot tx;
    try {
      tx = engine_.read_counters({FlowDirection::Ingress, rs.sdlistreverse}, color);
    } catch (const NotMonitored&) {
      diag_.unknown_session++;
      return;
    }
    if (tx.active_read) diag_.early_active_reads++;
    resp.reflector_seq = rs.next_seq++;
    resp.reflector_tx_counter = tx.packets;
    resp.reflector_block = q.block_number;
    ProbeSpec spec{rs.sdlistreverse, rs.sender_punt, address_,
                   rs.refl_port, rs.ss_port, 255};
    host_.originate(id_, build_probe_packet(resp, spec));
  } else {
    // Out-of-band: a plain UDP datagram back to the querying node over the
    // management plane; return-path fields stay zero.
    Packet out;
    out.outer.src = address_;
    out.outer.dst = query_src;
    out.outer.hop_limit = 255;
    out.udp = UdpHeader{rs.refl_port, rs.ss_port,
                        static_cast<std::uint16_t>(kUdpHeaderSize + kLmResponseSize), 0};
    out.payload = encode_lm_response(resp);
    out.outer.payload_len = encoded_payload_size(out);
    host_.deliver_direct(query_src, std::move(out));
  }
}

void Node::sender_on_response(SenderState& st, const LmResponse& resp) {
  auto it = st.pending.find(resp.sender_seq);
  if (it == st.pending.end()) {
    diag_.unmatched_seq++;
    return;
  }
  PendingQuery p = it->second;
  st.pending.erase(it);
  if (resp.sender_tx_counter != p.tx_cum ||
      resp.sender_block != static_cast<std::uint8_t>(p.block_epoch & 0xff)) {
    diag_.echo_mismatches++;
    return;
  }
  std::int64_t now = host_.now_ns();
  // The block's color is re-activated two switches after the block began. The
  // reflector performed its reads somewhere inside the query/response window,
  // and the wire cannot carry its local view; if the response lands at or
  // past reactivation, every remote read in the exchange may have raced the
  // reactivated color, so both directions' samples get flagged.
  std::int64_t reactivate_ns =
      marking_.anchor_ns +
      static_cast<std::int64_t>(p.block_epoch + 2 - marking_.base_epoch) *
          marking_.period_ns;
  bool timing_suspect = now >= reactivate_ns;
  std::uint8_t fwd_flags = p.flags;
  if (timing_suspect) fwd_flags |= kReportFlagActiveRead;
  LossSample fwd{p.block_epoch, p.tx_cum, resp.reflector_rx_counter, now, fwd_flags};
  try {
    st.session->compute_interval_loss(MeasureDirection::Forward, fwd);
  } catch (const std::invalid_argument&) {
    diag_.stale_samples++;
  }

  if (resp.ctrl_code != kCtrlInBand) return;
  std::uint64_t rev_epoch = resolve_block_epoch(resp.reflector_block, p.block_epoch);
  CounterSnapshot rx;
  try {
    rx = engine_.read_counters({FlowDirection::Egress, st.session->sdlistreverse()},
                               color_of_epoch(rev_epoch));
  } catch (const NotMonitored&) {
    diag_.unknown_session++;
    return;
  }
  std::uint8_t rev_flags = timing_suspect ? kReportFlagActiveRead : std::uint8_t{0};
  if (rx.active_read) {
    diag_.early_active_reads++;
    rev_flags |= kReportFlagActiveRead;
  }
  LossSample rev{rev_epoch, resp.reflector_tx_counter, rx.packets, now, rev_flags};
  try {
    st.session->compute_interval_loss(MeasureDirection::Reverse, rev);
  } catch (const std::invalid_argument&) {
    diag_.stale_samples++;
  }
}

// --- southbound server -------------------------------------------------------

SRv6ManagerReply Node::srv6_manager_apply(SbMethod op, const SRv6ManagerRequest& req) {
  SRv6ManagerReply reply;
  if (req.path.has_value() == req.behavior.has_value()) {
    reply.status = SbStatus::BadRequest;
    return reply;
  }
  if (req.path) {
    const SRv6Path& spec = *req.path;
    auto dest = Ipv6Prefix::parse(spec.destination);
    if (!dest) {
      reply.status = SbStatus::BadRequest;
      return reply;
    }
    auto found = std::find_if(policies_.begin(), policies_.end(), [&](const SrPolicy& p) {
      return p.destination == *dest && p.table == spec.table;
    });
    switch (op) {
      case SbMethod::Create:
      case SbMethod::Update: {
        std::vector<SegmentId> sids;
        for (const auto& s : spec.sr_path) {
          auto sid = Ipv6Addr::parse(s);
          if (!sid) {
            reply.status = SbStatus::BadRequest;
            return reply;
          }
          sids.push_back(*sid);
        }
        if (sids.empty() || sids.size() > kMaxSegments ||
            spec.encapmode != "encap") {
          reply.status = SbStatus::BadRequest;
          return reply;
        }
        SrPolicy pol{*dest, SidList::of(std::move(sids)), spec.encapmode,
                     spec.table, spec.device};
        if (op == SbMethod::Create) {
          if (found != policies_.end()) {
            reply.status = SbStatus::AlreadyExists;
            return reply;
          }
          policies_.push_back(std::move(pol));
          path_specs_.push_back(spec);
        } else {
          if (found == policies_.end()) {
            reply.status = SbStatus::NotFound;
            return reply;
          }
          std::size_t i = static_cast<std::size_t>(found - policies_.begin());
          policies_[i] = std::move(pol);
          path_specs_[i] = spec;
        }
        reply.paths.push_back(spec);
        return reply;
      }
      case SbMethod::Get: {
        if (found == policies_.end()) {
          reply.status = SbStatus::NotFound;
          return reply;
        }
        reply.paths.push_back(path_specs_[static_cast<std::size_t>(found - policies_.begin())]);
        return reply;
      }
      case SbMethod::Remove: {
        if (found == policies_.end()) {
          reply.status = SbStatus::NotFound;
          return reply;
        }
        std::size_t i = static_cast<std::size_t>(found - policies_.begin());
        policies_.erase(policies_.begin() + static_cast<std::ptrdiff_t>(i));
        path_specs_.erase(path_specs_.begin() + static_cast<std::ptrdiff_t>(i));
        return reply;
      }
      default:
        reply.status = SbStatus::BadRequest;
        return reply;
    }
  }

  const SRv6Behavior& spec = *req.behavior;
  auto sid = Ipv6Addr::parse(spec.segment);
  if (!sid) {
    reply.status = SbStatus::BadRequest;
    return reply;
  }
  auto found = std::find_if(local_sids_.begin(), local_sids_.end(),
                            [&](const LocalSid& ls) { return ls.sid == *sid; });
  switch (op) {
    case SbMethod::Create:
    case SbMethod::Update: {
      auto behavior = parse_sid_behavior(spec.action);
      if (!behavior) {
        reply.status = SbStatus::BadRequest;
        return reply;
      }
      LocalSid ls{*sid, *behavior, spec.action};
      if (op == SbMethod::Create) {
        if (found != local_sids_.end()) {
          reply.status = SbStatus::AlreadyExists;
          return reply;
        }
        local_sids_.push_back(std::move(ls));
        behavior_specs_.push_back(spec);
      } else {
        if (found == local_sids_.end()) {
          reply.status = SbStatus::NotFound;
          return reply;
        }
        std::size_t i = static_cast<std::size_t>(found - local_sids_.begin());
        local_sids_[i] = std::move(ls);
        behavior_specs_[i] = spec;
      }
      reply.behaviors.push_back(spec);
      return reply;
    }
    case SbMethod::Get: {
      if (found == local_sids_.end()) {
        reply.status = SbStatus::NotFound;
        return reply;
      }
      reply.behaviors.push_back(
          behavior_specs_[static_cast<std::size_t>(found - local_sids_.begin())]);
      return reply;
    }
    case SbMethod::Remove: {
      if (found == local_sids_.end()) {
        reply.status = SbStatus::NotFound;
        return reply;
      }
      std::size_t i = static_cast<std::size_t>(found - local_sids_.begin());
      local_sids_.erase(local_sids_.begin() + static_cast<std::ptrdiff_t>(i));
      behavior_specs_.erase(behavior_specs_.begin() + static_cast<std::ptrdiff_t>(i));
      return reply;
    }
    default:
      reply.status = SbStatus::BadRequest;
      return reply;
  }
}

namespace {

// Shared option checks; only the zero/default enum values are implemented.
bool ports_valid(std::uint32_t ss, std::uint32_t refl) {
  return ss > 0 && ss <= 0xffff && refl > 0 && refl <= 0xffff && ss != refl;
}

bool color_options_valid(const ColorOptions& c, double* margin_out) {
  if (c.number_of_colors != 2) return false;
  if (!(c.interval_duration > 0)) return false;
  double margin = c.delay_margin > 0 ? c.delay_margin : c.interval_duration / 2;
  if (!(margin > 0 && margin < c.interval_duration)) return false;
  *margin_out = margin;
  return true;
}

std::int64_t to_ns(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * 1e9));
}

}  // namespace

StartFlowMonitoringReply Node::start_flow_monitoring_sender(
    const StartFlowMonitoringSenderRequest& req) {
  auto sdl = SidList::parse(req.sdlist);
  auto sdlrev = SidList::parse(req.sdlistreverse);
  auto punt = Ipv6Addr::parse(req.reflector_punt_sid);
  double margin = 0;
  if (!sdl || !sdlrev || !punt ||
      !ports_valid(req.sender_options.ss_udp_port, req.sender_options.refl_udp_port) ||
      req.sender_options.measurement_protocol != MeasurementProtocol::TWAMP ||
      req.sender_options.measurement_type != MeasurementType::LOSS ||
      req.sender_options.authentication_mode != AuthenticationMode::UNAUTHENTICATED ||
      !color_options_valid(req.color_options, &margin) ||
      (req.ctrl_code != kCtrlInBand && req.ctrl_code != kCtrlOutOfBand))
    return {SbStatus::InvalidOptions};

  std::string key = sdl->to_string();
  auto existing = senders_.find(key);
  if (existing != senders_.end()) {
    if (existing->second.session->running()) return {SbStatus::AlreadyRunning};
    senders_.erase(existing);  // a stopped session is replaced by a restart
  }

  FlowKey ingress{FlowDirection::Ingress, *sdl};
  FlowKey egress{FlowDirection::Egress, *sdlrev};
  try {
    engine_.add_monitored_flow(ingress);
  } catch (const AlreadyMonitored&) {
    return {SbStatus::InvalidOptions};
  }
  try {
    engine_.add_monitored_flow(egress);
  } catch (const AlreadyMonitored&) {
    engine_.remove_monitored_flow(ingress);
    return {SbStatus::InvalidOptions};
  }
  if (!attach_marking(to_ns(req.color_options.interval_duration))) {
    engine_.remove_monitored_flow(ingress);
    engine_.remove_monitored_flow(egress);
    return {SbStatus::InvalidOptions};
  }

  SenderState st;
  st.session = std::make_unique<MonitoringSession>(
      req.measure_id, *sdl, *sdlrev, id_, std::string{}, req.color_options);
  st.reflector_punt = *punt;
  st.ss_port = static_cast<std::uint16_t>(req.sender_options.ss_udp_port);
  st.refl_port = static_cast<std::uint16_t>(req.sender_options.refl_udp_port);
  st.ctrl_code = req.ctrl_code;
  st.margin_ns = to_ns(margin);
  senders_.emplace(std::move(key), std::move(st));
  return {SbStatus::Ok};
}

StartFlowMonitoringReply Node::start_flow_monitoring_reflector(
    const StartFlowMonitoringReflectorRequest& req) {
  auto sdl = SidList::parse(req.sdlist);
  auto sdlrev = SidList::parse(req.sdlistreverse);
  auto punt = Ipv6Addr::parse(req.sender_punt_sid);
  double margin = 0;
  if (!sdl || !sdlrev || !punt ||
      !ports_valid(req.reflector_options.ss_udp_port,
                   req.reflector_options.refl_udp_port) ||
      req.reflector_options.measurement_protocol != MeasurementProtocol::TWAMP ||
      req.reflector_options.measurement_type != MeasurementType::LOSS ||
      req.reflector_options.authentication_mode != AuthenticationMode::UNAUTHENTICATED ||
      !color_options_valid(req.color_options, &margin))
    return {SbStatus::InvalidOptions};

  std::string key = sdl->to_string();
  auto existing = reflectors_.find(key);
  if (existing != reflectors_.end()) {
    if (existing->second.running) return {SbStatus::AlreadyRunning};
    reflectors_.erase(existing);
  }

  FlowKey egress{FlowDirection::Egress, *sdl};
  FlowKey ingress{FlowDirection::Ingress, *sdlrev};
  try {
    engine_.add_monitored_flow(egress);
  } catch (const AlreadyMonitored&) {
    return {SbStatus::InvalidOptions};
  }
  try {
    engine_.add_monitored_flow(ingress);
  } catch (const AlreadyMonitored&) {
    engine_.remove_monitored_flow(egress);
    return {SbStatus::InvalidOptions};
  }
  if (!attach_marking(to_ns(req.color_options.interval_duration))) {
    engine_.remove_monitored_flow(egress);
    engine_.remove_monitored_flow(ingress);
    return {SbStatus::InvalidOptions};
  }

  ReflectorState rs;
  rs.measure_id = req.measure_id;
  rs.sdlist = *sdl;
  rs.sdlistreverse = *sdlrev;
  rs.sender_punt = *punt;
  rs.ss_port = static_cast<std::uint16_t>(req.reflector_options.ss_udp_port);
  rs.refl_port = static_cast<std::uint16_t>(req.reflector_options.refl_udp_port);
  reflectors_.emplace(std::move(key), std::move(rs));
  return {SbStatus::Ok};
}

StopFlowMonitoringReply Node::stop_flow_monitoring(SbMethod which,
                                                   const StopFlowMonitoringRequest& req) {
  auto sdl = SidList::parse(req.sdlist);
  if (!sdl) return {SbStatus::NotRunning};
  std::string key = sdl->to_string();
  if (which == SbMethod::StopSender) {
    auto it = senders_.find(key);
    if (it == senders_.end() || !it->second.session->running())
      return {SbStatus::NotRunning};
    it->second.session->stop();
    engine_.remove_monitored_flow({FlowDirection::Ingress, *sdl});
    engine_.remove_monitored_flow(
        {FlowDirection::Egress, it->second.session->sdlistreverse()});
    detach_marking();
    return {SbStatus::Ok};
  }
  if (which == SbMethod::StopReflector) {
    auto it = reflectors_.find(key);
    if (it == reflectors_.end() || !it->second.running) return {SbStatus::NotRunning};
    it->second.running = false;
    engine_.remove_monitored_flow({FlowDirection::Egress, *sdl});
    engine_.remove_monitored_flow({FlowDirection::Ingress, it->second.sdlistreverse});
    detach_marking();
    return {SbStatus::Ok};
  }
  return {SbStatus::BadRequest};
}

FlowMonitoringDataResponse Node::retrive_flow_monitoring_results(
    const RetriveFlowMonitoringDataRequest& req) {
  auto sdl = SidList::parse(req.sdlist);
  if (!sdl) return {SbStatus::UnknownSession, {}};
  auto it = senders_.find(sdl->to_string());
  if (it == senders_.end()) return {SbStatus::UnknownSession, {}};
  return {SbStatus::Ok, it->second.session->reports()};
}

const MonitoringSession* Node::find_sender_session(const SidList& sdlist) const {
  auto it = senders_.find(sdlist.to_string());
  return it == senders_.end() ? nullptr : it->second.session.get();
}

std::vector<const MonitoringSession*> Node::sender_sessions() const {
  std::vector<const MonitoringSession*> out;
  out.reserve(senders_.size());
  for (const auto& [key, st] : senders_) out.push_back(st.session.get());
  return out;
}

}  // namespace srv6pm
