#pragma once

// The SRv6 router: ingress classification + policy encapsulation + coloring +
// counting, transit segment processing, egress counting + decapsulation,
// probe punting, and the measurement sender/reflector agents. A node is also
// the server side of the southbound control API.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "srv6pm/addr.hpp"
#include "srv6pm/counting.hpp"
#include "srv6pm/packet.hpp"
#include "srv6pm/session.hpp"
#include "srv6pm/southbound.hpp"

namespace srv6pm {

enum class SidBehavior : std::uint8_t {
  End,       // advance to the next segment
  EndDecap,  // egress: count if monitored, strip outer + SRH, forward inner
  EndOP,     // punt the payload to the local measurement agent
};

// Accepts both the short names and the dotted action spellings used by the
// southbound API ("End", "End.DT6", "End.OP").
std::optional<SidBehavior> parse_sid_behavior(std::string_view action);
const char* sid_behavior_action(SidBehavior b);  // canonical dotted spelling

struct SrPolicy {
  Ipv6Prefix destination;
  SidList sid_list;
  std::string encapmode = "encap";
  std::int32_t table = 254;
  std::string device;
};

struct LocalSid {
  SegmentId sid;
  SidBehavior behavior = SidBehavior::End;
  std::string action;  // spelling as provisioned, echoed on Get
};

enum class DropReason : std::uint8_t { NoRoute, Malformed, HopLimitExpired };
const char* drop_reason_name(DropReason r);

struct Forward {
  std::string next_hop;
};
struct DeliverLocal {};
struct Punted {};
struct Dropped {
  DropReason reason;
};
using ForwardingDecision = std::variant<Forward, DeliverLocal, Punted, Dropped>;

// Services the surrounding simulator provides to a node. Nodes never touch
// each other directly; everything crosses this seam.
class NodeHost {
 public:
  virtual ~NodeHost() = default;
  virtual std::int64_t now_ns() const = 0;
  virtual void schedule(std::int64_t at_ns, std::function<void()> fn) = 0;
  // Hands a locally-originated packet to the dataplane at the current time.
  virtual void originate(const std::string& node_id, Packet&& pkt) = 0;
  // Management-plane delivery straight to the node owning dst_addr (used for
  // out-of-band responses, which must not ride the lossy dataplane).
  virtual void deliver_direct(const Ipv6Addr& dst_addr, Packet&& pkt) = 0;
  // Ground-truth drop-oracle hooks. oracle_sent stamps the packet.
  virtual void oracle_sent(Packet& pkt, const FlowKey& key, std::uint64_t epoch) = 0;
  virtual void oracle_delivered(const Packet& pkt) = 0;
  virtual void oracle_dropped(const Packet& pkt) = 0;
};

struct NodeDiagnostics {
  std::uint64_t drops_no_route = 0;
  std::uint64_t drops_malformed = 0;
  std::uint64_t drops_hop_limit = 0;
  std::uint64_t unknown_session = 0;   // probe matched no agent
  std::uint64_t unmatched_seq = 0;     // response with no pending query
  std::uint64_t echo_mismatches = 0;   // response echo fields disagree with query
  std::uint64_t stale_samples = 0;     // sample older than the differencing lane
  std::uint64_t early_active_reads = 0;  // counter read while its color active
  std::uint64_t malformed_probes = 0;
  std::uint64_t duplicate_marking_period = 0;  // session rejected: period clash
};

class Node final : public SouthboundServer {
 public:
  Node(std::string id, Ipv6Addr address, NodeHost& host, unsigned workers = 1);

  const std::string& id() const { return id_; }
  const Ipv6Addr& address() const { return address_; }

  // --- static provisioning (simulator build time) -------------------------
  void add_address(const Ipv6Addr& a);
  void add_host_prefix(const Ipv6Prefix& p);
  void add_route(const Ipv6Prefix& prefix, const std::string& next_hop);
  bool owns_address(const Ipv6Addr& a) const;
  bool owns_host(const Ipv6Addr& a) const;

  // --- dataplane -----------------------------------------------------------
  // Processes one packet to a final decision. May originate further packets
  // (agent responses) through the host. The packet is consumed/rewritten.
  ForwardingDecision process_packet(Packet& pkt);

  // --- southbound server ---------------------------------------------------
  SRv6ManagerReply srv6_manager_apply(SbMethod op,
                                      const SRv6ManagerRequest& req) override;
  StartFlowMonitoringReply start_flow_monitoring_sender(
      const StartFlowMonitoringSenderRequest& req) override;
  StartFlowMonitoringReply start_flow_monitoring_reflector(
      const StartFlowMonitoringReflectorRequest& req) override;
  StopFlowMonitoringReply stop_flow_monitoring(
      SbMethod which, const StopFlowMonitoringRequest& req) override;
  FlowMonitoringDataResponse retrive_flow_monitoring_results(
      const RetriveFlowMonitoringDataRequest& req) override;

  // --- inspection ----------------------------------------------------------
  CountingEngine& engine() { return engine_; }
  const CountingEngine& engine() const { return engine_; }
  const NodeDiagnostics& diagnostics() const { return diag_; }
  const std::vector<SrPolicy>& policies() const { return policies_; }
  const MonitoringSession* find_sender_session(const SidList& sdlist) const;
  std::vector<const MonitoringSession*> sender_sessions() const;
  // Marking anchor/period, exposed for horizon planning. Zero when disarmed.
  std::int64_t marking_anchor_ns() const { return marking_.anchor_ns; }
  std::int64_t marking_period_ns() const { return marking_.period_ns; }

 private:
  struct PendingQuery {
    std::uint64_t block_epoch = 0;
    std::uint64_t tx_cum = 0;
    std::int64_t emitted_ns = 0;
    std::uint8_t flags = 0;  // anomaly bits seen at emission (active TX read)
  };

  struct SenderState {
    std::unique_ptr<MonitoringSession> session;
    SegmentId reflector_punt;
    std::uint16_t ss_port = 0;
    std::uint16_t refl_port = 0;
    std::uint8_t ctrl_code = kCtrlInBand;
    std::int64_t margin_ns = 0;
    std::uint32_t next_seq = 0;
    std::map<std::uint32_t, PendingQuery> pending;
  };

  struct ReflectorState {
    std::uint32_t measure_id = 0;
    SidList sdlist;
    SidList sdlistreverse;
    SegmentId sender_punt;
    std::uint16_t ss_port = 0;
    std::uint16_t refl_port = 0;
    std::uint32_t next_seq = 0;
    bool running = true;
  };

  struct MarkingSchedule {
    bool armed = false;
    std::int64_t anchor_ns = 0;
    std::int64_t period_ns = 0;
    std::uint64_t base_epoch = 0;  // engine epoch when the schedule was armed
    int attached = 0;
  };

  // dataplane stages; nullopt means "re-enter classification" (after encap,
  // segment advance, or decap)
  std::optional<ForwardingDecision> dispatch(Packet& pkt);
  void apply_policy_encap(Packet& pkt, const SrPolicy& policy);
  std::optional<ForwardingDecision> process_local_sid(Packet& pkt, const LocalSid& ls);
  ForwardingDecision route_or_drop(Packet& pkt);
  ForwardingDecision drop(Packet& pkt, DropReason reason);
  const SrPolicy* match_policy(const Ipv6Addr& dst) const;
  const LocalSid* find_local_sid(const Ipv6Addr& dst) const;

  // measurement plumbing
  bool pm_dispatch(const Packet& pkt, const SidList* probe_sids);
  void marking_tick();
  void sender_emit_query(SenderState& st, std::uint64_t block_epoch);
  void reflector_on_query(ReflectorState& st, const LmQuery& q,
                          const Ipv6Addr& query_src);
  void sender_on_response(SenderState& st, const LmResponse& resp);
  // Arms the per-node marking schedule or joins it; false if the requested
  // period clashes with the armed one.
  bool attach_marking(std::int64_t period_ns);
  void detach_marking();

  std::string id_;
  Ipv6Addr address_;
  NodeHost& host_;
  CountingEngine engine_;
  NodeDiagnostics diag_;

  std::vector<Ipv6Addr> addresses_;
  std::vector<Ipv6Prefix> host_prefixes_;
  std::vector<std::pair<Ipv6Prefix, std::string>> routes_;  // kept sorted by -len
  std::vector<SrPolicy> policies_;
  std::vector<LocalSid> local_sids_;
  // Entity specs as provisioned, aligned with policies_/local_sids_, so Get
  // echoes back exactly what Create stored.
  std::vector<SRv6Path> path_specs_;
  std::vector<SRv6Behavior> behavior_specs_;

  MarkingSchedule marking_;
  // Keyed by forward sdlist text; ordered so dispatch scans deterministically.
  std::map<std::string, SenderState> senders_;
  std::map<std::string, ReflectorState> reflectors_;
};

}  // namespace srv6pm
