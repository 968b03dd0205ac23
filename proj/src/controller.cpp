#include "srv6pm/controller.hpp"

namespace srv6pm {

namespace {

[[noreturn]] void rejected(const std::string& what, SbStatus status) {
  throw ControllerError(what + ": " + sb_status_name(status));
}

const NodeSpec& node_spec(const ScenarioConfig& cfg, const std::string& id) {
  for (const auto& n : cfg.nodes)
    if (n.id == id) return n;
  throw ControllerError("unknown node " + id);
}

std::vector<std::string> segment_texts(const std::string& sid_list) {
  std::vector<std::string> out;
  auto sids = SidList::parse(sid_list);
  if (!sids) throw ControllerError("bad segment list " + sid_list);
  for (const auto& s : *sids) out.push_back(s.to_string());
  return out;
}

}  // namespace

void Controller::apply_scenario() {
  const ScenarioConfig& cfg = sim_.config();

  for (const auto& n : cfg.nodes) {
    if (n.punt_sid.empty()) continue;
    SRv6ManagerRequest req;
    req.behavior = SRv6Behavior{n.punt_sid, "End.OP", "", 0, "", {}, "", 0};
    auto reply = sbclient::srv6_manager_apply(sim_.node(n.id), SbMethod::Create, req);
    if (reply.status != SbStatus::Ok)
      rejected("punt behavior on " + n.id, reply.status);
  }

  for (const auto& ls : cfg.local_sids) {
    SRv6ManagerRequest req;
    req.behavior = SRv6Behavior{ls.sid, ls.behavior, "", 0, "", {}, "", 0};
    auto reply = sbclient::srv6_manager_apply(sim_.node(ls.node), SbMethod::Create, req);
    if (reply.status != SbStatus::Ok)
      rejected("behavior " + ls.sid + " on " + ls.node, reply.status);
  }

  for (const auto& p : cfg.policies) {
    SRv6ManagerRequest req;
    req.path = SRv6Path{p.destination, segment_texts(p.sid_list), p.encapmode, "",
                        p.table};
    auto reply = sbclient::srv6_manager_apply(sim_.node(p.node), SbMethod::Create, req);
    if (reply.status != SbStatus::Ok)
      rejected("policy " + p.destination + " on " + p.node, reply.status);
  }

  for (const auto& s : cfg.sessions) {
    const NodeSpec& sender = node_spec(cfg, s.sender);
    const NodeSpec& reflector = node_spec(cfg, s.reflector);
    ColorOptions colors{s.interval_duration, s.delay_margin, s.number_of_colors};

    StartFlowMonitoringReflectorRequest refl;
    refl.measure_id = s.measure_id;
    refl.sdlist = s.sdlist;
    refl.sdlistreverse = s.sdlistreverse;
    refl.reflector_options.ss_udp_port = s.ss_udp_port;
    refl.reflector_options.refl_udp_port = s.refl_udp_port;
    refl.color_options = colors;
    refl.sender_punt_sid = sender.punt_sid;
    auto refl_reply =
        sbclient::start_flow_monitoring_reflector(sim_.node(s.reflector), refl);
    if (refl_reply.status != SbStatus::Ok)
      rejected("reflector for measure " + std::to_string(s.measure_id),
               refl_reply.status);

    StartFlowMonitoringSenderRequest snd;
    snd.measure_id = s.measure_id;
    snd.sdlist = s.sdlist;
    snd.sdlistreverse = s.sdlistreverse;
    snd.sender_options.ss_udp_port = s.ss_udp_port;
    snd.sender_options.refl_udp_port = s.refl_udp_port;
    snd.color_options = colors;
    snd.reflector_punt_sid = reflector.punt_sid;
    snd.ctrl_code = s.response_mode == "inband" ? kCtrlInBand : kCtrlOutOfBand;
    auto snd_reply = sbclient::start_flow_monitoring_sender(sim_.node(s.sender), snd);
    if (snd_reply.status != SbStatus::Ok)
      rejected("sender for measure " + std::to_string(s.measure_id), snd_reply.status);
  }
}

void Controller::stop_all() {
  const ScenarioConfig& cfg = sim_.config();
  for (const auto& s : cfg.sessions) {
    auto sender_reply = sbclient::stop_flow_monitoring_sender(sim_.node(s.sender),
                                                              {s.sdlist});
    if (sender_reply.status != SbStatus::Ok)
      rejected("stop sender for measure " + std::to_string(s.measure_id),
               sender_reply.status);
    auto refl_reply = sbclient::stop_flow_monitoring_reflector(sim_.node(s.reflector),
                                                               {s.sdlist});
    if (refl_reply.status != SbStatus::Ok)
      rejected("stop reflector for measure " + std::to_string(s.measure_id),
               refl_reply.status);
  }
}

std::size_t Controller::collect() {
  const ScenarioConfig& cfg = sim_.config();
  std::size_t published = 0;
  for (const auto& s : cfg.sessions) {
    auto response =
        sbclient::retrive_flow_monitoring_results(sim_.node(s.sender), {s.sdlist});
    if (response.status != SbStatus::Ok)
      rejected("retrieve for measure " + std::to_string(s.measure_id),
               response.status);
    std::string fwd_list = SidList::parse(s.sdlist)->to_string();
    std::string rev_list = SidList::parse(s.sdlistreverse)->to_string();
    for (const auto& report : response.reports) {
      const std::string& sids =
          report.direction == MeasureDirection::Forward ? fwd_list : rev_list;
      MeasurementRecord record = record_from_report(report, sids);
      for (RecordSink* sink : sinks_) sink->append(record);
      published++;
    }
  }
  return published;
}

}  // namespace srv6pm
