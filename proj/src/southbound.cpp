#include "srv6pm/southbound.hpp"

#include <cmath>

namespace srv6pm {

const char* sb_status_name(SbStatus s) {
  switch (s) {
    case SbStatus::Ok: return "Ok";
    case SbStatus::NotFound: return "NotFound";
    case SbStatus::AlreadyExists: return "AlreadyExists";
    case SbStatus::AlreadyRunning: return "AlreadyRunning";
    case SbStatus::NotRunning: return "NotRunning";
    case SbStatus::InvalidOptions: return "InvalidOptions";
    case SbStatus::UnknownSession: return "UnknownSession";
    case SbStatus::BadRequest: return "BadRequest";
  }
  return "?";
}

// --- small helpers -----------------------------------------------------------

static void put_str_list(ByteWriter& w, const std::vector<std::string>& v) {
  if (v.size() > 0xffff) throw LengthError("string list too long");
  w.u16(static_cast<std::uint16_t>(v.size()));
  for (const auto& s : v) w.str(s);
}

static std::vector<std::string> get_str_list(ByteReader& r) {
  std::size_t n = r.u16();
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(r.str());
  return out;
}

static void put_i32(ByteWriter& w, std::int32_t v) {
  w.u32(static_cast<std::uint32_t>(v));
}
static std::int32_t get_i32(ByteReader& r) {
  return static_cast<std::int32_t>(r.u32());
}
static void put_i64(ByteWriter& w, std::int64_t v) {
  w.u64(static_cast<std::uint64_t>(v));
}
static std::int64_t get_i64(ByteReader& r) {
  return static_cast<std::int64_t>(r.u64());
}

// Durations cross the wire as integer nanoseconds.
static void put_seconds(ByteWriter& w, double seconds) {
  w.u64(static_cast<std::uint64_t>(std::llround(seconds * 1e9)));
}
static double get_seconds(ByteReader& r) {
  return static_cast<double>(r.u64()) / 1e9;
}

// --- entity codecs -----------------------------------------------------------

static void encode_path(ByteWriter& w, const SRv6Path& p) {
  w.str(p.destination);
  put_str_list(w, p.sr_path);
  w.str(p.encapmode);
  w.str(p.device);
  put_i32(w, p.table);
}

static SRv6Path decode_path(ByteReader& r) {
  SRv6Path p;
  p.destination = r.str();
  p.sr_path = get_str_list(r);
  p.encapmode = r.str();
  p.device = r.str();
  p.table = get_i32(r);
  return p;
}

static void encode_behavior(ByteWriter& w, const SRv6Behavior& b) {
  w.str(b.segment);
  w.str(b.action);
  w.str(b.nexthop);
  put_i32(w, b.table);
  w.str(b.interface);
  put_str_list(w, b.segs);
  w.str(b.device);
  put_i32(w, b.localsid_table);
}

static SRv6Behavior decode_behavior(ByteReader& r) {
  SRv6Behavior b;
  b.segment = r.str();
  b.action = r.str();
  b.nexthop = r.str();
  b.table = get_i32(r);
  b.interface = r.str();
  b.segs = get_str_list(r);
  b.device = r.str();
  b.localsid_table = get_i32(r);
  return b;
}

void encode_manager_request(ByteWriter& w, const SRv6ManagerRequest& req) {
  if (req.path.has_value() == req.behavior.has_value())
    throw std::invalid_argument("manager request must carry exactly one entity");
  if (req.path) {
    w.u8(1);
    encode_path(w, *req.path);
  } else {
    w.u8(2);
    encode_behavior(w, *req.behavior);
  }
}

SRv6ManagerRequest decode_manager_request(ByteReader& r) {
  SRv6ManagerRequest req;
  std::uint8_t kind = r.u8();
  if (kind == 1) req.path = decode_path(r);
  else if (kind == 2) req.behavior = decode_behavior(r);
  else throw MalformedPacket("unknown entity kind " + std::to_string(kind));
  return req;
}

void encode_manager_reply(ByteWriter& w, const SRv6ManagerReply& rep) {
  w.u8(static_cast<std::uint8_t>(rep.status));
  if (rep.paths.size() > 0xffff || rep.behaviors.size() > 0xffff)
    throw LengthError("manager reply too large");
  w.u16(static_cast<std::uint16_t>(rep.paths.size()));
  for (const auto& p : rep.paths) encode_path(w, p);
  w.u16(static_cast<std::uint16_t>(rep.behaviors.size()));
  for (const auto& b : rep.behaviors) encode_behavior(w, b);
}

SRv6ManagerReply decode_manager_reply(ByteReader& r) {
  SRv6ManagerReply rep;
  rep.status = static_cast<SbStatus>(r.u8());
  for (std::size_t i = 0, n = r.u16(); i < n; ++i) rep.paths.push_back(decode_path(r));
  for (std::size_t i = 0, n = r.u16(); i < n; ++i)
    rep.behaviors.push_back(decode_behavior(r));
  return rep;
}

// --- monitoring codecs -------------------------------------------------------

static void encode_sender_options(ByteWriter& w, const SenderOptions& o) {
  w.u32(o.ss_udp_port);
  w.u32(o.refl_udp_port);
  w.u8(static_cast<std::uint8_t>(o.measurement_protocol));
  w.u8(static_cast<std::uint8_t>(o.authentication_mode));
  w.u8(static_cast<std::uint8_t>(o.measurement_type));
  w.u8(static_cast<std::uint8_t>(o.timestamp_format));
  w.u8(static_cast<std::uint8_t>(o.measurement_delay_mode));
  w.u32(o.padding_mbz);
  w.u8(static_cast<std::uint8_t>(o.measurement_loss_mode));
  w.str(o.authentication_key);
}

static SenderOptions decode_sender_options(ByteReader& r) {
  SenderOptions o;
  o.ss_udp_port = r.u32();
  o.refl_udp_port = r.u32();
  o.measurement_protocol = static_cast<MeasurementProtocol>(r.u8());
  o.authentication_mode = static_cast<AuthenticationMode>(r.u8());
  o.measurement_type = static_cast<MeasurementType>(r.u8());
  o.timestamp_format = static_cast<TimestampFormat>(r.u8());
  o.measurement_delay_mode = static_cast<MeasurementDelayMode>(r.u8());
  o.padding_mbz = r.u32();
  o.measurement_loss_mode = static_cast<MeasurementLossMode>(r.u8());
  o.authentication_key = r.str();
  return o;
}

static void encode_reflector_options(ByteWriter& w, const ReflectorOptions& o) {
  w.u32(o.ss_udp_port);
  w.u32(o.refl_udp_port);
  w.u8(static_cast<std::uint8_t>(o.measurement_protocol));
  w.u8(static_cast<std::uint8_t>(o.authentication_mode));
  w.u8(static_cast<std::uint8_t>(o.measurement_type));
  w.u8(static_cast<std::uint8_t>(o.measurement_loss_mode));
  w.str(o.authentication_key);
}

static ReflectorOptions decode_reflector_options(ByteReader& r) {
  ReflectorOptions o;
  o.ss_udp_port = r.u32();
  o.refl_udp_port = r.u32();
  o.measurement_protocol = static_cast<MeasurementProtocol>(r.u8());
  o.authentication_mode = static_cast<AuthenticationMode>(r.u8());
  o.measurement_type = static_cast<MeasurementType>(r.u8());
  o.measurement_loss_mode = static_cast<MeasurementLossMode>(r.u8());
  o.authentication_key = r.str();
  return o;
}

static void encode_color_options(ByteWriter& w, const ColorOptions& o) {
  put_seconds(w, o.interval_duration);
  put_seconds(w, o.delay_margin);
  w.u32(o.number_of_colors);
}

static ColorOptions decode_color_options(ByteReader& r) {
  ColorOptions o;
  o.interval_duration = get_seconds(r);
  o.delay_margin = get_seconds(r);
  o.number_of_colors = r.u32();
  return o;
}

void encode_start_sender_request(ByteWriter& w,
                                 const StartFlowMonitoringSenderRequest& req) {
  w.u32(req.measure_id);
  w.str(req.sdlist);
  w.str(req.sdlistreverse);
  put_str_list(w, req.in_interfaces);
  put_str_list(w, req.out_interfaces);
  encode_sender_options(w, req.sender_options);
  encode_color_options(w, req.color_options);
  w.str(req.reflector_punt_sid);
  w.u8(req.ctrl_code);
}

StartFlowMonitoringSenderRequest decode_start_sender_request(ByteReader& r) {
  StartFlowMonitoringSenderRequest req;
  req.measure_id = r.u32();
  req.sdlist = r.str();
  req.sdlistreverse = r.str();
  req.in_interfaces = get_str_list(r);
  req.out_interfaces = get_str_list(r);
  req.sender_options = decode_sender_options(r);
  req.color_options = decode_color_options(r);
  req.reflector_punt_sid = r.str();
  req.ctrl_code = r.u8();
  return req;
}

void encode_start_reflector_request(ByteWriter& w,
                                    const StartFlowMonitoringReflectorRequest& req) {
  w.u32(req.measure_id);
  w.str(req.sdlist);
  w.str(req.sdlistreverse);
  put_str_list(w, req.in_interfaces);
  put_str_list(w, req.out_interfaces);
  encode_reflector_options(w, req.reflector_options);
  encode_color_options(w, req.color_options);
  w.str(req.sender_punt_sid);
}

StartFlowMonitoringReflectorRequest decode_start_reflector_request(ByteReader& r) {
  StartFlowMonitoringReflectorRequest req;
  req.measure_id = r.u32();
  req.sdlist = r.str();
  req.sdlistreverse = r.str();
  req.in_interfaces = get_str_list(r);
  req.out_interfaces = get_str_list(r);
  req.reflector_options = decode_reflector_options(r);
  req.color_options = decode_color_options(r);
  req.sender_punt_sid = r.str();
  return req;
}

void encode_loss_report(ByteWriter& w, const LossReport& rep) {
  w.u32(rep.measure_id);
  w.u64(rep.block_epoch);
  w.u8(static_cast<std::uint8_t>(rep.color));
  w.u8(static_cast<std::uint8_t>(rep.direction));
  w.u64(rep.interval_tx);
  w.u64(rep.interval_rx);
  put_i64(w, rep.interval_loss);
  w.u64(rep.cumulative_tx);
  w.u64(rep.cumulative_rx);
  put_i64(w, rep.cumulative_loss);
  put_i64(w, rep.read_timestamp_ns);
  w.u8(rep.flags);
}

LossReport decode_loss_report(ByteReader& r) {
  LossReport rep;
  rep.measure_id = r.u32();
  rep.block_epoch = r.u64();
  rep.color = static_cast<Color>(r.u8());
  rep.direction = static_cast<MeasureDirection>(r.u8());
  rep.interval_tx = r.u64();
  rep.interval_rx = r.u64();
  rep.interval_loss = get_i64(r);
  rep.cumulative_tx = r.u64();
  rep.cumulative_rx = r.u64();
  rep.cumulative_loss = get_i64(r);
  rep.read_timestamp_ns = get_i64(r);
  rep.flags = r.u8();
  return rep;
}

void encode_data_response(ByteWriter& w, const FlowMonitoringDataResponse& resp) {
  w.u8(static_cast<std::uint8_t>(resp.status));
  if (resp.reports.size() > 0xffffffffULL) throw LengthError("too many reports");
  w.u32(static_cast<std::uint32_t>(resp.reports.size()));
  for (const auto& rep : resp.reports) encode_loss_report(w, rep);
}

FlowMonitoringDataResponse decode_data_response(ByteReader& r) {
  FlowMonitoringDataResponse resp;
  resp.status = static_cast<SbStatus>(r.u8());
  for (std::size_t i = 0, n = r.u32(); i < n; ++i)
    resp.reports.push_back(decode_loss_report(r));
  return resp;
}

// --- frame dispatch ----------------------------------------------------------

std::vector<std::uint8_t> sb_call(SouthboundServer& server,
                                  std::span<const std::uint8_t> frame) {
  ByteReader r(frame);
  auto method = static_cast<SbMethod>(r.u8());
  ByteWriter w;
  switch (method) {
    case SbMethod::Create:
    case SbMethod::Get:
    case SbMethod::Update:
    case SbMethod::Remove: {
      auto req = decode_manager_request(r);
      r.expect_done();
      encode_manager_reply(w, server.srv6_manager_apply(method, req));
      break;
    }
    case SbMethod::StartSender: {
      auto req = decode_start_sender_request(r);
      r.expect_done();
      w.u8(static_cast<std::uint8_t>(
          server.start_flow_monitoring_sender(req).status));
      break;
    }
    case SbMethod::StartReflector: {
      auto req = decode_start_reflector_request(r);
      r.expect_done();
      w.u8(static_cast<std::uint8_t>(
          server.start_flow_monitoring_reflector(req).status));
      break;
    }
    case SbMethod::StopSender:
    case SbMethod::StopReflector: {
      StopFlowMonitoringRequest req{r.str()};
      r.expect_done();
      w.u8(static_cast<std::uint8_t>(server.stop_flow_monitoring(method, req).status));
      break;
    }
    case SbMethod::Retrieve: {
      RetriveFlowMonitoringDataRequest req{r.str()};
      r.expect_done();
      encode_data_response(w, server.retrive_flow_monitoring_results(req));
      break;
    }
    default:
      throw std::invalid_argument("unknown southbound method " +
                                  std::to_string(static_cast<int>(method)));
  }
  return w.take();
}

// --- typed client ------------------------------------------------------------

namespace sbclient {

static std::vector<std::uint8_t> call(SouthboundServer& server, SbMethod method,
                                      ByteWriter&& body) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(method));
  auto b = body.take();
  w.bytes(b);
  return sb_call(server, w.take());
}

SRv6ManagerReply srv6_manager_apply(SouthboundServer& server, SbMethod op,
                                    const SRv6ManagerRequest& req) {
  ByteWriter body;
  encode_manager_request(body, req);
  auto reply = call(server, op, std::move(body));
  ByteReader r(reply);
  auto out = decode_manager_reply(r);
  r.expect_done();
  return out;
}

StartFlowMonitoringReply start_flow_monitoring_sender(
    SouthboundServer& server, const StartFlowMonitoringSenderRequest& req) {
  ByteWriter body;
  encode_start_sender_request(body, req);
  auto reply = call(server, SbMethod::StartSender, std::move(body));
  ByteReader r(reply);
  StartFlowMonitoringReply out{static_cast<SbStatus>(r.u8())};
  r.expect_done();
  return out;
}

StartFlowMonitoringReply start_flow_monitoring_reflector(
    SouthboundServer& server, const StartFlowMonitoringReflectorRequest& req) {
  ByteWriter body;
  encode_start_reflector_request(body, req);
  auto reply = call(server, SbMethod::StartReflector, std::move(body));
  ByteReader r(reply);
  StartFlowMonitoringReply out{static_cast<SbStatus>(r.u8())};
  r.expect_done();
  return out;
}

static StopFlowMonitoringReply stop(SouthboundServer& server, SbMethod which,
                                    const StopFlowMonitoringRequest& req) {
  ByteWriter body;
  body.str(req.sdlist);
  auto reply = call(server, which, std::move(body));
  ByteReader r(reply);
  StopFlowMonitoringReply out{static_cast<SbStatus>(r.u8())};
  r.expect_done();
  return out;
}

StopFlowMonitoringReply stop_flow_monitoring_sender(
    SouthboundServer& server, const StopFlowMonitoringRequest& req) {
  return stop(server, SbMethod::StopSender, req);
}

StopFlowMonitoringReply stop_flow_monitoring_reflector(
    SouthboundServer& server, const StopFlowMonitoringRequest& req) {
  return stop(server, SbMethod::StopReflector, req);
}

FlowMonitoringDataResponse retrive_flow_monitoring_results(
    SouthboundServer& server, const RetriveFlowMonitoringDataRequest& req) {
  ByteWriter body;
  body.str(req.sdlist);
  auto reply = call(server, SbMethod::Retrieve, std::move(body));
  ByteReader r(reply);
  auto out = decode_data_response(r);
  r.expect_done();
  return out;
}

}  // namespace sbclient

}  // namespace srv6pm
