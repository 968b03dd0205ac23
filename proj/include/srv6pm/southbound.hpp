#pragma once

// Control-plane message surface between the controller and the routers,
// mirroring a protobuf-style RPC contract: an SRv6 entity manager (paths and
// local-SID behaviors) and a flow-monitoring service (start/stop sender and
// reflector, retrieve results — the service spelling `retrive...` is kept for
// compatibility). Calls are in-process but always cross a documented byte
// serialization, so the contract stays honest for a future remote transport.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srv6pm/packet.hpp"

namespace srv6pm {

// --- SRv6 entity manager -----------------------------------------------------

struct SRv6Path {
  std::string destination;           // route the policy captures, "addr/len"
  std::vector<std::string> sr_path;  // segment addresses, path order
  std::string encapmode = "encap";
  std::string device;
  std::int32_t table = 254;

  bool operator==(const SRv6Path&) const = default;
};

struct SRv6Behavior {
  std::string segment;  // local SID to match
  std::string action;   // "End", "End.DT6" (decap) or "End.OP" (punt)
  std::string nexthop;
  std::int32_t table = 0;
  std::string interface;
  std::vector<std::string> segs;
  std::string device;
  std::int32_t localsid_table = 0;

  bool operator==(const SRv6Behavior&) const = default;
};

// Exactly one of path/behavior is present.
struct SRv6ManagerRequest {
  std::optional<SRv6Path> path;
  std::optional<SRv6Behavior> behavior;
};

enum class SbStatus : std::uint8_t {
  Ok = 0,
  NotFound = 1,
  AlreadyExists = 2,
  AlreadyRunning = 3,
  NotRunning = 4,
  InvalidOptions = 5,
  UnknownSession = 6,
  BadRequest = 7,
};

const char* sb_status_name(SbStatus s);

struct SRv6ManagerReply {
  SbStatus status = SbStatus::Ok;
  std::vector<SRv6Path> paths;
  std::vector<SRv6Behavior> behaviors;

  bool operator==(const SRv6ManagerReply&) const = default;
};

// --- flow monitoring ---------------------------------------------------------

// Enum values follow protobuf convention: the zero value is the supported
// default, so a zero-initialized options block is valid.
enum class MeasurementProtocol : std::uint8_t { TWAMP = 0, STAMP = 1 };
enum class AuthenticationMode : std::uint8_t { UNAUTHENTICATED = 0, HMAC_SHA_256 = 1 };
enum class MeasurementType : std::uint8_t { LOSS = 0, DELAY = 1 };
enum class TimestampFormat : std::uint8_t { PTPv2 = 0, NTP = 1 };
enum class MeasurementDelayMode : std::uint8_t { ONE_WAY = 0, TWO_WAY = 1 };
enum class MeasurementLossMode : std::uint8_t { INFERRED = 0, DIRECT = 1 };

struct SenderOptions {
  std::uint32_t ss_udp_port = 0;
  std::uint32_t refl_udp_port = 0;
  MeasurementProtocol measurement_protocol = MeasurementProtocol::TWAMP;
  AuthenticationMode authentication_mode = AuthenticationMode::UNAUTHENTICATED;
  MeasurementType measurement_type = MeasurementType::LOSS;
  TimestampFormat timestamp_format = TimestampFormat::PTPv2;
  MeasurementDelayMode measurement_delay_mode = MeasurementDelayMode::ONE_WAY;
  std::uint32_t padding_mbz = 0;
  MeasurementLossMode measurement_loss_mode = MeasurementLossMode::INFERRED;
  std::string authentication_key;

  bool operator==(const SenderOptions&) const = default;
};

struct ReflectorOptions {
  std::uint32_t ss_udp_port = 0;
  std::uint32_t refl_udp_port = 0;
  MeasurementProtocol measurement_protocol = MeasurementProtocol::TWAMP;
  AuthenticationMode authentication_mode = AuthenticationMode::UNAUTHENTICATED;
  MeasurementType measurement_type = MeasurementType::LOSS;
  MeasurementLossMode measurement_loss_mode = MeasurementLossMode::INFERRED;
  std::string authentication_key;

  bool operator==(const ReflectorOptions&) const = default;
};

struct ColorOptions {
  double interval_duration = 10.0;  // block length T, simulated seconds
  double delay_margin = 0.0;        // <= 0 means "use T/2"
  std::uint32_t number_of_colors = 2;

  bool operator==(const ColorOptions&) const = default;
};

struct StartFlowMonitoringSenderRequest {
  std::uint32_t measure_id = 0;
  std::string sdlist;         // forward segment list, comma-separated
  std::string sdlistreverse;  // reverse segment list
  std::vector<std::string> in_interfaces;
  std::vector<std::string> out_interfaces;
  SenderOptions sender_options;
  ColorOptions color_options;
  // Extensions beyond the listed contract (additive; see notes): the punt
  // segment on the reflector node that query probes target, and the response
  // path selector stamped into queries.
  std::string reflector_punt_sid;
  std::uint8_t ctrl_code = kCtrlInBand;

  bool operator==(const StartFlowMonitoringSenderRequest&) const = default;
};

struct StartFlowMonitoringReflectorRequest {
  std::uint32_t measure_id = 0;
  std::string sdlist;
  std::string sdlistreverse;
  std::vector<std::string> in_interfaces;
  std::vector<std::string> out_interfaces;
  ReflectorOptions reflector_options;
  ColorOptions color_options;
  // Extension: punt segment on the sender node, used for in-band responses.
  std::string sender_punt_sid;

  bool operator==(const StartFlowMonitoringReflectorRequest&) const = default;
};

struct StartFlowMonitoringReply {
  SbStatus status = SbStatus::Ok;
  bool operator==(const StartFlowMonitoringReply&) const = default;
};

struct StopFlowMonitoringRequest {
  std::string sdlist;
  bool operator==(const StopFlowMonitoringRequest&) const = default;
};

struct StopFlowMonitoringReply {
  SbStatus status = SbStatus::Ok;
  bool operator==(const StopFlowMonitoringReply&) const = default;
};

struct RetriveFlowMonitoringDataRequest {
  std::string sdlist;
  bool operator==(const RetriveFlowMonitoringDataRequest&) const = default;
};

// One settled measurement interval for one direction of a session.
enum class MeasureDirection : std::uint8_t { Forward = 0, Reverse = 1 };

inline const char* measure_direction_name(MeasureDirection d) {
  return d == MeasureDirection::Forward ? "forward" : "reverse";
}

inline constexpr std::uint8_t kReportFlagNegativeLoss = 0x01;
inline constexpr std::uint8_t kReportFlagActiveRead = 0x02;

struct LossReport {
  std::uint32_t measure_id = 0;
  std::uint64_t block_epoch = 0;
  Color color = Color::R;
  MeasureDirection direction = MeasureDirection::Forward;
  std::uint64_t interval_tx = 0;
  std::uint64_t interval_rx = 0;
  std::int64_t interval_loss = 0;
  std::uint64_t cumulative_tx = 0;
  std::uint64_t cumulative_rx = 0;
  std::int64_t cumulative_loss = 0;
  std::int64_t read_timestamp_ns = 0;
  std::uint8_t flags = 0;

  bool operator==(const LossReport&) const = default;
};

struct FlowMonitoringDataResponse {
  SbStatus status = SbStatus::Ok;
  std::vector<LossReport> reports;

  bool operator==(const FlowMonitoringDataResponse&) const = default;
};

// --- transport ---------------------------------------------------------------

enum class SbMethod : std::uint8_t {
  Create = 1,
  Get = 2,
  Update = 3,
  Remove = 4,
  StartSender = 5,
  StartReflector = 6,
  StopSender = 7,
  StopReflector = 8,
  Retrieve = 9,
};

// Node-side service surface. A router implements this; the controller talks
// to it only through encoded frames (sb_call below).
class SouthboundServer {
 public:
  virtual ~SouthboundServer() = default;
  virtual SRv6ManagerReply srv6_manager_apply(SbMethod op,
                                              const SRv6ManagerRequest& req) = 0;
  virtual StartFlowMonitoringReply start_flow_monitoring_sender(
      const StartFlowMonitoringSenderRequest& req) = 0;
  virtual StartFlowMonitoringReply start_flow_monitoring_reflector(
      const StartFlowMonitoringReflectorRequest& req) = 0;
  virtual StopFlowMonitoringReply stop_flow_monitoring(
      SbMethod which, const StopFlowMonitoringRequest& req) = 0;
  virtual FlowMonitoringDataResponse retrive_flow_monitoring_results(
      const RetriveFlowMonitoringDataRequest& req) = 0;
};

// Decodes a request frame (method byte + body), invokes the server, returns
// the encoded reply. Throws LengthError / std::invalid_argument on garbage.
std::vector<std::uint8_t> sb_call(SouthboundServer& server,
                                  std::span<const std::uint8_t> frame);

// Typed client wrappers: encode the request, run sb_call, decode the reply.
namespace sbclient {
SRv6ManagerReply srv6_manager_apply(SouthboundServer& server, SbMethod op,
                                    const SRv6ManagerRequest& req);
StartFlowMonitoringReply start_flow_monitoring_sender(
    SouthboundServer& server, const StartFlowMonitoringSenderRequest& req);
StartFlowMonitoringReply start_flow_monitoring_reflector(
    SouthboundServer& server, const StartFlowMonitoringReflectorRequest& req);
StopFlowMonitoringReply stop_flow_monitoring_sender(
    SouthboundServer& server, const StopFlowMonitoringRequest& req);
StopFlowMonitoringReply stop_flow_monitoring_reflector(
    SouthboundServer& server, const StopFlowMonitoringRequest& req);
FlowMonitoringDataResponse retrive_flow_monitoring_results(
    SouthboundServer& server, const RetriveFlowMonitoringDataRequest& req);
}  // namespace sbclient

// Individual message codecs, exposed for tests and for the frame functions.
void encode_manager_request(ByteWriter& w, const SRv6ManagerRequest& req);
SRv6ManagerRequest decode_manager_request(ByteReader& r);
void encode_manager_reply(ByteWriter& w, const SRv6ManagerReply& rep);
SRv6ManagerReply decode_manager_reply(ByteReader& r);
void encode_start_sender_request(ByteWriter& w, const StartFlowMonitoringSenderRequest& req);
StartFlowMonitoringSenderRequest decode_start_sender_request(ByteReader& r);
void encode_start_reflector_request(ByteWriter& w, const StartFlowMonitoringReflectorRequest& req);
StartFlowMonitoringReflectorRequest decode_start_reflector_request(ByteReader& r);
void encode_loss_report(ByteWriter& w, const LossReport& rep);
LossReport decode_loss_report(ByteReader& r);
void encode_data_response(ByteWriter& w, const FlowMonitoringDataResponse& resp);
FlowMonitoringDataResponse decode_data_response(ByteReader& r);

}  // namespace srv6pm
