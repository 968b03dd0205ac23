#pragma once

// Scenario configuration: the declarative description of one simulated
// network — topology, provisioning, traffic and monitoring sessions — plus
// the JSON codec, structural validation and the bundled presets.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srv6pm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodeSpec {
  std::string id;
  std::vector<std::string> addresses;      // router addresses; first is primary
  std::string punt_sid;                    // probe punt segment, auto-provisioned
  std::vector<std::string> host_prefixes;  // attached host networks
};

struct LinkSpec {
  std::string a;
  std::string b;
  double delay = 0.001;    // one-way seconds, both directions
  double loss_rate = 0.0;  // independent per-packet drop probability
};

struct PolicySpec {
  std::string node;
  std::string destination;  // prefix captured at ingress, "addr/len"
  std::string sid_list;     // comma-separated segments, path order
  std::string encapmode = "encap";
  std::int32_t table = 254;
};

struct LocalSidSpec {
  std::string node;
  std::string sid;
  std::string behavior;  // "End", "End.DT6" or "End.OP"
};

struct FlowSpec {
  std::string src;  // host address inside some node's host prefix
  std::string dst;
  double rate = 100.0;     // packets per second
  double duration = 60.0;  // seconds
  std::uint32_t payload_size = 64;
  double start = 0.0;
};

struct SessionSpec {
  std::uint32_t measure_id = 0;
  std::string sender;     // node id
  std::string reflector;  // node id
  std::string sdlist;     // forward segment list (sender -> reflector)
  std::string sdlistreverse;
  std::uint32_t ss_udp_port = 1205;
  std::uint32_t refl_udp_port = 1206;
  double interval_duration = 10.0;
  double delay_margin = 0.0;  // <= 0 means half the interval
  std::uint32_t number_of_colors = 2;
  std::string response_mode = "inband";  // or "outband"
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::string description;
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<PolicySpec> policies;
  std::vector<LocalSidSpec> local_sids;
  std::vector<FlowSpec> flows;
  std::vector<SessionSpec> sessions;
};

// JSON text -> config. ParseError on malformed JSON, wrong value types or
// unknown keys (typo protection). Does not cross-check references.
ScenarioConfig parse_scenario(const std::string& text);

// Semantic checks: referenced nodes/hosts exist, rates/losses/ports/margins
// in range, session keys unique. Throws ValidationError naming the offender.
void validate_scenario(const ScenarioConfig& cfg);

// Canonical JSON form; parse_scenario(scenario_to_json(c)) == c.
std::string scenario_to_json(const ScenarioConfig& cfg);

// Bundled scenarios, addressable by name everywhere a path is accepted.
std::vector<std::string> preset_names();
std::optional<ScenarioConfig> preset_scenario(const std::string& name);

// Horizon that covers all traffic, the probe exchange for every session's
// last traffic-bearing block, and an in-flight drain allowance.
double default_run_until(const ScenarioConfig& cfg);

}  // namespace srv6pm
