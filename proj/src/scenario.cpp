#include "srv6pm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "srv6pm/addr.hpp"
#include "srv6pm/node.hpp"

namespace srv6pm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return it.key() == k; });
    if (!known) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

const json* opt_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string req_string(const json& obj, const std::string& where, const char* key) {
  const json* v = opt_field(obj, key);
  if (!v) fail(where, std::string("missing \"") + key + "\"");
  if (!v->is_string()) fail(where, std::string("\"") + key + "\" must be a string");
  return v->get<std::string>();
}

std::string opt_string(const json& obj, const std::string& where, const char* key,
                       std::string dflt) {
  const json* v = opt_field(obj, key);
  if (!v) return dflt;
  if (!v->is_string()) fail(where, std::string("\"") + key + "\" must be a string");
  return v->get<std::string>();
}

double opt_double(const json& obj, const std::string& where, const char* key,
                  double dflt) {
  const json* v = opt_field(obj, key);
  if (!v) return dflt;
  if (!v->is_number()) fail(where, std::string("\"") + key + "\" must be a number");
  return v->get<double>();
}

std::uint64_t opt_uint(const json& obj, const std::string& where, const char* key,
                       std::uint64_t dflt) {
  const json* v = opt_field(obj, key);
  if (!v) return dflt;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer()) {
    auto sv = v->get<std::int64_t>();
    if (sv < 0) fail(where, std::string("\"") + key + "\" must be non-negative");
    return static_cast<std::uint64_t>(sv);
  }
  fail(where, std::string("\"") + key + "\" must be an integer");
}

std::uint32_t req_uint32(const json& obj, const std::string& where, const char* key) {
  const json* v = opt_field(obj, key);
  if (!v) fail(where, std::string("missing \"") + key + "\"");
  std::uint64_t u = opt_uint(obj, where, key, 0);
  if (u > 0xffffffffULL) fail(where, std::string("\"") + key + "\" out of range");
  return static_cast<std::uint32_t>(u);
}

std::vector<std::string> opt_string_list(const json& obj, const std::string& where,
                                         const char* key) {
  const json* v = opt_field(obj, key);
  if (!v) return {};
  if (!v->is_array()) fail(where, std::string("\"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) fail(where, std::string("\"") + key + "\" must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

const json* section(const json& root, const char* key) {
  const json* v = opt_field(root, key);
  if (!v) return nullptr;
  if (!v->is_array()) fail(key, "must be an array");
  return v;
}

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("top level must be an object");
  check_keys(root, "scenario",
             {"seed", "description", "nodes", "links", "policies", "local_sids",
              "flows", "sessions"});

  ScenarioConfig cfg;
  cfg.seed = opt_uint(root, "scenario", "seed", 1);
  cfg.description = opt_string(root, "scenario", "description", "");

  if (const json* nodes = section(root, "nodes")) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      std::string where = "nodes[" + std::to_string(i) + "]";
      const json& n = (*nodes)[i];
      check_keys(n, where, {"id", "addresses", "punt_sid", "host_prefixes"});
      NodeSpec spec;
      spec.id = req_string(n, where, "id");
      spec.addresses = opt_string_list(n, where, "addresses");
      spec.punt_sid = opt_string(n, where, "punt_sid", "");
      spec.host_prefixes = opt_string_list(n, where, "host_prefixes");
      cfg.nodes.push_back(std::move(spec));
    }
  }
  if (const json* links = section(root, "links")) {
    for (std::size_t i = 0; i < links->size(); ++i) {
      std::string where = "links[" + std::to_string(i) + "]";
      const json& l = (*links)[i];
      check_keys(l, where, {"a", "b", "delay", "loss_rate"});
      LinkSpec spec;
      spec.a = req_string(l, where, "a");
      spec.b = req_string(l, where, "b");
      spec.delay = opt_double(l, where, "delay", 0.001);
      spec.loss_rate = opt_double(l, where, "loss_rate", 0.0);
      cfg.links.push_back(std::move(spec));
    }
  }
  if (const json* pols = section(root, "policies")) {
    for (std::size_t i = 0; i < pols->size(); ++i) {
      std::string where = "policies[" + std::to_string(i) + "]";
      const json& p = (*pols)[i];
      check_keys(p, where, {"node", "destination", "sid_list", "encapmode", "table"});
      PolicySpec spec;
      spec.node = req_string(p, where, "node");
      spec.destination = req_string(p, where, "destination");
      spec.sid_list = req_string(p, where, "sid_list");
      spec.encapmode = opt_string(p, where, "encapmode", "encap");
      spec.table = static_cast<std::int32_t>(opt_uint(p, where, "table", 254));
      cfg.policies.push_back(std::move(spec));
    }
  }
  if (const json* sids = section(root, "local_sids")) {
    for (std::size_t i = 0; i < sids->size(); ++i) {
      std::string where = "local_sids[" + std::to_string(i) + "]";
      const json& s = (*sids)[i];
      check_keys(s, where, {"node", "sid", "behavior"});
      LocalSidSpec spec;
      spec.node = req_string(s, where, "node");
      spec.sid = req_string(s, where, "sid");
      spec.behavior = req_string(s, where, "behavior");
      cfg.local_sids.push_back(std::move(spec));
    }
  }
  if (const json* flows = section(root, "flows")) {
    for (std::size_t i = 0; i < flows->size(); ++i) {
      std::string where = "flows[" + std::to_string(i) + "]";
      const json& f = (*flows)[i];
      check_keys(f, where, {"src", "dst", "rate", "duration", "payload_size", "start"});
      FlowSpec spec;
      spec.src = req_string(f, where, "src");
      spec.dst = req_string(f, where, "dst");
      spec.rate = opt_double(f, where, "rate", 100.0);
      spec.duration = opt_double(f, where, "duration", 60.0);
      spec.payload_size =
          static_cast<std::uint32_t>(opt_uint(f, where, "payload_size", 64));
      spec.start = opt_double(f, where, "start", 0.0);
      cfg.flows.push_back(std::move(spec));
    }
  }
  if (const json* sessions = section(root, "sessions")) {
    for (std::size_t i = 0; i < sessions->size(); ++i) {
      std::string where = "sessions[" + std::to_string(i) + "]";
      const json& s = (*sessions)[i];
      check_keys(s, where,
                 {"measure_id", "sender", "reflector", "sdlist", "sdlistreverse",
                  "ss_udp_port", "refl_udp_port", "interval_duration",
                  "delay_margin", "number_of_colors", "response_mode"});
      SessionSpec spec;
      spec.measure_id = req_uint32(s, where, "measure_id");
      spec.sender = req_string(s, where, "sender");
      spec.reflector = req_string(s, where, "reflector");
      spec.sdlist = req_string(s, where, "sdlist");
      spec.sdlistreverse = req_string(s, where, "sdlistreverse");
      spec.ss_udp_port = static_cast<std::uint32_t>(opt_uint(s, where, "ss_udp_port", 1205));
      spec.refl_udp_port =
          static_cast<std::uint32_t>(opt_uint(s, where, "refl_udp_port", 1206));
      spec.interval_duration = opt_double(s, where, "interval_duration", 10.0);
      spec.delay_margin = opt_double(s, where, "delay_margin", 0.0);
      spec.number_of_colors =
          static_cast<std::uint32_t>(opt_uint(s, where, "number_of_colors", 2));
      spec.response_mode = opt_string(s, where, "response_mode", "inband");
      cfg.sessions.push_back(std::move(spec));
    }
  }
  return cfg;
}

void validate_scenario(const ScenarioConfig& cfg) {
  std::unordered_set<std::string> node_ids;
  std::unordered_set<std::string> owned;  // router addresses + SIDs, canonical
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const NodeSpec& n = cfg.nodes[i];
    std::string where = "node " + std::to_string(i) + " (\"" + n.id + "\")";
    if (n.id.empty()) invalid(where, "empty id");
    if (!node_ids.insert(n.id).second) invalid(where, "duplicate node id");
    if (n.addresses.empty()) invalid(where, "needs at least one address");
    for (const auto& a : n.addresses) {
      auto addr = Ipv6Addr::parse(a);
      if (!addr) invalid(where, "bad address \"" + a + "\"");
      if (!owned.insert(addr->to_string()).second)
        invalid(where, "address \"" + a + "\" already owned");
    }
    if (!n.punt_sid.empty()) {
      auto punt = Ipv6Addr::parse(n.punt_sid);
      if (!punt) invalid(where, "bad punt_sid \"" + n.punt_sid + "\"");
      if (!owned.insert(punt->to_string()).second)
        invalid(where, "punt_sid \"" + n.punt_sid + "\" already owned");
    }
    for (const auto& p : n.host_prefixes) {
      auto pref = Ipv6Prefix::parse(p);
      if (!pref) invalid(where, "bad host prefix \"" + p + "\"");
      if (!owned.insert("host:" + pref->to_string()).second)
        invalid(where, "host prefix \"" + p + "\" already owned");
    }
  }

  std::set<std::pair<std::string, std::string>> link_pairs;
  for (std::size_t i = 0; i < cfg.links.size(); ++i) {
    const LinkSpec& l = cfg.links[i];
    std::string where = "link " + std::to_string(i);
    if (!node_ids.count(l.a)) invalid(where, "unknown node \"" + l.a + "\"");
    if (!node_ids.count(l.b)) invalid(where, "unknown node \"" + l.b + "\"");
    if (l.a == l.b) invalid(where, "self link");
    if (!(l.delay >= 0)) invalid(where, "negative delay");
    if (!(l.loss_rate >= 0.0 && l.loss_rate <= 1.0))
      invalid(where, "loss_rate outside [0,1]");
    auto pair = std::minmax(l.a, l.b);
    if (!link_pairs.insert({pair.first, pair.second}).second)
      invalid(where, "duplicate link " + l.a + "-" + l.b);
  }

  for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
    const PolicySpec& p = cfg.policies[i];
    std::string where = "policy " + std::to_string(i);
    if (!node_ids.count(p.node)) invalid(where, "unknown node \"" + p.node + "\"");
    if (!Ipv6Prefix::parse(p.destination))
      invalid(where, "bad destination \"" + p.destination + "\"");
    if (!SidList::parse(p.sid_list))
      invalid(where, "bad sid_list \"" + p.sid_list + "\"");
    if (p.encapmode != "encap") invalid(where, "unsupported encapmode");
  }

  for (std::size_t i = 0; i < cfg.local_sids.size(); ++i) {
    const LocalSidSpec& s = cfg.local_sids[i];
    std::string where = "local_sid " + std::to_string(i);
    if (!node_ids.count(s.node)) invalid(where, "unknown node \"" + s.node + "\"");
    if (!Ipv6Addr::parse(s.sid)) invalid(where, "bad sid \"" + s.sid + "\"");
    if (!parse_sid_behavior(s.behavior))
      invalid(where, "unknown behavior \"" + s.behavior + "\"");
  }

  auto host_owner = [&](const Ipv6Addr& a) -> const NodeSpec* {
    for (const auto& n : cfg.nodes)
      for (const auto& p : n.host_prefixes)
        if (auto pref = Ipv6Prefix::parse(p); pref && pref->contains(a)) return &n;
    return nullptr;
  };

  for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
    const FlowSpec& f = cfg.flows[i];
    std::string where = "flow " + std::to_string(i);
    auto src = Ipv6Addr::parse(f.src);
    auto dst = Ipv6Addr::parse(f.dst);
    if (!src) invalid(where, "bad src \"" + f.src + "\"");
    if (!dst) invalid(where, "bad dst \"" + f.dst + "\"");
    if (!host_owner(*src)) invalid(where, "src \"" + f.src + "\" matches no host prefix");
    if (!host_owner(*dst)) invalid(where, "dst \"" + f.dst + "\" matches no host prefix");
    if (!(f.rate > 0)) invalid(where, "rate must be positive");
    if (!(f.duration >= 0)) invalid(where, "negative duration");
    if (!(f.start >= 0)) invalid(where, "negative start");
    if (f.payload_size > 1400) invalid(where, "payload_size above 1400");
  }

  auto node_by_id = [&](const std::string& id) -> const NodeSpec* {
    for (const auto& n : cfg.nodes)
      if (n.id == id) return &n;
    return nullptr;
  };

  std::unordered_set<std::uint32_t> measure_ids;
  std::set<std::pair<std::string, std::string>> sender_keys;
  std::set<std::pair<std::string, std::string>> reflector_keys;
  // Probe SID lists end in the punt SID, so sessions sharing an endpoint node
  // in the same role are told apart by their UDP port pair alone.
  std::set<std::tuple<std::string, std::uint32_t, std::uint32_t>> sender_ports;
  std::set<std::tuple<std::string, std::uint32_t, std::uint32_t>> reflector_ports;
  for (std::size_t i = 0; i < cfg.sessions.size(); ++i) {
    const SessionSpec& s = cfg.sessions[i];
    std::string where = "session " + std::to_string(i);
    const NodeSpec* sender = node_by_id(s.sender);
    const NodeSpec* reflector = node_by_id(s.reflector);
    if (!sender) invalid(where, "unknown sender \"" + s.sender + "\"");
    if (!reflector) invalid(where, "unknown reflector \"" + s.reflector + "\"");
    if (s.sender == s.reflector) invalid(where, "sender == reflector");
    if (sender->punt_sid.empty()) invalid(where, "sender has no punt_sid");
    if (reflector->punt_sid.empty()) invalid(where, "reflector has no punt_sid");
    auto sdl = SidList::parse(s.sdlist);
    auto sdlrev = SidList::parse(s.sdlistreverse);
    if (!sdl) invalid(where, "bad sdlist \"" + s.sdlist + "\"");
    if (!sdlrev) invalid(where, "bad sdlistreverse \"" + s.sdlistreverse + "\"");
    if (s.ss_udp_port == 0 || s.ss_udp_port > 0xffff || s.refl_udp_port == 0 ||
        s.refl_udp_port > 0xffff || s.ss_udp_port == s.refl_udp_port)
      invalid(where, "bad udp ports");
    if (!(s.interval_duration > 0)) invalid(where, "interval_duration must be positive");
    double margin = s.delay_margin > 0 ? s.delay_margin : s.interval_duration / 2;
    if (!(margin < s.interval_duration))
      invalid(where, "delay_margin must stay below interval_duration");
    if (s.number_of_colors != 2) invalid(where, "only two colors supported");
    if (s.response_mode != "inband" && s.response_mode != "outband")
      invalid(where, "response_mode must be \"inband\" or \"outband\"");
    if (!measure_ids.insert(s.measure_id).second)
      invalid(where, "duplicate measure_id");
    if (!sender_keys.insert({s.sender, sdl->to_string()}).second)
      invalid(where, "duplicate (sender, sdlist)");
    if (!reflector_keys.insert({s.reflector, sdl->to_string()}).second)
      invalid(where, "duplicate (reflector, sdlist)");
    if (!sender_ports.insert({s.sender, s.ss_udp_port, s.refl_udp_port}).second)
      invalid(where, "sessions sharing a sender node need distinct udp ports");
    if (!reflector_ports.insert({s.reflector, s.ss_udp_port, s.refl_udp_port})
             .second)
      invalid(where, "sessions sharing a reflector node need distinct udp ports");
  }
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  ordered_json root;
  root["seed"] = cfg.seed;
  root["description"] = cfg.description;
  root["nodes"] = ordered_json::array();
  for (const auto& n : cfg.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["addresses"] = n.addresses;
    j["punt_sid"] = n.punt_sid;
    j["host_prefixes"] = n.host_prefixes;
    root["nodes"].push_back(std::move(j));
  }
  root["links"] = ordered_json::array();
  for (const auto& l : cfg.links) {
    ordered_json j;
    j["a"] = l.a;
    j["b"] = l.b;
    j["delay"] = l.delay;
    j["loss_rate"] = l.loss_rate;
    root["links"].push_back(std::move(j));
  }
  root["policies"] = ordered_json::array();
  for (const auto& p : cfg.policies) {
    ordered_json j;
    j["node"] = p.node;
    j["destination"] = p.destination;
    j["sid_list"] = p.sid_list;
    j["encapmode"] = p.encapmode;
    j["table"] = p.table;
    root["policies"].push_back(std::move(j));
  }
  root["local_sids"] = ordered_json::array();
  for (const auto& s : cfg.local_sids) {
    ordered_json j;
    j["node"] = s.node;
    j["sid"] = s.sid;
    j["behavior"] = s.behavior;
    root["local_sids"].push_back(std::move(j));
  }
  root["flows"] = ordered_json::array();
  for (const auto& f : cfg.flows) {
    ordered_json j;
    j["src"] = f.src;
    j["dst"] = f.dst;
    j["rate"] = f.rate;
    j["duration"] = f.duration;
    j["payload_size"] = f.payload_size;
    j["start"] = f.start;
    root["flows"].push_back(std::move(j));
  }
  root["sessions"] = ordered_json::array();
  for (const auto& s : cfg.sessions) {
    ordered_json j;
    j["measure_id"] = s.measure_id;
    j["sender"] = s.sender;
    j["reflector"] = s.reflector;
    j["sdlist"] = s.sdlist;
    j["sdlistreverse"] = s.sdlistreverse;
    j["ss_udp_port"] = s.ss_udp_port;
    j["refl_udp_port"] = s.refl_udp_port;
    j["interval_duration"] = s.interval_duration;
    j["delay_margin"] = s.delay_margin;
    j["number_of_colors"] = s.number_of_colors;
    j["response_mode"] = s.response_mode;
    root["sessions"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

// --- presets -----------------------------------------------------------------

namespace {

std::string sid(int node, const std::string& func) {
  return "fcff:" + std::to_string(node) + "::" + func;
}
std::string host_net(int node) { return "fd00:" + std::to_string(node) + "::/64"; }
std::string host_addr(int node) { return "fd00:" + std::to_string(node) + "::2"; }
std::string rid(int node) { return "r" + std::to_string(node); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ",";
    out += p;
  }
  return out;
}

// Eight routers in a ring with three chords; hosts hang off the four corner
// routers; every pairing of corners is monitored both ways through fixed
// waypoints. Loss is injected on every link touching r2 or r6, which every
// monitored path crosses.
ScenarioConfig waypoint_mesh() {
  ScenarioConfig cfg;
  cfg.seed = 1;
  cfg.description =
      "Eight-router topology, twelve symmetric monitored flows through lossy "
      "waypoints r2/r6 (0.1% per link), T=10s, margin=5s, 60s of traffic";

  for (int k = 1; k <= 8; ++k) {
    NodeSpec n;
    n.id = rid(k);
    n.addresses = {"fcff:" + std::to_string(k) + "::1"};
    n.punt_sid = sid(k, "f");
    cfg.nodes.push_back(std::move(n));
  }
  const int corners[] = {1, 3, 5, 8};
  for (int k : corners) {
    for (auto& n : cfg.nodes)
      if (n.id == rid(k)) n.host_prefixes = {host_net(k)};
  }

  const std::pair<int, int> edges[] = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                                       {6, 7}, {7, 8}, {2, 7}, {4, 6}, {6, 8}};
  for (auto [a, b] : edges) {
    LinkSpec l;
    l.a = rid(a);
    l.b = rid(b);
    l.delay = 0.001;
    bool lossy = a == 2 || b == 2 || a == 6 || b == 6;
    l.loss_rate = lossy ? 0.001 : 0.0;
    cfg.links.push_back(std::move(l));
  }

  for (int k = 1; k <= 8; ++k)
    cfg.local_sids.push_back({rid(k), sid(k, "e"), "End"});

  struct CornerPair {
    int a, b;
    std::vector<int> waypoints;
  };
  const CornerPair pairs[] = {
      {1, 3, {2}}, {1, 5, {3, 4}}, {1, 8, {2, 7}},
      {3, 5, {4, 6}}, {3, 8, {6}}, {5, 8, {6}},
  };

  std::uint32_t measure_id = 1;
  for (const auto& p : pairs) {
    // Decap segments are distinct per remote peer, so paths sharing waypoints
    // (r3->r8 and r5->r8 both steer through r6) still form distinct flows.
    std::string decap_fwd = sid(p.b, "d" + std::to_string(p.a));
    std::string decap_rev = sid(p.a, "d" + std::to_string(p.b));
    cfg.local_sids.push_back({rid(p.b), decap_fwd, "End.DT6"});
    cfg.local_sids.push_back({rid(p.a), decap_rev, "End.DT6"});

    std::vector<std::string> fwd, rev;
    for (int w : p.waypoints) fwd.push_back(sid(w, "e"));
    for (auto it = p.waypoints.rbegin(); it != p.waypoints.rend(); ++it)
      rev.push_back(sid(*it, "e"));
    fwd.push_back(decap_fwd);
    rev.push_back(decap_rev);

    cfg.policies.push_back({rid(p.a), host_net(p.b), join(fwd), "encap", 254});
    cfg.policies.push_back({rid(p.b), host_net(p.a), join(rev), "encap", 254});

    SessionSpec s;
    s.measure_id = measure_id++;
    s.sender = rid(p.a);
    s.reflector = rid(p.b);
    s.sdlist = join(fwd);
    s.sdlistreverse = join(rev);
    // Per-session ports: probes of sessions sharing a sender or reflector
    // node are indistinguishable by SID list once the punt SID replaces the
    // decap SID, so the port pair carries the session identity.
    s.ss_udp_port = 1205 + 10 * (s.measure_id - 1);
    s.refl_udp_port = 1206 + 10 * (s.measure_id - 1);
    s.interval_duration = 10.0;
    s.delay_margin = 5.0;
    cfg.sessions.push_back(std::move(s));

    cfg.flows.push_back({host_addr(p.a), host_addr(p.b), 100.0, 60.0, 64, 0.0});
    cfg.flows.push_back({host_addr(p.b), host_addr(p.a), 100.0, 60.0, 64, 0.0});
  }
  return cfg;
}

ScenarioConfig two_node_base() {
  ScenarioConfig cfg;
  cfg.seed = 7;
  for (int k = 1; k <= 2; ++k) {
    NodeSpec n;
    n.id = rid(k);
    n.addresses = {"fcff:" + std::to_string(k) + "::1"};
    n.punt_sid = sid(k, "f");
    n.host_prefixes = {host_net(k)};
    cfg.nodes.push_back(std::move(n));
  }
  cfg.links.push_back({"r1", "r2", 0.001, 0.01});
  cfg.local_sids.push_back({"r1", sid(1, "d"), "End.DT6"});
  cfg.local_sids.push_back({"r2", sid(2, "d"), "End.DT6"});
  cfg.policies.push_back({"r1", host_net(2), sid(2, "d"), "encap", 254});
  cfg.policies.push_back({"r2", host_net(1), sid(1, "d"), "encap", 254});
  cfg.flows.push_back({host_addr(1), host_addr(2), 200.0, 10.0, 64, 0.0});
  cfg.flows.push_back({host_addr(2), host_addr(1), 200.0, 10.0, 64, 0.0});

  SessionSpec s;
  s.measure_id = 1;
  s.sender = "r1";
  s.reflector = "r2";
  s.sdlist = sid(2, "d");
  s.sdlistreverse = sid(1, "d");
  s.interval_duration = 2.0;
  s.delay_margin = 1.0;
  cfg.sessions.push_back(std::move(s));
  return cfg;
}

ScenarioConfig two_node() {
  ScenarioConfig cfg = two_node_base();
  cfg.description =
      "Two routers over one lossy link (1%), bidirectional monitored flow, "
      "T=2s, margin=1s, 10s of traffic";
  return cfg;
}

// The link delay (1.8s) exceeds the delay margin (1s), so counter reads race
// re-activated colors: measured loss deviates from ground truth and reports
// carry the active-read flag. Demonstrates why the margin precondition exists.
ScenarioConfig delay_violation() {
  ScenarioConfig cfg = two_node_base();
  cfg.description =
      "Two routers with 1.8s link delay against a 1s delay margin: reads race "
      "the next same-color block, reports deviate and are flagged";
  cfg.links[0].delay = 1.8;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"waypoint-mesh", "two-node", "delay-violation"};
}

std::optional<ScenarioConfig> preset_scenario(const std::string& name) {
  if (name == "waypoint-mesh") return waypoint_mesh();
  if (name == "two-node") return two_node();
  if (name == "delay-violation") return delay_violation();
  return std::nullopt;
}

double default_run_until(const ScenarioConfig& cfg) {
  double traffic_end = 0;
  for (const auto& f : cfg.flows)
    traffic_end = std::max(traffic_end, f.start + f.duration);
  double horizon = traffic_end;
  for (const auto& s : cfg.sessions) {
    double T = s.interval_duration;
    double margin = s.delay_margin > 0 ? s.delay_margin : T / 2;
    // First color switch at or after the end of traffic settles the last
    // traffic-bearing block; its probes go out one margin later.
    double boundary = std::ceil(traffic_end / T - 1e-9) * T;
    horizon = std::max(horizon, boundary + margin);
  }
  double max_delay = 0;
  for (const auto& l : cfg.links) max_delay = std::max(max_delay, l.delay);
  return horizon + 2.0 + 10 * max_delay;
}

}  // namespace srv6pm
