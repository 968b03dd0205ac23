#pragma once

// In-memory packet model plus the header codecs and the small set of
// dataplane operations the routers perform on packets: color marking, segment
// advancement, encap/decap framing and probe construction.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "srv6pm/addr.hpp"
#include "srv6pm/wire.hpp"

namespace srv6pm {

// Alternate-marking color. Blocks alternate R, B, R, B, ... with the block's
// epoch parity picking the color: even epochs are R, odd are B.
enum class Color : std::uint8_t { R = 0, B = 1 };

inline Color other(Color c) { return c == Color::R ? Color::B : Color::R; }
inline Color color_of_epoch(std::uint64_t epoch) {
  return (epoch & 1) ? Color::B : Color::R;
}
inline const char* color_name(Color c) { return c == Color::R ? "R" : "B"; }

// Next-header protocol numbers used by the codec.
inline constexpr std::uint8_t kProtoRouting = 43;  // routing extension header
inline constexpr std::uint8_t kProtoUdp = 17;
inline constexpr std::uint8_t kProtoIpv6 = 41;  // IPv6-in-IPv6
inline constexpr std::uint8_t kProtoNone = 59;  // no next header: opaque payload

struct Ipv6Header {
  Ipv6Addr src;
  Ipv6Addr dst;
  std::uint8_t traffic_class = 0;
  std::uint8_t next_header = kProtoNone;
  std::uint8_t hop_limit = 64;
  std::uint16_t payload_len = 0;
};

inline constexpr std::size_t kIpv6HeaderSize = 40;

// Segment routing header. Segments are stored in reverse path order, as on
// the wire: stored[0] is the final segment, stored[n-1] the first. The
// currently-targeted segment is stored[segments_left].
struct SrhHeader {
  std::uint8_t next_header = kProtoNone;
  std::uint8_t segments_left = 0;
  std::vector<SegmentId> segments;  // reverse path order

  std::size_t encoded_size() const { return 8 + 16 * segments.size(); }
};

struct UdpHeader {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint16_t length = 0;  // header + payload bytes
  std::uint16_t checksum = 0;
};

inline constexpr std::size_t kUdpHeaderSize = 8;

struct MalformedPacket : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSegmentsLeft : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PortsEqual : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Packet {
  Ipv6Header outer;
  std::optional<SrhHeader> srh;
  std::optional<UdpHeader> udp;
  std::vector<std::uint8_t> payload;
  // Encapsulated datagram (outer.next_header or srh.next_header == kProtoIpv6).
  // Shared and immutable while in flight; decap copies it back out.
  std::shared_ptr<const Packet> inner;

  // Simulator-side bookkeeping. Never serialized, never visible to codecs.
  std::uint64_t uid = 0;
  std::int32_t oracle_flow = -1;    // drop-oracle flow id, -1 = untracked
  std::uint64_t oracle_epoch = 0;   // marking epoch stamped at ingress
};

// --- color marking ---------------------------------------------------------
// The outer traffic class carries two mark bits: bit 0 is the color, bit 1
// says the packet belongs to a monitored flow. All other bits pass untouched.

inline constexpr std::uint8_t kTcColorBit = 0x01;
inline constexpr std::uint8_t kTcMonitoredBit = 0x02;

void set_color(Packet& pkt, Color c, bool monitored);
// Returns {color, monitored}. Color is meaningful only when monitored.
std::pair<Color, bool> get_color(const Packet& pkt);

// --- segment list handling -------------------------------------------------

// Builds an SRH from a path-ordered segment list: storage is reversed,
// segments_left starts at size-1 (first segment already in outer dst).
SrhHeader make_srh(const SidList& path, std::uint8_t next_header);

// Recovers the path-ordered segment list from the stored (reversed) form.
SidList srh_path_sids(const SrhHeader& srh);

// Steps to the next segment: decrements segments_left and rewrites outer dst
// to the newly targeted segment. Throws NoSegmentsLeft at segments_left == 0.
void srh_advance(Packet& pkt);

// --- probe construction ----------------------------------------------------

struct ProbeSpec {
  SidList path;          // forwarding path for the probe, in path order
  SegmentId punt_sid;    // replaces the final segment so the far end punts
  Ipv6Addr outer_src;    // originating node address
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t hop_limit = 255;
};

// IPv6 + SRH + UDP around an encoded measurement frame. The probe's final
// segment is spec.punt_sid, which steers it to the far node's punt behavior
// instead of its decap behavior — probes must never count as flow traffic.
// Throws PortsEqual if src_port == dst_port.
Packet build_probe_packet(const LmQuery& q, const ProbeSpec& spec);
Packet build_probe_packet(const LmResponse& r, const ProbeSpec& spec);

// --- codecs ----------------------------------------------------------------
// encode_packet produces the full wire image (headers chained by next_header,
// inner datagram included); decode_packet is its exact inverse. Simulator
// bookkeeping fields are not part of the image.

void encode_ipv6_header(ByteWriter& w, const Ipv6Header& h);
Ipv6Header decode_ipv6_header(ByteReader& r);
void encode_srh(ByteWriter& w, const SrhHeader& srh);
SrhHeader decode_srh(ByteReader& r);
void encode_udp_header(ByteWriter& w, const UdpHeader& u);
UdpHeader decode_udp_header(ByteReader& r);

std::vector<std::uint8_t> encode_packet(const Packet& pkt);
Packet decode_packet(std::span<const std::uint8_t> image);

// Recomputes the outer payload_len (and any inner lengths are trusted as-is;
// callers set them when assembling). Exposed for encap construction.
std::uint16_t encoded_payload_size(const Packet& pkt);

}  // namespace srv6pm
