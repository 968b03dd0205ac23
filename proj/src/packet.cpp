#include "srv6pm/packet.hpp"

namespace srv6pm {

void set_color(Packet& pkt, Color c, bool monitored) {
  std::uint8_t tc = pkt.outer.traffic_class &
                    static_cast<std::uint8_t>(~(kTcColorBit | kTcMonitoredBit));
  if (c == Color::B) tc |= kTcColorBit;
  if (monitored) tc |= kTcMonitoredBit;
  pkt.outer.traffic_class = tc;
}

std::pair<Color, bool> get_color(const Packet& pkt) {
  Color c = (pkt.outer.traffic_class & kTcColorBit) ? Color::B : Color::R;
  return {c, (pkt.outer.traffic_class & kTcMonitoredBit) != 0};
}

SrhHeader make_srh(const SidList& path, std::uint8_t next_header) {
  SrhHeader srh;
  srh.next_header = next_header;
  srh.segments.assign(path.segments().rbegin(), path.segments().rend());
  srh.segments_left = static_cast<std::uint8_t>(path.size() - 1);
  return srh;
}

SidList srh_path_sids(const SrhHeader& srh) {
  std::vector<SegmentId> path(srh.segments.rbegin(), srh.segments.rend());
  return SidList::of(std::move(path));
}

void srh_advance(Packet& pkt) {
  if (!pkt.srh) throw MalformedPacket("segment advance on packet without SRH");
  if (pkt.srh->segments_left == 0)
    throw NoSegmentsLeft("segments_left already zero");
  pkt.srh->segments_left--;
  pkt.outer.dst = pkt.srh->segments[pkt.srh->segments_left];
}

static Packet build_probe(std::vector<std::uint8_t> frame, const ProbeSpec& spec) {
  if (spec.src_port == spec.dst_port)
    throw PortsEqual("probe src and dst UDP ports must differ (both " +
                     std::to_string(spec.src_port) + ")");
  SidList path = spec.path.with_last(spec.punt_sid);
  Packet pkt;
  pkt.outer.src = spec.outer_src;
  pkt.outer.dst = path[0];
  pkt.outer.hop_limit = spec.hop_limit;
  pkt.outer.next_header = kProtoRouting;
  pkt.srh = make_srh(path, kProtoUdp);
  pkt.udp = UdpHeader{spec.src_port, spec.dst_port,
                      static_cast<std::uint16_t>(kUdpHeaderSize + frame.size()), 0};
  pkt.payload = std::move(frame);
  pkt.outer.payload_len = encoded_payload_size(pkt);
  return pkt;
}

Packet build_probe_packet(const LmQuery& q, const ProbeSpec& spec) {
  return build_probe(encode_lm_query(q), spec);
}

Packet build_probe_packet(const LmResponse& r, const ProbeSpec& spec) {
  return build_probe(encode_lm_response(r), spec);
}

// --- codecs ----------------------------------------------------------------

void encode_ipv6_header(ByteWriter& w, const Ipv6Header& h) {
  // version 6, traffic class, flow label pinned to zero
  w.u32(0x60000000u | (static_cast<std::uint32_t>(h.traffic_class) << 20));
  w.u16(h.payload_len);
  w.u8(h.next_header);
  w.u8(h.hop_limit);
  w.addr(h.src);
  w.addr(h.dst);
}

Ipv6Header decode_ipv6_header(ByteReader& r) {
  std::uint32_t vtf = r.u32();
  if ((vtf >> 28) != 6) throw MalformedPacket("IP version is not 6");
  if ((vtf & 0xfffff) != 0) throw MalformedPacket("nonzero flow label");
  Ipv6Header h;
  h.traffic_class = static_cast<std::uint8_t>(vtf >> 20);
  h.payload_len = r.u16();
  h.next_header = r.u8();
  h.hop_limit = r.u8();
  h.src = r.addr();
  h.dst = r.addr();
  return h;
}

void encode_srh(ByteWriter& w, const SrhHeader& srh) {
  std::size_t n = srh.segments.size();
  if (n == 0 || n > kMaxSegments)
    throw MalformedPacket("SRH must carry 1..16 segments, has " + std::to_string(n));
  if (srh.segments_left >= n)
    throw MalformedPacket("segments_left out of range");
  w.u8(srh.next_header);
  w.u8(static_cast<std::uint8_t>(2 * n));  // length in 8-octet units past the first 8
  w.u8(4);                                 // routing type: segment routing
  w.u8(srh.segments_left);
  w.u8(static_cast<std::uint8_t>(n - 1));  // last entry
  w.u8(0);                                 // flags
  w.u16(0);                                // tag
  for (const auto& s : srh.segments) w.addr(s);
}

SrhHeader decode_srh(ByteReader& r) {
  SrhHeader srh;
  srh.next_header = r.u8();
  std::uint8_t ext_len = r.u8();
  if (r.u8() != 4) throw MalformedPacket("routing type is not segment routing");
  srh.segments_left = r.u8();
  std::uint8_t last_entry = r.u8();
  if (r.u8() != 0) throw MalformedPacket("nonzero SRH flags");
  if (r.u16() != 0) throw MalformedPacket("nonzero SRH tag");
  std::size_t n = static_cast<std::size_t>(last_entry) + 1;
  if (n > kMaxSegments || ext_len != 2 * n)
    throw MalformedPacket("SRH length fields inconsistent");
  if (srh.segments_left > last_entry)
    throw MalformedPacket("segments_left exceeds last entry");
  srh.segments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) srh.segments.push_back(r.addr());
  return srh;
}

void encode_udp_header(ByteWriter& w, const UdpHeader& u) {
  w.u16(u.src_port);
  w.u16(u.dst_port);
  w.u16(u.length);
  w.u16(u.checksum);
}

UdpHeader decode_udp_header(ByteReader& r) {
  UdpHeader u;
  u.src_port = r.u16();
  u.dst_port = r.u16();
  u.length = r.u16();
  u.checksum = r.u16();
  return u;
}

static void check_shape(const Packet& pkt) {
  if (pkt.udp && pkt.inner)
    throw MalformedPacket("packet cannot carry both UDP and an inner datagram");
  if (pkt.inner && !pkt.payload.empty())
    throw MalformedPacket("packet cannot carry both payload and an inner datagram");
}

std::uint16_t encoded_payload_size(const Packet& pkt) {
  check_shape(pkt);
  std::size_t n = 0;
  if (pkt.srh) n += pkt.srh->encoded_size();
  if (pkt.udp) n += kUdpHeaderSize + pkt.payload.size();
  else if (pkt.inner) n += kIpv6HeaderSize + encoded_payload_size(*pkt.inner);
  else n += pkt.payload.size();
  if (n > 0xffff) throw MalformedPacket("payload exceeds 64KiB");
  return static_cast<std::uint16_t>(n);
}

std::vector<std::uint8_t> encode_packet(const Packet& pkt) {
  check_shape(pkt);
  ByteWriter w;
  Ipv6Header oh = pkt.outer;
  oh.payload_len = encoded_payload_size(pkt);
  oh.next_header = pkt.srh   ? kProtoRouting
                   : pkt.udp ? kProtoUdp
                   : pkt.inner
                       ? kProtoIpv6
                       : pkt.outer.next_header;
  encode_ipv6_header(w, oh);
  if (pkt.srh) {
    SrhHeader sh = *pkt.srh;
    sh.next_header = pkt.udp ? kProtoUdp : pkt.inner ? kProtoIpv6 : pkt.srh->next_header;
    encode_srh(w, sh);
  }
  if (pkt.udp) {
    UdpHeader uh = *pkt.udp;
    uh.length = static_cast<std::uint16_t>(kUdpHeaderSize + pkt.payload.size());
    encode_udp_header(w, uh);
    w.bytes(pkt.payload);
  } else if (pkt.inner) {
    w.bytes(encode_packet(*pkt.inner));
  } else {
    w.bytes(pkt.payload);
  }
  return w.take();
}

Packet decode_packet(std::span<const std::uint8_t> image) {
  ByteReader r(image);
  Packet pkt;
  pkt.outer = decode_ipv6_header(r);
  if (r.remaining() != pkt.outer.payload_len)
    throw LengthError("IPv6 payload length mismatch: header says " +
                      std::to_string(pkt.outer.payload_len) + ", image has " +
                      std::to_string(r.remaining()));
  std::uint8_t nh = pkt.outer.next_header;
  if (nh == kProtoRouting) {
    pkt.srh = decode_srh(r);
    nh = pkt.srh->next_header;
  }
  if (nh == kProtoUdp) {
    pkt.udp = decode_udp_header(r);
    if (pkt.udp->length < kUdpHeaderSize ||
        pkt.udp->length - kUdpHeaderSize != r.remaining())
      throw LengthError("UDP length mismatch");
    pkt.payload = r.bytes(pkt.udp->length - kUdpHeaderSize);
  } else if (nh == kProtoIpv6) {
    auto rest = r.bytes(r.remaining());
    pkt.inner = std::make_shared<const Packet>(decode_packet(rest));
  } else {
    pkt.payload = r.bytes(r.remaining());
  }
  r.expect_done();
  return pkt;
}

}  // namespace srv6pm
