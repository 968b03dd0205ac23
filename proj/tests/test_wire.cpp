#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "srv6pm/packet.hpp"
#include "srv6pm/wire.hpp"

using namespace srv6pm;

namespace {

SidList sids_of(const std::vector<std::string>& texts) {
  std::vector<SegmentId> segs;
  for (const auto& t : texts) {
    auto a = Ipv6Addr::parse(t);
    REQUIRE(a.has_value());
    segs.push_back(*a);
  }
  return SidList::of(std::move(segs));
}

Ipv6Addr addr_of(const std::string& text) {
  auto a = Ipv6Addr::parse(text);
  REQUIRE(a.has_value());
  return *a;
}

LmQuery random_query(std::mt19937_64& rng) {
  LmQuery q;
  q.sender_seq = static_cast<std::uint32_t>(rng());
  q.sender_tx_counter = rng();
  q.block_number = static_cast<std::uint8_t>(rng());
  q.flags = static_cast<std::uint8_t>(rng() & kLmFlagsKnownMask);
  q.ctrl_code = (rng() & 1) ? kCtrlInBand : kCtrlOutOfBand;
  return q;
}

LmResponse random_response(std::mt19937_64& rng) {
  LmResponse r;
  r.sender_seq = static_cast<std::uint32_t>(rng());
  r.sender_tx_counter = rng();
  r.sender_block = static_cast<std::uint8_t>(rng());
  r.flags = static_cast<std::uint8_t>(rng() & kLmFlagsKnownMask);
  r.ctrl_code = (rng() & 1) ? kCtrlInBand : kCtrlOutOfBand;
  r.reflector_rx_counter = rng();
  r.reflector_seq = static_cast<std::uint32_t>(rng());
  r.reflector_tx_counter = rng();
  r.reflector_block = static_cast<std::uint8_t>(rng());
  return r;
}

bool operator_eq(const LmQuery& a, const LmQuery& b) {
  return a.sender_seq == b.sender_seq &&
         a.sender_tx_counter == b.sender_tx_counter &&
         a.block_number == b.block_number && a.flags == b.flags &&
         a.ctrl_code == b.ctrl_code;
}

bool operator_eq(const LmResponse& a, const LmResponse& b) {
  return a.sender_seq == b.sender_seq &&
         a.sender_tx_counter == b.sender_tx_counter &&
         a.sender_block == b.sender_block && a.flags == b.flags &&
         a.ctrl_code == b.ctrl_code &&
         a.reflector_rx_counter == b.reflector_rx_counter &&
         a.reflector_seq == b.reflector_seq &&
         a.reflector_tx_counter == b.reflector_tx_counter &&
         a.reflector_block == b.reflector_block;
}

}  // namespace

TEST_CASE("segment id text form roundtrips") {
  for (const char* text : {"::", "::1", "fcff:1::e", "fd00:0:12::2",
                           "2001:db8::8a2e:370:7334", "ff02::1:ff00:42"}) {
    auto a = Ipv6Addr::parse(text);
    REQUIRE(a.has_value());
    auto back = Ipv6Addr::parse(a->to_string());
    REQUIRE(back.has_value());
    CHECK(*back == *a);
  }
  CHECK_FALSE(Ipv6Addr::parse("not-an-address").has_value());
  CHECK_FALSE(Ipv6Addr::parse("1:2:3:4:5:6:7:8:9").has_value());
  CHECK_FALSE(Ipv6Addr::parse("").has_value());
}

TEST_CASE("sid list bounds and order-sensitive equality") {
  auto one = sids_of({"fcff:1::e"});
  CHECK(one.size() == 1);
  std::vector<std::string> sixteen;
  for (int i = 0; i < 16; ++i)
    sixteen.push_back("fcff:" + std::to_string(i + 1) + "::e");
  CHECK(sids_of(sixteen).size() == 16);
  sixteen.push_back("fcff:17::e");
  CHECK_THROWS_AS(sids_of(sixteen), InvalidSidList);
  CHECK_THROWS_AS(SidList::of({}), InvalidSidList);

  auto ab = sids_of({"fcff:1::e", "fcff:2::e"});
  auto ba = sids_of({"fcff:2::e", "fcff:1::e"});
  CHECK(ab != ba);
  CHECK(ab.reversed() == ba);
  CHECK(ab.to_string() == "fcff:1::e,fcff:2::e");
  auto parsed = SidList::parse("fcff:1::e,fcff:2::e");
  REQUIRE(parsed.has_value());
  CHECK(*parsed == ab);
  CHECK_FALSE(SidList::parse("").has_value());
  CHECK_FALSE(SidList::parse("fcff:1::e,,fcff:2::e").has_value());
}

TEST_CASE("lm query zero value is sixteen zero bytes") {
  LmQuery q;
  auto bytes = encode_lm_query(q);
  REQUIRE(bytes.size() == kLmQuerySize);
  for (auto b : bytes) CHECK(b == 0);
  CHECK(operator_eq(decode_lm_query(bytes), q));
}

TEST_CASE("lm query counter occupies bytes 4..12 big-endian") {
  LmQuery q;
  q.sender_tx_counter = std::uint64_t{1} << 40;
  auto bytes = encode_lm_query(q);
  REQUIRE(bytes.size() == kLmQuerySize);
  // 2^40 = byte value 0x01 at the third-most-significant counter byte.
  for (std::size_t i = 4; i < 12; ++i)
    CHECK(bytes[i] == (i == 6 ? 0x01 : 0x00));
}

TEST_CASE("lm query rejects wrong lengths and nonzero reserved bits") {
  for (std::size_t n = 0; n <= 64; ++n) {
    if (n == kLmQuerySize) continue;
    std::vector<std::uint8_t> bytes(n, 0);
    CHECK_THROWS_AS(decode_lm_query(bytes), LengthError);
  }
  std::vector<std::uint8_t> frame(kLmQuerySize, 0);
  frame[15] = 1;  // reserved byte
  CHECK_THROWS_AS(decode_lm_query(frame), ReservedNonZero);
  frame[15] = 0;
  frame[13] = 0x04;  // unknown flag bit
  CHECK_THROWS_AS(decode_lm_query(frame), ReservedNonZero);
  frame[13] = kLmFlagsKnownMask;  // both known bits are fine
  CHECK_NOTHROW(decode_lm_query(frame));
}

TEST_CASE("lm response zero value and wrong lengths") {
  LmResponse r;
  auto bytes = encode_lm_response(r);
  REQUIRE(bytes.size() == kLmResponseSize);
  for (auto b : bytes) CHECK(b == 0);
  CHECK(operator_eq(decode_lm_response(bytes), r));
  for (std::size_t n = 0; n <= 64; ++n) {
    if (n == kLmResponseSize) continue;
    std::vector<std::uint8_t> frame(n, 0);
    CHECK_THROWS_AS(decode_lm_response(frame), LengthError);
  }
}

TEST_CASE("lm frames fuzz roundtrip") {
  std::mt19937_64 rng(0x51da7157);
  for (int i = 0; i < 10000; ++i) {
    LmQuery q = random_query(rng);
    CHECK(operator_eq(decode_lm_query(encode_lm_query(q)), q));
    LmResponse r = random_response(rng);
    CHECK(operator_eq(decode_lm_response(encode_lm_response(r)), r));
  }
}

TEST_CASE("color marking touches only the two mark bits") {
  for (int tc = 0; tc < 256; ++tc) {
    for (Color c : {Color::R, Color::B}) {
      for (bool monitored : {false, true}) {
        Packet pkt;
        pkt.outer.traffic_class = static_cast<std::uint8_t>(tc);
        set_color(pkt, c, monitored);
        auto [rc, rm] = get_color(pkt);
        CHECK(rm == monitored);
        if (monitored) CHECK(rc == c);
        CHECK((pkt.outer.traffic_class & ~(kTcColorBit | kTcMonitoredBit)) ==
              (tc & ~(kTcColorBit | kTcMonitoredBit)));
      }
    }
  }
  Packet fresh;
  auto [c, monitored] = get_color(fresh);
  CHECK(c == Color::R);
  CHECK_FALSE(monitored);
}

TEST_CASE("color helpers") {
  CHECK(other(Color::R) == Color::B);
  CHECK(other(other(Color::B)) == Color::B);
  CHECK(color_of_epoch(0) == Color::R);
  CHECK(color_of_epoch(1) == Color::B);
  CHECK(color_of_epoch(254) == Color::R);
  CHECK(std::string(color_name(Color::B)) == "B");
}

TEST_CASE("srh stores segments reversed and advances in path order") {
  auto path = sids_of({"fcff:1::e", "fcff:2::e", "fcff:3::d"});
  SrhHeader srh = make_srh(path, kProtoIpv6);
  CHECK(srh.segments_left == 2);
  CHECK(srh.segments.size() == 3);
  CHECK(srh.segments[0] == addr_of("fcff:3::d"));  // final segment first
  CHECK(srh.segments[2] == addr_of("fcff:1::e"));
  CHECK(srh_path_sids(srh) == path);

  Packet pkt;
  pkt.outer.dst = addr_of("fcff:1::e");
  pkt.srh = srh;
  std::vector<Ipv6Addr> visited{pkt.outer.dst};
  while (pkt.srh->segments_left > 0) {
    srh_advance(pkt);
    visited.push_back(pkt.outer.dst);
  }
  // Reference walk: outer dst visits the path segments in list order.
  REQUIRE(visited.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(visited[i] == path[i]);
  CHECK_THROWS_AS(srh_advance(pkt), NoSegmentsLeft);
}

TEST_CASE("probe construction substitutes the punt sid") {
  ProbeSpec spec;
  spec.path = sids_of({"fcff:2::e", "fcff:3::d"});
  spec.punt_sid = addr_of("fcff:3::f");
  spec.outer_src = addr_of("fcff:1::1");
  spec.src_port = 1205;
  spec.dst_port = 1206;

  LmQuery q;
  q.sender_seq = 7;
  q.sender_tx_counter = 4242;
  q.block_number = 3;
  q.ctrl_code = kCtrlInBand;
  Packet pkt = build_probe_packet(q, spec);

  REQUIRE(pkt.srh.has_value());
  auto probe_path = srh_path_sids(*pkt.srh);
  CHECK(probe_path.size() == 2);
  CHECK(probe_path[0] == addr_of("fcff:2::e"));
  CHECK(probe_path[probe_path.size() - 1] == spec.punt_sid);  // decap replaced
  CHECK(pkt.outer.dst == probe_path[0]);
  REQUIRE(pkt.udp.has_value());
  CHECK(pkt.udp->src_port != pkt.udp->dst_port);
  CHECK(operator_eq(decode_lm_query(pkt.payload), q));

  ProbeSpec same_ports = spec;
  same_ports.dst_port = same_ports.src_port;
  CHECK_THROWS_AS(build_probe_packet(q, same_ports), PortsEqual);
  LmResponse r;
  CHECK_THROWS_AS(build_probe_packet(r, same_ports), PortsEqual);

  Packet rp = build_probe_packet(r, spec);
  CHECK(operator_eq(decode_lm_response(rp.payload), r));
}

TEST_CASE("single-segment probe path is just the punt sid") {
  ProbeSpec spec;
  spec.path = sids_of({"fcff:2::d"});
  spec.punt_sid = addr_of("fcff:2::f");
  spec.outer_src = addr_of("fcff:1::1");
  spec.src_port = 1205;
  spec.dst_port = 1206;
  Packet pkt = build_probe_packet(LmQuery{}, spec);
  REQUIRE(pkt.srh.has_value());
  CHECK(srh_path_sids(*pkt.srh).size() == 1);
  CHECK(pkt.outer.dst == spec.punt_sid);
}

TEST_CASE("packet codec roundtrips the full header chain") {
  // Encapsulated data packet: outer + SRH + inner datagram.
  auto inner = std::make_shared<Packet>();
  inner->outer.src = addr_of("fd00:1::2");
  inner->outer.dst = addr_of("fd00:3::2");
  inner->outer.hop_limit = 64;
  inner->outer.next_header = kProtoNone;
  inner->payload = {1, 2, 3, 4, 5};
  inner->outer.payload_len = 5;

  Packet pkt;
  pkt.outer.src = addr_of("fcff:1::1");
  pkt.outer.dst = addr_of("fcff:2::e");
  pkt.outer.hop_limit = 255;
  pkt.outer.next_header = kProtoRouting;
  pkt.srh = make_srh(sids_of({"fcff:2::e", "fcff:3::d"}), kProtoIpv6);
  pkt.inner = inner;
  set_color(pkt, Color::B, true);
  pkt.outer.payload_len = encoded_payload_size(pkt);

  auto image = encode_packet(pkt);
  CHECK(image.size() == kIpv6HeaderSize + pkt.outer.payload_len);
  Packet back = decode_packet(image);
  CHECK(back.outer.src == pkt.outer.src);
  CHECK(back.outer.dst == pkt.outer.dst);
  CHECK(back.outer.traffic_class == pkt.outer.traffic_class);
  REQUIRE(back.srh.has_value());
  CHECK(back.srh->segments_left == pkt.srh->segments_left);
  CHECK(srh_path_sids(*back.srh) == srh_path_sids(*pkt.srh));
  REQUIRE(back.inner != nullptr);
  CHECK(back.inner->outer.src == inner->outer.src);
  CHECK(back.inner->outer.dst == inner->outer.dst);
  CHECK(back.inner->payload == inner->payload);
  // Bit-exactness: re-encoding reproduces the image.
  CHECK(encode_packet(back) == image);
}

TEST_CASE("packet codec roundtrips a udp probe") {
  ProbeSpec spec;
  spec.path = sids_of({"fcff:2::e", "fcff:3::d"});
  spec.punt_sid = addr_of("fcff:3::f");
  spec.outer_src = addr_of("fcff:1::1");
  spec.src_port = 1205;
  spec.dst_port = 1206;
  LmQuery q;
  q.sender_seq = 99;
  q.sender_tx_counter = 123456789;
  q.block_number = 42;
  Packet pkt = build_probe_packet(q, spec);

  auto image = encode_packet(pkt);
  Packet back = decode_packet(image);
  REQUIRE(back.udp.has_value());
  CHECK(back.udp->src_port == 1205);
  CHECK(back.udp->dst_port == 1206);
  CHECK(operator_eq(decode_lm_query(back.payload), q));
  CHECK(encode_packet(back) == image);
}

TEST_CASE("byte reader enforces bounds and full consumption") {
  ByteWriter w;
  w.u8(0xab);
  w.u16(0x1234);
  w.u32(0xdeadbeef);
  w.u64(0x0102030405060708ULL);
  w.str("hello");
  auto buf = w.take();

  ByteReader r({buf.data(), buf.size()});
  CHECK(r.u8() == 0xab);
  CHECK(r.u16() == 0x1234);
  CHECK_THROWS_AS(r.expect_done(), LengthError);  // bytes remain
  CHECK(r.u32() == 0xdeadbeef);
  CHECK(r.u64() == 0x0102030405060708ULL);
  CHECK(r.str() == "hello");
  CHECK(r.remaining() == 0);
  CHECK_NOTHROW(r.expect_done());
  CHECK_THROWS_AS(r.u8(), LengthError);  // past the end
}
