#include "srv6pm/addr.hpp"

#include <arpa/inet.h>

#include <charconv>

namespace srv6pm {

std::optional<Ipv6Addr> Ipv6Addr::parse(std::string_view text) {
  if (text.empty() || text.size() >= 46) return std::nullopt;
  char buf[46];
  text.copy(buf, text.size());
  buf[text.size()] = '\0';
  Ipv6Addr out;
  if (inet_pton(AF_INET6, buf, out.bytes.data()) != 1) return std::nullopt;
  return out;
}

std::string Ipv6Addr::to_string() const {
  char buf[INET6_ADDRSTRLEN];
  inet_ntop(AF_INET6, bytes.data(), buf, sizeof(buf));
  return buf;
}

std::optional<Ipv6Prefix> Ipv6Prefix::parse(std::string_view text) {
  auto slash = text.find('/');
  std::uint8_t len = 128;
  std::string_view addr_part = text;
  if (slash != std::string_view::npos) {
    addr_part = text.substr(0, slash);
    auto len_part = text.substr(slash + 1);
    unsigned v = 0;
    auto [p, ec] = std::from_chars(len_part.data(), len_part.data() + len_part.size(), v);
    if (ec != std::errc{} || p != len_part.data() + len_part.size() || v > 128)
      return std::nullopt;
    len = static_cast<std::uint8_t>(v);
  }
  auto addr = Ipv6Addr::parse(addr_part);
  if (!addr) return std::nullopt;
  return Ipv6Prefix{*addr, len};
}

bool Ipv6Prefix::contains(const Ipv6Addr& a) const {
  unsigned full = len / 8, rem = len % 8;
  for (unsigned i = 0; i < full; ++i)
    if (a.bytes[i] != addr.bytes[i]) return false;
  if (rem != 0) {
    std::uint8_t mask = static_cast<std::uint8_t>(0xff << (8 - rem));
    if ((a.bytes[full] & mask) != (addr.bytes[full] & mask)) return false;
  }
  return true;
}

std::string Ipv6Prefix::to_string() const {
  return addr.to_string() + "/" + std::to_string(len);
}

SidList SidList::of(std::vector<SegmentId> segs) {
  if (segs.empty() || segs.size() > kMaxSegments)
    throw InvalidSidList("segment list must hold 1.." +
                         std::to_string(kMaxSegments) + " segments, got " +
                         std::to_string(segs.size()));
  SidList out;
  out.segs_ = std::move(segs);
  return out;
}

std::optional<SidList> SidList::parse(std::string_view text) {
  std::vector<SegmentId> segs;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view piece = text.substr(0, comma);
    auto sid = Ipv6Addr::parse(piece);
    if (!sid) return std::nullopt;
    segs.push_back(*sid);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) return std::nullopt;  // trailing comma
  }
  if (segs.empty() || segs.size() > kMaxSegments) return std::nullopt;
  SidList out;
  out.segs_ = std::move(segs);
  return out;
}

SidList SidList::reversed() const {
  SidList out;
  out.segs_.assign(segs_.rbegin(), segs_.rend());
  return out;
}

SidList SidList::with_last(const SegmentId& sid) const {
  SidList out = *this;
  if (out.segs_.empty()) throw InvalidSidList("with_last on empty segment list");
  out.segs_.back() = sid;
  return out;
}

std::string SidList::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    if (i) out += ',';
    out += segs_[i].to_string();
  }
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace srv6pm
