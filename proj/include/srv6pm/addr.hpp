#pragma once

// IPv6 addresses, prefixes and segment lists. Everything downstream (packets,
// counting keys, routing tables) is built out of these three types.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srv6pm {

// 128-bit address in network byte order. Also used as a segment identifier,
// since an SRv6 SID is just an IPv6 address with routing semantics attached.
struct Ipv6Addr {
  std::array<std::uint8_t, 16> bytes{};

  // Parses standard textual forms ("fcff:1::e", "::1", full form, ...).
  static std::optional<Ipv6Addr> parse(std::string_view text);

  // Canonical textual form (lowercase, longest zero run compressed).
  std::string to_string() const;

  auto operator<=>(const Ipv6Addr&) const = default;
};

using SegmentId = Ipv6Addr;

struct Ipv6Prefix {
  Ipv6Addr addr;
  std::uint8_t len = 0;  // prefix length in bits, 0..128

  // Parses "addr/len". A bare address is treated as a /128.
  static std::optional<Ipv6Prefix> parse(std::string_view text);

  bool contains(const Ipv6Addr& a) const;
  std::string to_string() const;

  auto operator<=>(const Ipv6Prefix&) const = default;
};

inline constexpr std::size_t kMaxSegments = 16;

struct InvalidSidList : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered segment sequence describing a path program. Order matters for both
// forwarding and counting: [A,B] and [B,A] are different flows.
class SidList {
 public:
  SidList() = default;

  // Throws InvalidSidList unless 1 <= segs.size() <= kMaxSegments.
  static SidList of(std::vector<SegmentId> segs);

  // Parses a comma-separated address list; nullopt on any bad element.
  static std::optional<SidList> parse(std::string_view text);

  std::size_t size() const { return segs_.size(); }
  bool empty() const { return segs_.empty(); }
  const SegmentId& operator[](std::size_t i) const { return segs_[i]; }
  const SegmentId& front() const { return segs_.front(); }
  const SegmentId& back() const { return segs_.back(); }
  const std::vector<SegmentId>& segments() const { return segs_; }
  auto begin() const { return segs_.begin(); }
  auto end() const { return segs_.end(); }

  SidList reversed() const;

  // Copy with the final segment replaced (used to retarget a path at a punt
  // segment while keeping it on the same wire).
  SidList with_last(const SegmentId& sid) const;

  std::string to_string() const;  // comma-joined canonical addresses

  bool operator==(const SidList&) const = default;
  auto operator<=>(const SidList&) const = default;

 private:
  std::vector<SegmentId> segs_;
};

// FNV-1a, used for hashing keys and for order-sensitive trace digests.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// splitmix64 step; mixes seeds for per-entity RNG streams.
std::uint64_t splitmix64(std::uint64_t& state);

struct SidListHash {
  std::size_t operator()(const SidList& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& seg : s) h = fnv1a64(seg.bytes.data(), seg.bytes.size(), h);
    return static_cast<std::size_t>(h);
  }
};

struct Ipv6AddrHash {
  std::size_t operator()(const Ipv6Addr& a) const {
    return static_cast<std::size_t>(fnv1a64(a.bytes.data(), a.bytes.size()));
  }
};

}  // namespace srv6pm
