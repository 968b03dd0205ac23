#pragma once

// Byte-level serialization: a bounds-checked reader/writer pair plus the
// loss-measurement query/response frames. All multi-byte integers on the wire
// are big-endian.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "srv6pm/addr.hpp"

namespace srv6pm {

struct LengthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reserved byte or flag bit that must be zero wasn't.
struct ReservedNonZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void bytes(std::span<const std::uint8_t> v);
  void addr(const Ipv6Addr& a) { bytes({a.bytes.data(), a.bytes.size()}); }
  // Length-prefixed (u16) UTF-8 string, used by the control-plane codec.
  void str(std::string_view s);

  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::vector<std::uint8_t> bytes(std::size_t n);
  Ipv6Addr addr();
  std::string str();

  std::size_t remaining() const { return data_.size() - pos_; }
  // Throws LengthError unless every byte was consumed.
  void expect_done() const;

 private:
  void need(std::size_t n) const;
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Loss-measurement probe frames (TWAMP-light style query/response carried
// over UDP). ctrl_code selects the response path: 0 = out-of-band, 1 = in-band
// over the reverse segment list.

inline constexpr std::uint8_t kCtrlOutOfBand = 0;
inline constexpr std::uint8_t kCtrlInBand = 1;

// flags bit 0: counter format (0 = packet count). flags bit 1: counting mode
// (0 = marking-based). All other bits are reserved and must be zero.
inline constexpr std::uint8_t kLmFlagsKnownMask = 0x03;

struct LmQuery {
  std::uint32_t sender_seq = 0;
  std::uint64_t sender_tx_counter = 0;
  std::uint8_t block_number = 0;  // epoch mod 256
  std::uint8_t flags = 0;
  std::uint8_t ctrl_code = kCtrlOutOfBand;
};

inline constexpr std::size_t kLmQuerySize = 16;

struct LmResponse {
  // Echo of the query.
  std::uint32_t sender_seq = 0;
  std::uint64_t sender_tx_counter = 0;
  std::uint8_t sender_block = 0;
  std::uint8_t flags = 0;
  std::uint8_t ctrl_code = kCtrlOutOfBand;
  // Reflector-side RX counter for the queried block's color.
  std::uint64_t reflector_rx_counter = 0;
  // Return-path fields, populated only for in-band responses.
  std::uint32_t reflector_seq = 0;
  std::uint64_t reflector_tx_counter = 0;
  std::uint8_t reflector_block = 0;
};

inline constexpr std::size_t kLmResponseSize = 37;

std::vector<std::uint8_t> encode_lm_query(const LmQuery& q);
// Throws LengthError on wrong size, ReservedNonZero on nonzero reserved byte
// or unknown flag bits.
LmQuery decode_lm_query(std::span<const std::uint8_t> frame);

std::vector<std::uint8_t> encode_lm_response(const LmResponse& r);
LmResponse decode_lm_response(std::span<const std::uint8_t> frame);

}  // namespace srv6pm
