#include "srv6pm/wire.hpp"

namespace srv6pm {

void ByteWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::bytes(std::span<const std::uint8_t> v) {
  buf_.insert(buf_.end(), v.begin(), v.end());
}

void ByteWriter::str(std::string_view s) {
  if (s.size() > 0xffff) throw LengthError("string too long for u16 length prefix");
  u16(static_cast<std::uint16_t>(s.size()));
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n)
    throw LengthError("frame truncated: need " + std::to_string(n) + " bytes, have " +
                      std::to_string(remaining()));
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
  pos_ += 8;
  return v;
}

std::vector<std::uint8_t> ByteReader::bytes(std::size_t n) {
  need(n);
  std::vector<std::uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

Ipv6Addr ByteReader::addr() {
  need(16);
  Ipv6Addr a;
  std::copy(data_.begin() + pos_, data_.begin() + pos_ + 16, a.bytes.begin());
  pos_ += 16;
  return a;
}

std::string ByteReader::str() {
  std::size_t n = u16();
  need(n);
  std::string out(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

void ByteReader::expect_done() const {
  if (remaining() != 0)
    throw LengthError("frame has " + std::to_string(remaining()) + " trailing bytes");
}

// --------------------------------------------------------------------------

static void check_lm_flags(std::uint8_t flags) {
  if (flags & ~kLmFlagsKnownMask)
    throw ReservedNonZero("reserved flag bits set: 0x" + std::to_string(flags));
}

std::vector<std::uint8_t> encode_lm_query(const LmQuery& q) {
  ByteWriter w;
  w.u32(q.sender_seq);
  w.u64(q.sender_tx_counter);
  w.u8(q.block_number);
  w.u8(q.flags);
  w.u8(q.ctrl_code);
  w.u8(0);  // reserved
  return w.take();
}

LmQuery decode_lm_query(std::span<const std::uint8_t> frame) {
  if (frame.size() != kLmQuerySize)
    throw LengthError("query frame must be " + std::to_string(kLmQuerySize) +
                      " bytes, got " + std::to_string(frame.size()));
  ByteReader r(frame);
  LmQuery q;
  q.sender_seq = r.u32();
  q.sender_tx_counter = r.u64();
  q.block_number = r.u8();
  q.flags = r.u8();
  q.ctrl_code = r.u8();
  if (r.u8() != 0) throw ReservedNonZero("query reserved byte must be zero");
  check_lm_flags(q.flags);
  r.expect_done();
  return q;
}

std::vector<std::uint8_t> encode_lm_response(const LmResponse& resp) {
  ByteWriter w;
  w.u32(resp.sender_seq);
  w.u64(resp.sender_tx_counter);
  w.u8(resp.sender_block);
  w.u8(resp.flags);
  w.u8(resp.ctrl_code);
  w.u8(0);  // reserved
  w.u64(resp.reflector_rx_counter);
  w.u32(resp.reflector_seq);
  w.u64(resp.reflector_tx_counter);
  w.u8(resp.reflector_block);
  return w.take();
}

LmResponse decode_lm_response(std::span<const std::uint8_t> frame) {
  if (frame.size() != kLmResponseSize)
    throw LengthError("response frame must be " + std::to_string(kLmResponseSize) +
                      " bytes, got " + std::to_string(frame.size()));
  ByteReader r(frame);
  LmResponse resp;
  resp.sender_seq = r.u32();
  resp.sender_tx_counter = r.u64();
  resp.sender_block = r.u8();
  resp.flags = r.u8();
  resp.ctrl_code = r.u8();
  if (r.u8() != 0) throw ReservedNonZero("response reserved byte must be zero");
  resp.reflector_rx_counter = r.u64();
  resp.reflector_seq = r.u32();
  resp.reflector_tx_counter = r.u64();
  resp.reflector_block = r.u8();
  check_lm_flags(resp.flags);
  r.expect_done();
  return resp;
}

}  // namespace srv6pm
