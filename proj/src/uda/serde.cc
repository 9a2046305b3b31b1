#include "olagg/uda/serde.h"

#include "olagg/core/error.h"

namespace olagg::uda {

void ByteWriter::value(const Value& v) {
  u8(static_cast<uint8_t>(v.kind()));
  switch (v.kind()) {
    case Kind::kInt: i64(v.as_int()); break;
    case Kind::kReal: f64(v.as_real()); break;
    case Kind::kDate: i64(v.as_date()); break;
    case Kind::kString: str(v.as_string()); break;
  }
}

void ByteReader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) {
    raise(ErrorCode::kMalformedBytes, "truncated state: need " + std::to_string(n) + " bytes at offset " +
                                          std::to_string(pos_) + ", have " + std::to_string(bytes_.size() - pos_));
  }
}

std::string ByteReader::str() {
  uint32_t n = u32();
  need(n);
  std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return out;
}

Value ByteReader::value() {
  uint8_t kind = u8();
  switch (static_cast<Kind>(kind)) {
    case Kind::kInt: return Value::integer(i64());
    case Kind::kReal: return Value::real(f64());
    case Kind::kDate: return Value::date(static_cast<int32_t>(i64()));
    case Kind::kString: {
      std::string s = str();
      if (s.size() > Value::kMaxStringLength) raise(ErrorCode::kMalformedBytes, "string value too long");
      return Value::string(s);
    }
  }
  raise(ErrorCode::kMalformedBytes, "unknown value kind " + std::to_string(kind));
}

void ByteReader::expect_end() const {
  if (!done()) raise(ErrorCode::kMalformedBytes, std::to_string(remaining()) + " trailing bytes after state");
}

}  // namespace olagg::uda
