#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

namespace olagg {

enum class Kind : uint8_t { kInt = 0, kReal = 1, kDate = 2, kString = 3 };

const char* kind_name(Kind kind);
Kind parse_kind(std::string_view name);

inline bool is_numeric(Kind kind) { return kind == Kind::kInt || kind == Kind::kReal; }

// Days since 1970-01-01 <-> "YYYY-MM-DD".
int32_t parse_date(std::string_view text);
std::string format_date(int32_t days);

// A tuple attribute: 64-bit integer, 64-bit real, date (days since epoch) or a
// short string of at most kMaxStringLength bytes stored inline. 16 bytes.
class Value {
 public:
  static constexpr std::size_t kMaxStringLength = 14;

  Value() : Value(Kind::kInt) { store(int64_t{0}); }

  static Value integer(int64_t v) {
    Value out(Kind::kInt);
    out.store(v);
    return out;
  }
  static Value real(double v) {
    Value out(Kind::kReal);
    out.store(v);
    return out;
  }
  static Value date(int32_t days) {
    Value out(Kind::kDate);
    out.store(int64_t{days});
    return out;
  }
  static Value string(std::string_view s);

  // Parses a CSV field according to `kind`.
  static Value parse(Kind kind, std::string_view text);

  Kind kind() const { return kind_; }
  bool numeric() const { return is_numeric(kind_); }

  int64_t as_int() const { return load<int64_t>(); }
  double as_real() const { return load<double>(); }
  int32_t as_date() const { return static_cast<int32_t>(load<int64_t>()); }
  std::string_view as_string() const { return {bytes_, len_}; }

  // Numeric kinds only; the caller guarantees the kind (checked at bind time).
  double to_double() const {
    return kind_ == Kind::kReal ? as_real() : static_cast<double>(as_int());
  }

  std::string to_string() const;

  // Three-way comparison. Numeric kinds compare with each other; dates and
  // strings only within their own kind. Throws kTypeMismatch otherwise.
  int compare(const Value& other) const;

  // Exact equality: same kind and same payload.
  friend bool operator==(const Value& a, const Value& b);

  std::size_t hash() const;

 private:
  explicit Value(Kind kind) : kind_(kind) { std::memset(bytes_, 0, sizeof(bytes_)); }

  template <typename T>
  void store(T v) {
    std::memcpy(bytes_, &v, sizeof(T));
  }
  template <typename T>
  T load() const {
    T v;
    std::memcpy(&v, bytes_, sizeof(T));
    return v;
  }

  alignas(8) char bytes_[kMaxStringLength];
  Kind kind_;
  uint8_t len_ = 0;
};

static_assert(sizeof(Value) == 16);

}  // namespace olagg

template <>
struct std::hash<olagg::Value> {
  std::size_t operator()(const olagg::Value& v) const { return v.hash(); }
};
