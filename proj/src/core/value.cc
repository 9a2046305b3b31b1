#include "olagg/core/value.h"

#include <charconv>
#include <chrono>
#include <cmath>

#include "olagg/core/error.h"

namespace olagg {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kTypeMismatch: return "type_mismatch";
    case ErrorCode::kDivisionByZero: return "division_by_zero";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kMalformedBytes: return "malformed_bytes";
    case ErrorCode::kVersionMismatch: return "version_mismatch";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kAlreadyTerminal: return "already_terminal";
    case ErrorCode::kAlreadyExists: return "already_exists";
    case ErrorCode::kCapacityExceeded: return "capacity_exceeded";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kRuntime: return "runtime_error";
  }
  return "unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kTypeMismatch:
    case ErrorCode::kParse:
    case ErrorCode::kCapacityExceeded:
      return true;
    default:
      return false;
  }
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::kInt: return "int";
    case Kind::kReal: return "real";
    case Kind::kDate: return "date";
    case Kind::kString: return "string";
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  if (name == "int") return Kind::kInt;
  if (name == "real") return Kind::kReal;
  if (name == "date") return Kind::kDate;
  if (name == "string") return Kind::kString;
  raise(ErrorCode::kParse, "unknown column kind '" + std::string(name) + "'");
}

namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    raise(ErrorCode::kParse, std::string("cannot parse ") + what + " from '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace

int32_t parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    raise(ErrorCode::kParse, "dates are YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  int y = parse_number<int>(text.substr(0, 4), "year");
  unsigned m = parse_number<unsigned>(text.substr(5, 2), "month");
  unsigned d = parse_number<unsigned>(text.substr(8, 2), "day");
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) raise(ErrorCode::kParse, "invalid date '" + std::string(text) + "'");
  return static_cast<int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::string format_date(int32_t days) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Value Value::string(std::string_view s) {
  if (s.size() > kMaxStringLength) {
    raise(ErrorCode::kInvalidArgument,
          "string value '" + std::string(s) + "' exceeds " + std::to_string(kMaxStringLength) + " bytes");
  }
  Value out(Kind::kString);
  std::memcpy(out.bytes_, s.data(), s.size());
  out.len_ = static_cast<uint8_t>(s.size());
  return out;
}

Value Value::parse(Kind kind, std::string_view text) {
  switch (kind) {
    case Kind::kInt: return integer(parse_number<int64_t>(text, "int"));
    case Kind::kReal: return real(parse_number<double>(text, "real"));
    case Kind::kDate: return date(parse_date(text));
    case Kind::kString: return string(text);
  }
  raise(ErrorCode::kParse, "bad kind");
}

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::kInt: return std::to_string(as_int());
    case Kind::kReal: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), as_real());
      return std::string(buf, ptr);
    }
    case Kind::kDate: return format_date(as_date());
    case Kind::kString: return std::string(as_string());
  }
  return {};
}

int Value::compare(const Value& other) const {
  if (numeric() && other.numeric()) {
    if (kind_ == Kind::kInt && other.kind_ == Kind::kInt) {
      int64_t a = as_int(), b = other.as_int();
      return a < b ? -1 : (a > b ? 1 : 0);
    }
    double a = to_double(), b = other.to_double();
    return a < b ? -1 : (a > b ? 1 : 0);
  }
  if (kind_ != other.kind_) {
    raise(ErrorCode::kTypeMismatch,
          std::string("cannot compare ") + kind_name(kind_) + " with " + kind_name(other.kind_));
  }
  if (kind_ == Kind::kDate) {
    int32_t a = as_date(), b = other.as_date();
    return a < b ? -1 : (a > b ? 1 : 0);
  }
  int c = as_string().compare(other.as_string());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool operator==(const Value& a, const Value& b) {
  return a.kind_ == b.kind_ && a.len_ == b.len_ && std::memcmp(a.bytes_, b.bytes_, sizeof(a.bytes_)) == 0;
}

std::size_t Value::hash() const {
  // FNV-1a over the payload, seeded with the kind.
  uint64_t h = 1469598103934665603ULL ^ static_cast<uint64_t>(kind_);
  std::size_t n = kind_ == Kind::kString ? len_ : 8;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(bytes_[i]);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace olagg
