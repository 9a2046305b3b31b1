#include "olagg/randomizer/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "olagg/core/error.h"
#include "olagg/randomizer/rng.h"

namespace olagg::randomizer {

Table gen_zipf(uint64_t n, uint64_t domain_size, double skew, uint64_t seed) {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "zipf: n must be at least 1");
  if (domain_size < 1) raise(ErrorCode::kInvalidArgument, "zipf: domain size must be at least 1");
  if (!(skew >= 0) || !std::isfinite(skew)) raise(ErrorCode::kInvalidArgument, "zipf: skew must be >= 0");

  SeededRng rng(seed);
  // Random rank -> element assignment (Fisher-Yates).
  std::vector<int64_t> element(domain_size);
  std::iota(element.begin(), element.end(), int64_t{1});
  for (uint64_t i = domain_size - 1; i > 0; --i) std::swap(element[i], element[rng.next_below(i + 1)]);

  std::vector<double> cdf(domain_size);
  double acc = 0;
  for (uint64_t r = 0; r < domain_size; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -skew);
    cdf[r] = acc;
  }

  Table out(Schema({{"value", Kind::kInt}}));
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    double u = rng.next_unit() * acc;
    auto r = static_cast<uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (r >= domain_size) r = domain_size - 1;
    Value v = Value::integer(element[r]);
    out.append_unchecked(TupleView(&v, 1));
  }
  return out;
}

Table gen_outlier(uint64_t n, uint64_t k_outliers, int64_t magnitude, uint64_t seed) {
  if (k_outliers > n) raise(ErrorCode::kInvalidArgument, "outlier: k exceeds n");
  SeededRng rng(seed);
  std::vector<bool> outlier(n, false);
  // Partial Fisher-Yates over positions picks k distinct ones.
  std::vector<uint64_t> pos(n);
  std::iota(pos.begin(), pos.end(), uint64_t{0});
  for (uint64_t i = 0; i < k_outliers; ++i) {
    uint64_t j = i + rng.next_below(n - i);
    std::swap(pos[i], pos[j]);
    outlier[pos[i]] = true;
  }
  Table out(Schema({{"value", Kind::kInt}}));
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    Value v = Value::integer(outlier[i] ? magnitude : 1);
    out.append_unchecked(TupleView(&v, 1));
  }
  return out;
}

Table gen_uniform(uint64_t n, int64_t lo, int64_t hi, uint64_t seed) {
  if (hi < lo) raise(ErrorCode::kInvalidArgument, "uniform: empty range");
  SeededRng rng(seed);
  const auto span = static_cast<uint64_t>(hi - lo) + 1;
  Table out(Schema({{"value", Kind::kInt}}));
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    Value v = Value::integer(lo + static_cast<int64_t>(rng.next_below(span)));
    out.append_unchecked(TupleView(&v, 1));
  }
  return out;
}

Table gen_lineitem_like(uint64_t n, uint64_t seed) {
  static const int32_t kFirstShip = parse_date("1992-01-02");
  static const int32_t kLastShip = parse_date("1998-12-01");
  // Shipped before this date: status F, flag A or R. After: O and N.
  static const int32_t kCurrent = parse_date("1995-06-17");
  static const char* kFlags[] = {"A", "N", "R"};

  Table out(Schema({{"l_orderkey", Kind::kInt},
                    {"l_suppkey", Kind::kInt},
                    {"l_quantity", Kind::kInt},
                    {"l_price", Kind::kReal},
                    {"l_discount", Kind::kReal},
                    {"l_tax", Kind::kReal},
                    {"l_shipdate", Kind::kDate},
                    {"l_returnflag", Kind::kString},
                    {"l_linestatus", Kind::kString}}));
  out.reserve(n);
  SeededRng rng(seed);
  for (uint64_t i = 0; i < n; ++i) {
    const int64_t quantity = 1 + static_cast<int64_t>(rng.next_below(kMaxQuantity));
    const double unit = 9.0 + static_cast<double>(rng.next_below(104100)) / 100.0;
    const int32_t ship = kFirstShip + static_cast<int32_t>(rng.next_below(kLastShip - kFirstShip + 1));
    const char* flag = ship > kCurrent ? "N" : kFlags[2 * rng.next_below(2)];
    Value row[] = {
        Value::integer(static_cast<int64_t>(i / 4 + 1)),
        Value::integer(1 + static_cast<int64_t>(rng.next_below(kLineitemSuppliers))),
        Value::integer(quantity),
        Value::real(std::round(quantity * unit * 100) / 100),
        Value::real(static_cast<double>(rng.next_below(11)) / 100),
        Value::real(static_cast<double>(rng.next_below(9)) / 100),
        Value::date(ship),
        Value::string(flag),
        Value::string(ship > kCurrent ? "O" : "F"),
    };
    out.append_unchecked(row);
  }
  return out;
}

Table gen_supplier_like(uint64_t n, uint64_t seed) {
  static const char* kRegions[] = {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};
  Table out(Schema({{"s_suppkey", Kind::kInt},
                    {"s_nationkey", Kind::kInt},
                    {"s_acctbal", Kind::kReal},
                    {"s_region", Kind::kString}}));
  out.reserve(n);
  SeededRng rng(seed);
  for (uint64_t i = 0; i < n; ++i) {
    const auto nation = static_cast<int64_t>(rng.next_below(25));
    Value row[] = {
        Value::integer(static_cast<int64_t>(i + 1)),
        Value::integer(nation),
        Value::real(static_cast<double>(static_cast<int64_t>(rng.next_below(1099999)) - 99999) / 100),
        Value::string(kRegions[nation / 5]),
    };
    out.append_unchecked(row);
  }
  return out;
}

}  // namespace olagg::randomizer
