#pragma once

#include <cstdint>

#include "olagg/core/table.h"

namespace olagg::randomizer {

// Single column `value:int`. n draws over 1..domain_size with P(rank r) ∝
// r^-skew; which element gets which rank is itself randomized by the seed.
// Throws kInvalidArgument for n < 1, domain_size < 1 or skew < 0.
Table gen_zipf(uint64_t n, uint64_t domain_size, double skew, uint64_t seed);

// `value:int`: n - k ones and k copies of `magnitude` at random positions.
// Throws kInvalidArgument when k > n.
Table gen_outlier(uint64_t n, uint64_t k_outliers, int64_t magnitude, uint64_t seed);

// `value:int`, uniform integers in [lo, hi].
Table gen_uniform(uint64_t n, int64_t lo, int64_t hi, uint64_t seed);

// TPC-H flavoured fact table:
//   l_orderkey:int      1.. (about 4 rows per order)
//   l_suppkey:int       1..kLineitemSuppliers
//   l_quantity:int      1..kMaxQuantity
//   l_price:real        quantity * unit price, unit price in [9, 1050)
//   l_discount:real     0.00..0.10 in steps of 0.01
//   l_tax:real          0.00..0.08 in steps of 0.01
//   l_shipdate:date     1992-01-02..1998-12-01
//   l_returnflag:string A | N | R
//   l_linestatus:string O | F
inline constexpr int64_t kMaxQuantity = 50;
inline constexpr int64_t kLineitemSuppliers = 1000;
Table gen_lineitem_like(uint64_t n, uint64_t seed);

// Dimension keyed by s_suppkey = 1..n:
//   s_suppkey:int, s_nationkey:int (0..24), s_acctbal:real, s_region:string
Table gen_supplier_like(uint64_t n, uint64_t seed);

}  // namespace olagg::randomizer
