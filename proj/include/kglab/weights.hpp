#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kglab/interval.hpp"

namespace kglab {

enum class WeightKind { Unit, PrimeIndicator, VonMangoldt, SieveUpper, SieveLower, Table };

// A bounded real function on the integers of a window.
class WeightFunction {
 public:
  static WeightFunction unit();
  static WeightFunction prime_indicator();
  static WeightFunction von_mangoldt();
  // 1 on integers free of prime factors <= z, else 0.
  static WeightFunction sieve_upper(double z);
  // sieve_upper(m) * (1 - #{p prime : z < p <= limit, p | m}).
  static WeightFunction sieve_lower(double z, double limit);
  // Values outside the table are 0. `bound` must dominate every |entry|.
  static WeightFunction table(std::map<std::int64_t, double> entries, double bound);
  static WeightFunction zero() { return table({}, 0.0); }

  WeightKind kind() const { return kind_; }
  double z() const { return z_; }
  std::string name() const;

  double operator()(std::int64_t m) const;
  // Dense values over lo..hi of the window.
  std::vector<double> values(const ShortInterval& interval) const;
  // B with |w(m)| <= B on the window.
  double bound(const ShortInterval& interval) const;

 private:
  WeightKind kind_ = WeightKind::Unit;
  double z_ = 0.0;
  double limit_ = 0.0;
  double table_bound_ = 0.0;
  std::map<std::int64_t, double> table_;
};

}  // namespace kglab
