#include "kglab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kglab/error.hpp"

namespace kglab {

WeightFunction WeightFunction::unit() { return {}; }

WeightFunction WeightFunction::prime_indicator() {
  WeightFunction w;
  w.kind_ = WeightKind::PrimeIndicator;
  return w;
}

WeightFunction WeightFunction::von_mangoldt() {
  WeightFunction w;
  w.kind_ = WeightKind::VonMangoldt;
  return w;
}

WeightFunction WeightFunction::sieve_upper(double z) {
  WeightFunction w;
  w.kind_ = WeightKind::SieveUpper;
  w.z_ = z;
  return w;
}

WeightFunction WeightFunction::sieve_lower(double z, double limit) {
  WeightFunction w;
  w.kind_ = WeightKind::SieveLower;
  w.z_ = z;
  w.limit_ = limit;
  return w;
}

WeightFunction WeightFunction::table(std::map<std::int64_t, double> entries, double bound) {
  for (const auto& [m, v] : entries)
    if (!(std::fabs(v) <= bound)) throw InvalidArgument("table weight exceeds its bound");
  WeightFunction w;
  w.kind_ = WeightKind::Table;
  w.table_ = std::move(entries);
  w.table_bound_ = bound;
  return w;
}

std::string WeightFunction::name() const {
  std::ostringstream os;
  switch (kind_) {
    case WeightKind::Unit:
      return "unit";
    case WeightKind::PrimeIndicator:
      return "prime-indicator";
    case WeightKind::VonMangoldt:
      return "von-mangoldt";
    case WeightKind::SieveUpper:
      os << "sieve-upper(" << z_ << ")";
      return os.str();
    case WeightKind::SieveLower:
      os << "sieve-lower(" << z_ << ")";
      return os.str();
    case WeightKind::Table:
      return "table";
  }
  return "unknown";
}

double WeightFunction::operator()(std::int64_t m) const {
  if (m < 1) return 0.0;
  auto um = static_cast<std::uint64_t>(m);
  switch (kind_) {
    case WeightKind::Unit:
      return 1.0;
    case WeightKind::PrimeIndicator:
      return is_prime(um) ? 1.0 : 0.0;
    case WeightKind::VonMangoldt:
      return kglab::von_mangoldt(um);
    case WeightKind::SieveUpper:
    case WeightKind::SieveLower: {
      auto factors = factorize(um);
      for (auto [p, e] : factors)
        if (static_cast<double>(p) <= z_) return 0.0;
      if (kind_ == WeightKind::SieveUpper) return 1.0;
      int hits = 0;
      for (auto [p, e] : factors)
        if (static_cast<double>(p) <= limit_) ++hits;
      return 1.0 - hits;
    }
    case WeightKind::Table: {
      auto it = table_.find(m);
      return it == table_.end() ? 0.0 : it->second;
    }
  }
  return 0.0;
}

std::vector<double> WeightFunction::values(const ShortInterval& interval) const {
  std::vector<double> out(static_cast<std::size_t>(interval.count()), 0.0);
  if (kind_ == WeightKind::PrimeIndicator) {
    for (std::uint64_t p : primes_in_interval(interval).primes)
      out[static_cast<std::size_t>(static_cast<std::int64_t>(p) - interval.lo)] = 1.0;
    return out;
  }
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m)
    out[static_cast<std::size_t>(m - interval.lo)] = (*this)(m);
  return out;
}

double WeightFunction::bound(const ShortInterval& interval) const {
  switch (kind_) {
    case WeightKind::Unit:
    case WeightKind::PrimeIndicator:
    case WeightKind::SieveUpper:
      return 1.0;
    case WeightKind::VonMangoldt:
      return std::log(static_cast<double>(std::max<std::int64_t>(interval.hi, 2)));
    case WeightKind::Table:
      return table_bound_;
    case WeightKind::SieveLower: {
      double b = 1.0;
      for (double v : values(interval)) b = std::max(b, std::fabs(v));
      return b;
    }
  }
  return 0.0;
}

}  // namespace kglab
