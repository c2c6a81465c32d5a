#include "kglab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "kglab/version.hpp"

namespace kglab::report {

double round15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt15(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round15(v);
}

json envelope(const std::string& command, json config) {
  json j;
  j["schema"] = kSchemaVersion;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const ShortInterval& I) {
  return {{"x", num(I.x)}, {"y", num(I.y)}, {"theta", num(I.theta)}, {"k", I.k},
          {"lo", I.lo},    {"hi", I.hi},    {"count", I.count()}};
}

json to_json(const CountReport& r, bool timing) {
  json j = {{"n", r.n},
            {"k", r.k},
            {"s", r.s},
            {"theta", num(r.theta)},
            {"interval", to_json(r.interval)},
            {"R", r.R},
            {"method", to_string(r.method)},
            {"prime_count", r.prime_count}};
  if (timing) j["elapsed"] = num(r.elapsed);
  return j;
}

json to_json(const SingularSeriesEstimate& e) {
  json locals = json::array();
  for (const auto& f : e.p_local) locals.push_back({{"p", f.p}, {"sigma", num(f.sigma)}});
  json j = {{"n", e.n},
            {"k", e.k},
            {"s", e.s},
            {"Qmax", e.qmax},
            {"value", num(e.value)},
            {"multiplicative", num(e.multiplicative)},
            {"direct_sum", e.direct_sum ? num(*e.direct_sum) : json(nullptr)},
            {"method", e.method},
            {"obstructed", e.obstructed},
            {"weak", e.weak},
            {"p_local", std::move(locals)}};
  return j;
}

json to_json(const SingularIntegralEstimate& e) {
  json j = {{"value", num(e.value)}, {"method", to_string(e.method)}};
  if (e.method == IntegralMethod::FourierQuadrature) {
    j["cutoff"] = num(e.cutoff);
    j["panels"] = e.panels;
  } else {
    j["cells"] = e.cells;
    j["cell_width"] = num(e.cell_width);
  }
  return j;
}

json to_json(const PredictionReport& r) {
  json j = to_json(r.series);
  j["theta"] = num(r.theta);
  j["interval"] = to_json(r.interval);
  j["admissible"] = r.admissible;
  j["integral"] = to_json(r.integral);
  j["log_x"] = num(r.log_x);
  j["prediction"] = num(r.prediction);
  j["C"] = num(r.C);
  return j;
}

json to_json(const ArcDissection& d) {
  json arcs = json::array();
  for (const auto& a : d.arcs)
    arcs.push_back(
        {{"q", a.q}, {"a", a.a}, {"center", num(a.center)}, {"half_width", num(a.half_width)}});
  return {{"P", num(d.P)},
          {"Q", num(d.Q)},
          {"delta", num(d.delta)},
          {"disjoint", d.disjoint},
          {"arc_count", d.arcs.size()},
          {"arcs", std::move(arcs)}};
}

json to_json(const ScanReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"alpha", num(row.alpha)},
                    {"class", row.major ? "major" : "minor"},
                    {"q", row.q},
                    {"a", row.a},
                    {"abs_f", num(row.abs_f)},
                    {"ratio", num(row.ratio)}});
  return {{"minor_samples", r.minor_samples},
          {"minor_empty", r.minor_empty},
          {"sup_minor", num(r.sup_minor)},
          {"argmax_alpha", num(r.argmax_alpha)},
          {"sup_ratio", num(r.sup_ratio)},
          {"rho", num(r.rho)},
          {"scale", num(r.scale)},
          {"trivial_bound", num(r.trivial_bound)},
          {"f_at_zero", num(r.f_at_zero)},
          {"rows", std::move(rows)}};
}

json to_json(const MomentResult& m) {
  return {{"value", to_string(m.value)},
          {"raw", num(m.raw)},
          {"residual", num(m.residual)},
          {"samples", to_string(m.samples)}};
}

json to_json(const PointwiseSieveReport& r) {
  json j = {{"samples", r.samples},
            {"seed", r.seed},
            {"violations", r.violations},
            {"box", r.box},
            {"box_is_assumption", true}};
  if (r.witness) {
    const auto& w = *r.witness;
    auto arr = [](const std::array<double, 5>& a) {
      json out = json::array();
      for (double v : a) out.push_back(num(v));
      return out;
    };
    j["witness"] = {{"e", arr(w.e)},
                    {"lambda_minus", arr(w.lambda_minus)},
                    {"lambda_plus", arr(w.lambda_plus)},
                    {"lhs", num(w.lhs)},
                    {"rhs", num(w.rhs)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const VectorSieveResult& r) {
  return {{"lower", num(r.lower)},
          {"weighted_minus", num(r.weighted_minus)},
          {"weighted_plus", num(r.weighted_plus)},
          {"exact", r.exact ? json(*r.exact) : json(nullptr)}};
}

}  // namespace kglab::report
