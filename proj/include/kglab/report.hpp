// JSON and CSV emission. Numbers carry 15 significant digits so reports are
// byte-stable across platforms with the same libm.
#pragma once

#include <string>

#include "json.hpp"
#include "kglab/arcs.hpp"
#include "kglab/expsum.hpp"
#include "kglab/representations.hpp"
#include "kglab/singular.hpp"

namespace kglab::report {

using json = nlohmann::ordered_json;

double round15(double v);
// %.15g in the C locale; "nan", "inf", "-inf" for non-finite values.
std::string fmt15(double v);
// Rounded number, or null when not finite.
json num(double v);

// {schema, version, command, config}; results are merged in by the caller.
json envelope(const std::string& command, json config);
std::string dump(const json& j);

json to_json(const ShortInterval& interval);
json to_json(const CountReport& r, bool timing);
json to_json(const SingularSeriesEstimate& e);
json to_json(const SingularIntegralEstimate& e);
json to_json(const PredictionReport& r);
json to_json(const ArcDissection& d);
json to_json(const ScanReport& r);
json to_json(const MomentResult& m);
json to_json(const PointwiseSieveReport& r);
json to_json(const VectorSieveResult& r);

}  // namespace kglab::report
