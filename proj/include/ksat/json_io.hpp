#pragma once

#include "ksat/cover.hpp"
#include "ksat/moments.hpp"
#include "ksat/pruning.hpp"
#include "ksat/solver.hpp"
#include "ksat/sp.hpp"
#include "ksat/thresholds.hpp"
#include "ksat/twosat.hpp"

#include <json.hpp>

namespace ksat {

using json = nlohmann::ordered_json;

json schema_header(const std::string &command);

std::string rat_string(const Rat &x);

json to_json(const PruneReport &r);
json to_json(const CoverMap &z);
json to_json(const Formula &f, const Shade &s);
json to_json(const OverlapMatrix &o);
json to_json(const TypeSystem &ts);
json to_json(const TypeIdentityReport &r);
json to_json(const FirstMomentParams &p);
json to_json(const RateResult &r);
json to_json(const AsymptoticTable &t);
json to_json(const BoundTable &t);
json to_json(const SatProbability &p);
json to_json(const ThresholdEstimate &e);
json to_json(const SecondMomentResult &r);
json to_json(const StationaryReport &r);
json to_json(const ConcavityReport &r);
json to_json(const PsiValue &v);
json to_json(const MiddleGroundScan &s);
json to_json(const RegularThreshold &t);
json to_json(const Bicycle &b);

std::string curve_csv(const std::vector<ThresholdCurvePoint> &curve);
std::string curve_csv(const std::vector<std::pair<int, double>> &curve,
                      const std::string &xname, const std::string &yname);

} // namespace ksat
