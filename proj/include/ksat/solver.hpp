#pragma once

#include "ksat/formula.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ksat {

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
	SatStatus status = SatStatus::Unknown;
	std::optional<std::vector<uint8_t>> assignment; // verified before return
	int64_t decisions = 0;
	int64_t propagations = 0;
};

bool assignment_satisfies(const Formula &f, const std::vector<uint8_t> &a);

// all satisfying assignments, in counting order
std::vector<std::vector<uint8_t>> brute_force_sat(const Formula &f, int max_vars = 25);

// unit propagation + pure-literal elimination + max-occurrence branching,
// deterministic tie-break by literal code; node_cap 0 means unbounded
SatResult dpll_solve(const Formula &f, int64_t node_cap = 0);

struct SatProbability {
	double fraction = 0;
	double stderr_ = 0;
	int64_t sat = 0;
	int64_t trials = 0;
	int64_t unknown = 0;
};

// fraction of satisfiable gen_uniform(k, n, ceil(r*n)) draws; trial t uses
// seed ^ t so the merged fraction is independent of evaluation order
SatProbability estimate_sat_probability(int k, int n, double r, int64_t trials,
                                        uint64_t seed, int64_t node_cap = 0);

struct ThresholdCurvePoint {
	double r = 0;
	double fraction = 0;
	double stderr_ = 0;
};

struct ThresholdEstimate {
	double estimate = 0;
	std::vector<ThresholdCurvePoint> curve; // sorted by r
	bool monotone_within_noise = true;      // 3 sigma slack
};

// bisection on r targeting P(sat) = 1/2
ThresholdEstimate empirical_threshold(int k, int n, int64_t trials, double r_lo,
                                      double r_hi, double tol, uint64_t seed);

} // namespace ksat
