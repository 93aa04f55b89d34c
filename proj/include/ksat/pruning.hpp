#pragma once

#include "ksat/formula.hpp"

#include <map>
#include <set>

namespace ksat {

// Density is handled as an exact rational r = num/den so the degree-window
// tests |d_l - kr/2| > k^3 2^{k/2} can be decided without float boundary
// flakes (both sides are compared after squaring, which clears the 2^{k/2}).
struct Density {
	int64_t num = 0;
	int64_t den = 1;

	static Density of_formula(const Formula &f)
	{
		return Density{(int64_t)f.clauses.size(), (int64_t)f.n_vars};
	}
	double value() const { return (double)num / (double)den; }
};

struct PruneOptions {
	// The re-add rule of the clause-deletion loop keeps comparing against the
	// original kr/2 target. Set to true to recompute the target from the
	// current clause count after every deletion round.
	bool recompute_target = false;
};

struct PruneReport {
	std::set<int> removed_vars;        // the set U
	std::set<int> removed_clause_ids;  // deleted by the PR2 loop
	std::set<int> dropped_clause_ids;  // fell below width k-2 when stripping U
	int rounds = 0;
	int kept_vars = 0;
	int kept_clauses = 0;
	std::map<int, int> widths_histogram;
	bool recompute_target = false;
};

// PR1: seed U with all degree outliers.
// PR2: while some clause has >= 3 distinct U-variables, delete every such
//      clause, then re-add any variable whose current literal degree left the
//      window (round semantics; the final U is a closure and does not depend
//      on scan order).
// PR3: strip U-occurrences from the survivors. Clauses that fall below width
//      k-2 are deleted and recorded.
std::pair<Formula, PruneReport> prune(const Formula &f, int k, Density r,
                                      PruneOptions opt = {});

struct DegreeBoundReport {
	std::vector<Lit> violators;
	int64_t max_abs_deviation_num = 0; // |2*den*d_l - k*num|, max over literals
	bool ok() const { return violators.empty(); }
};

DegreeBoundReport check_degree_bounds(const Formula &f, int k, Density r);

} // namespace ksat
