#pragma once

#include "ksat/cover.hpp"
#include "ksat/formula.hpp"

#include <optional>
#include <vector>

namespace ksat {

struct TwoSatInstance {
	int n_vars = 0;
	std::vector<std::pair<Lit, Lit>> clauses;
};

// drops every clause with a red or blue clone; each survivor (yellow plus at
// least two green clones) becomes the 2-clause of its first two green clones
TwoSatInstance reduce_to_2sat(const Formula &f, const Shade &s);

// implication graph + SCC; a satisfying assignment is returned when one exists
std::optional<std::vector<uint8_t>> solve_2sat(const TwoSatInstance &t);

// literal sequence l_0,...,l_{h+1}: every ~l_i v l_{i+1} is a clause, the
// middle variables are pairwise distinct, and |l_0|, |l_{h+1}| are among them
struct Bicycle {
	std::vector<Lit> lits;
	int h() const { return (int)lits.size() - 2; }
};

// all bicycles with h <= max_h, deduplicated up to rotation of the sequence
std::vector<Bicycle> find_bicycles(const TwoSatInstance &t, int max_h = 12);

struct ExtendResult {
	bool extendible = false;
	std::vector<uint8_t> assignment; // per variable, valid when extendible
};

// keeps the cover's 0/1 part, replaces stars via the 2-SAT reduction; any
// star variable free of the reduced instance is set to 1
ExtendResult extend_cover(const Formula &f, const CoverMap &z);

std::string write_dimacs(const TwoSatInstance &t);

} // namespace ksat
