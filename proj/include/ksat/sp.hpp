#pragma once

#include "ksat/cover.hpp"
#include "ksat/formula.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <vector>

namespace ksat {

using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat &x) { return (double)x; }

// SP-predicted marginal over {1,0,*} for a literal with degree gap
// delta = d_l - d_{~l}; exact rationals with denominator 2^{k+2}
struct Signature {
	Rat p1, p0, ps;
};

Signature sp_marginal(int k, int64_t delta);

// clone color distribution over {r,b,g,y}
struct CloneDist {
	Rat r, b, g, y;
	Rat p1() const { return r + b; }
	bool operator==(const CloneDist &o) const = default;
	bool operator<(const CloneDist &o) const
	{
		if (r != o.r)
			return r < o.r;
		if (b != o.b)
			return b < o.b;
		if (g != o.g)
			return g < o.g;
		return y < o.y;
	}
};

// Lambda_j^r = (t_j^1 + t_j^*) prod_{j' != j} t_{j'}^0, Lambda_j^b the rest of
// t_j^1; yellow and green mass pass through. Throws if some Lambda^b < 0.
std::vector<CloneDist> lambda_map(const std::vector<Signature> &sig);

struct LiteralType {
	int64_t d_pos = 0, d_neg = 0;
	std::vector<CloneDist> clones;     // of l, in canonical (sorted) clone order
	std::vector<CloneDist> neg_clones; // of ~l
	Rat weight;                        // pi_t = n_t / 2n
	int64_t count = 0;                 // n_t
	int neg_type = -1;                 // index of the type of ~l
	Signature sig;                     // value marginals (t^1, t^0, t^*)
};

struct ClauseSlot {
	int lit_type = -1;
	int clone = 0; // canonical clone index h (0-based)
	CloneDist dist;
};

struct ClauseType {
	std::vector<ClauseSlot> slots;
	Rat weight; // pi_ell = m_ell / m
	int64_t count = 0;
};

struct TypeSystem {
	int k = 0;
	int64_t n_vars = 0;   // n
	int64_t n_clauses = 0; // m
	bool degree_pair_mode = false;
	std::vector<LiteralType> lit_types;
	std::vector<ClauseType> clause_types;

	// instance maps, for empirical checks on the underlying formula
	std::vector<int> type_of_literal;        // literal code -> type index
	std::vector<int> type_of_clause;         // clause -> clause type index
	std::vector<std::vector<int>> clone_rank; // literal code -> occurrence -> canonical h
};

// Builds the journal-construction type assignment theta_{d(i,j)} =
// Lambda_j(theta_i) on a pruned formula and groups literals/clauses into
// types. In degree-pair mode types collapse to (d_l, d_{~l}) and every clone
// carries the class-average distribution.
TypeSystem assign_types(const Formula &f, int k, bool degree_pair_mode = false);

struct TypeIdentityReport {
	bool exact = true;
	double max_violation = 0;     // max |l_j^r - l_j^p prod l^y|
	double max_dev_from_2k = 0;   // max |l_j^r - 2^{-k}|
};

TypeIdentityReport check_type_identity(const TypeSystem &ts);

struct ThetaShadeReport {
	bool ok = true;
	double max_literal_dev = 0; // in units of n_t
	double max_clause_dev = 0;  // in units of m_ell
};

// empirical color counts against the type prescription, with additive slack
// (counts are integers, so a +1 rounding allowance is always granted)
ThetaShadeReport is_theta_shade(const Formula &f, const TypeSystem &ts,
                                const Shade &s, double slack);

// Truncated size-biased Poisson model of the pruned ensemble. The effective
// window is the requested one intersected with +-12 standard deviations of
// Po(kr/2); mass beyond that is below double precision and is reported as
// truncation_mass.
struct PoissonEnsemble {
	int k = 0;
	double r = 0;
	double mu = 0; // kr/2
	int64_t d_lo = 0, d_hi = 0;
	std::vector<double> pmf; // renormalized over [d_lo, d_hi]
	double truncation_mass = 0;
	double mean = 0, mean_sq = 0; // of the truncated pmf
	double s = 0;                 // E_rho[theta^0], size-biased signature mean

	double prob(int64_t d) const
	{
		return d < d_lo || d > d_hi ? 0.0 : pmf[d - d_lo];
	}
};

PoissonEnsemble poisson_type_ensemble(int k, double r, int64_t trunc = -1);

} // namespace ksat
