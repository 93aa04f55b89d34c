#pragma once

#include "ksat/sp.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ksat {

// ---------------------------------------------------------------------------
// numeric view of a type system, shared by every moment evaluator
// ---------------------------------------------------------------------------

struct MLitType {
	double w = 0;              // pi_t
	double t1 = 0, t0 = 0, ts = 0;
	double d = 0;              // clone count of the positive side
	bool uniform = true;       // all clones share one red mass
	std::vector<double> th_r;  // size 1 when uniform, else size d
	int neg_type = -1;         // complementary type; -1 when self-paired
};

struct MClauseType {
	double w = 0; // pi_ell
	std::vector<double> lj_r, lj_y; // per slot; lj_p = 1 - lj_y
	std::vector<int> slot_type;     // literal type per slot, -1 if untracked
	std::vector<int> slot_clone;    // canonical clone index, -1 for uniform clones
};

struct MomentSystem {
	int k = 0;
	double m_over_n = 0;
	std::vector<MLitType> lits;
	std::vector<MClauseType> clauses;
	double truncation_error = 0;
	// counts behind the polylog constant C; only meaningful for finite systems
	bool has_polylog = false;
	double pair_classes = 0;       // |[T]|
	double sum_k_ell_half = 0;     // sum of k_ell / 2 over clause types
	double sum_incidence_half = 0; // sum of (|d(t,h)|-1)/2 over clone positions
};

// single-type system of the d-regular ensemble (delta = 0, width k)
MomentSystem regular_system(int k, int d);
// numeric view of a concrete (exact) type system
MomentSystem moment_system(const TypeSystem &ts);
// quadrature view of the truncated Poisson ensemble: literal pseudo-types are
// 2-d Gauss nodes of the degree measure, clause pseudo-types are weighted
// multisets of Gauss nodes of the size-biased signature measure
MomentSystem moment_system(const PoissonEnsemble &e, int nodes = 8);

// ---------------------------------------------------------------------------
// first moment
// ---------------------------------------------------------------------------

struct FirstMomentParams {
	std::vector<std::vector<double>> q_r; // [lit type][clone]; size 1 when uniform
	std::vector<std::vector<double>> q_p; // [clause type][slot]
	double residual = HUGE_VAL;
	int iterations = 0;
	bool converged = false;
};

FirstMomentParams solve_first_moment(const MomentSystem &ms, double tol = 1e-12,
                                     int max_iter = 10000);

// direct substitution of the parameters into the defining equations,
// independent of the solver path
double first_moment_residual(const MomentSystem &ms, const FirstMomentParams &p);

struct RateResult {
	double rate = 0; // entropy + occupancy + validity
	double entropy = 0;
	double occupancy = 0;      // with the (t^1+t^*) prefactor on the clone KL
	double occupancy_fig1 = 0; // variant without the prefactor
	double validity = 0;       // includes the m/n weighting
	double validity_sum = 0;   // plain sum over clause types (no m/n)
	double polylog_C = 0;      // reported separately, never added to rate
	double residual = 0;
	double truncation_error = 0;
};

RateResult first_moment_rate(const MomentSystem &ms, const FirstMomentParams &p);
RateResult first_moment_rate(const MomentSystem &ms, double tol = 1e-12);

struct AsymptoticRow {
	std::string name;
	double computed = 0, claimed = 0, deviation = 0, tolerance = 0;
	bool ok = false;
};

struct AsymptoticTable {
	std::vector<AsymptoticRow> rows;
	RateResult rate;
};

// component-wise comparison against the leading-order expansion on the
// Poisson ensemble
AsymptoticTable asymptotic_terms(int k, double r);

// ---------------------------------------------------------------------------
// overlaps and the second-moment function f
// ---------------------------------------------------------------------------

struct GammaBlock {
	std::vector<std::array<double, 5>> slot; // per slot: rr, rc, ry, cr, yr
	std::vector<double> yy;                  // k*k row-major, diagonal unused
	double cc = 0;
};

struct Overlap {
	std::vector<std::array<double, 9>> wt; // per lit type, index z1*3+z2, order 0,1,*
	std::vector<std::vector<std::array<double, 4>>> wlj; // per clause/slot: pp,py,yp,yy
	std::vector<GammaBlock> gamma;
	std::vector<std::array<double, 5>> wth; // derived: per lit type rr, rc, cr, ry, yr
};

// the uncorrelated pair overlap
Overlap product_overlap(const MomentSystem &ms);
// recompute the derived clone-level block from gamma
void refresh_clone_level(const MomentSystem &ms, Overlap &ov);

struct AffineCheck {
	bool ok = true;
	double max_residual = 0;
	std::vector<std::string> notes;
};

AffineCheck check_affine_relations(const MomentSystem &ms, const Overlap &ov,
                                   double slack);

struct SecondMomentResult {
	double f = 0, f_ent = 0, f_disc = 0, f_val = 0, f_occ = 0;
	double solver_residual = 0;
	bool in_region = true; // implicit solvers stayed in their domains
	double fhat = 0;       // rough upper bound, reported as the fallback
};

SecondMomentResult second_moment_f(const MomentSystem &ms, const Overlap &ov,
                                   double tol = 1e-11);

// f restricted to the affine-feasible subspace around the product overlap.
// Directions live in unit-scaled coordinates: a step of c along basis[i]
// moves the raw coordinates by c * scale .* basis[i].
struct FeasibleSpace {
	int coords = 0; // packed coordinate count
	int dim = 0;    // free directions
	std::vector<std::vector<double>> basis; // dim orthonormal vectors (scaled space)
	std::vector<double> scale;              // per-coordinate unit scale
};

FeasibleSpace feasible_space(const MomentSystem &ms);
std::vector<double> pack_overlap(const MomentSystem &ms, const Overlap &ov);
Overlap unpack_overlap(const MomentSystem &ms, const std::vector<double> &x);

// packed coordinate indices of selected entries
int overlap_coord_gamma_rr(const MomentSystem &ms, int clause_type, int slot);
int overlap_coord_wlj(const MomentSystem &ms, int clause_type, int slot, int entry);

struct StationaryReport {
	double max_abs_derivative = 0;
	std::vector<double> derivatives; // along the feasible basis
};

StationaryReport check_stationary(const MomentSystem &ms, double h_step = 1e-5);

struct ConcavityReport {
	double max_eigenvalue = -HUGE_VAL; // over all sampled points
	std::vector<double> per_sample_max;
	double curvature_gamma_rr = 0; // diagonal second difference, gamma^{rr} direction
	double curvature_omega_pp = 0; // same for a slot-level omega^{pp} direction
	bool all_negative = true;
};

// numeric Hessian at the product overlap and at tame samples around it
ConcavityReport check_concavity(const MomentSystem &ms, int n_samples,
                                double radius, uint64_t seed,
                                double h_step = 1e-5);

// sup_gamma F <= fhat: entropy plus the yellow-yellow log term
double rough_bound_fhat(const MomentSystem &ms, const Overlap &ov);

// ---------------------------------------------------------------------------
// separability machinery on the unpruned formula
// ---------------------------------------------------------------------------

struct PsiInput {
	double o10 = 0, o1s = 0;       // free entries; the rest follows affinely
	std::array<double, 6> gamma{}; // yy, rg, ry, gr, yr, cc
};

struct PsiValue {
	double value = 0;       // with the critical-clause freezing cost -2^{-k} 2 O^{1.}
	double value_paper = 0; // with the printed +2^{-k} O^{11} term instead
	double entropy = 0, kl_term = 0, freezing_term = 0;
	std::array<double, 3> o_row{}; // O^{11}, O^{10}, O^{1*} after reconstruction
	bool feasible = true;
	std::string note;
};

PsiValue separability_psi(int k, double r, const PsiInput &in);

struct MiddleGroundScan {
	double max_value = -HUGE_VAL;
	double argmax_y = 0;
	int points = 0;
};

// H(y) + r ln[1 - 2^{1-k} + ((1-y)/2)^k] over the two middle intervals
MiddleGroundScan scan_middle_ground(int k, double r, int grid_points);

// ---------------------------------------------------------------------------
// regular k-SAT rate
// ---------------------------------------------------------------------------

double regular_xi(int k, int d);

struct RegularThreshold {
	int d_star = -1; // largest d with Xi(k,d) >= 0 in the scanned range
	bool found_sign_change = false;
	bool strictly_decreasing = true;
	std::vector<std::pair<int, double>> curve;
};

RegularThreshold regular_threshold(int k, int d_lo, int d_hi);

// ---------------------------------------------------------------------------
// shared numeric helpers
// ---------------------------------------------------------------------------

inline double xlogy(double x, double y) { return x == 0 ? 0.0 : x * std::log(y); }
inline double entropy3(double a, double b, double c)
{
	return -xlogy(a, a) - xlogy(b, b) - xlogy(c, c);
}
inline double kl2(double a, double b)
{
	return xlogy(a, a / b) + xlogy(1 - a, (1 - a) / (1 - b));
}

} // namespace ksat
