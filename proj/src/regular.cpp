#include "ksat/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace ksat {

namespace {

// Rate of the star-capped cover count at prescribed statistics: star mass ts
// per variable and red mass rf per clause slot. The SP prediction pins these
// to the signature values; the plain cover count of the Appendix's Sigma'
// maximizes over them instead, which also keeps small k inside the feasible
// wedge.
struct PinnedRate {
	bool feasible = false;
	double rate = -HUGE_VAL;
};

PinnedRate pinned_rate(int k, int d, double ts, double rf)
{
	PinnedRate out;
	double t1 = 0.5 * (1 - ts), t0 = t1;
	double lp = t1 + ts, ly = t0;

	// category feasibility: cyan clauses need two purple slots on average,
	// every 1-literal needs a red clone, and at most one slot per clause is
	// red
	if (rf <= 0 || k * rf >= 1 || rf >= lp)
		return out;
	if (k * lp - k * rf < 2 * (1 - k * rf))
		return out;
	if (rf * d <= t1)
		return out;

	MomentSystem ms;
	ms.k = k;
	ms.m_over_n = 2.0 * d / k;
	MLitType t;
	t.w = 1;
	t.t1 = t1;
	t.t0 = t0;
	t.ts = ts;
	t.d = d;
	t.uniform = true;
	t.th_r = {rf};
	t.neg_type = 0;
	ms.lits.push_back(t);
	MClauseType c;
	c.w = 1;
	c.lj_r.assign(k, rf);
	c.lj_y.assign(k, ly);
	c.slot_type.assign(k, 0);
	c.slot_clone.assign(k, -1);
	ms.clauses.push_back(c);

	FirstMomentParams p = solve_first_moment(ms, 1e-12, 4000);
	if (!p.converged)
		return out;
	try
	{
		RateResult r = first_moment_rate(ms, p);
		out.rate = r.rate;
		out.feasible = std::isfinite(out.rate);
	}
	catch (const std::domain_error &)
	{
	}
	return out;
}

} // namespace

namespace {

struct BoxSearch {
	double best = -HUGE_VAL, best_ts = -1, best_rf = -1;

	void run(int k, int d, double ts_lo, double ts_hi, double rf_lo,
	         double rf_hi, int rounds)
	{
		double cap = std::ldexp(1.0, -k);
		const int grid = 13;
		for (int round = 0; round < rounds; ++round)
		{
			bool improved = false;
			for (int a = 0; a < grid; ++a)
				for (int b = 0; b < grid; ++b)
				{
					double ts = ts_lo + (ts_hi - ts_lo) * a / (double)(grid - 1);
					double rf = rf_lo + (rf_hi - rf_lo) * (b + 0.5) / (double)grid;
					PinnedRate r = pinned_rate(k, d, ts, rf);
					if (r.feasible && r.rate > best)
					{
						best = r.rate;
						best_ts = ts;
						best_rf = rf;
						improved = true;
					}
				}
			if (best_ts < 0)
				return;
			if (!improved && round > 0)
				return;
			double ts_step = std::max((ts_hi - ts_lo) / (grid - 1), 1e-14);
			double rf_step = std::max((rf_hi - rf_lo) / grid, 1e-14);
			ts_lo = std::max(0.0, best_ts - ts_step);
			ts_hi = std::min(cap, best_ts + ts_step);
			rf_lo = std::max(0.0, best_rf - rf_step);
			rf_hi = std::min(1.0 / k, best_rf + rf_step);
		}
	}
};

} // namespace

double regular_xi(int k, int d)
{
	if (k < 3 || d < 1)
		throw std::invalid_argument("regular_xi: bad parameters");
	// maximize over the star budget [0, 2^-k] and the free red mass; both a
	// global sweep and a zoomed box around the SP prediction, whose scale
	// 2^{-k} a coarse global grid cannot resolve
	double cap = std::ldexp(1.0, -k);
	BoxSearch search;
	search.run(k, d, 0, cap, 0, 1.0 / k, 5);

	double ts_sp = std::ldexp(1.0, -k - 1);
	double t0_sp = 0.5 - std::ldexp(1.0, -k - 2);
	double rf_sp = (1 - t0_sp) * std::pow(t0_sp, k - 1);
	search.run(k, d, 0, std::min(cap, 4 * ts_sp), std::max(0.0, 0.25 * rf_sp),
	           std::min(1.0 / k, 4 * rf_sp), 6);
	return search.best;
}

RegularThreshold regular_threshold(int k, int d_lo, int d_hi)
{
	if (d_lo < 1 || d_hi < d_lo)
		throw std::invalid_argument("regular_threshold: bad range");
	RegularThreshold rt;
	double prev = HUGE_VAL;
	for (int d = d_lo; d <= d_hi; ++d)
	{
		double xi = regular_xi(k, d);
		rt.curve.push_back({d, xi});
		if (std::isfinite(prev) && std::isfinite(xi) && xi >= prev)
			rt.strictly_decreasing = false;
		if (std::isfinite(xi))
			prev = xi;
		if (std::isfinite(xi) && xi >= 0)
			rt.d_star = d;
	}
	rt.found_sign_change = rt.d_star >= 0 && rt.d_star < d_hi &&
	                       std::isfinite(rt.curve.back().second) &&
	                       rt.curve.back().second < 0;
	return rt;
}

} // namespace ksat
