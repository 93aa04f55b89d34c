#include "ksat/sp.hpp"

#include <cmath>
#include <stdexcept>

namespace ksat {

PoissonEnsemble poisson_type_ensemble(int k, double r, int64_t trunc)
{
	if (k < 3 || r <= 0)
		throw std::invalid_argument("poisson_type_ensemble: bad parameters");
	PoissonEnsemble e;
	e.k = k;
	e.r = r;
	e.mu = 0.5 * k * r;
	if (trunc < 0)
		trunc = (int64_t)std::llround((double)k * k * k * std::ldexp(1.0, k / 2) *
		                              (k % 2 ? M_SQRT2 : 1.0));
	// Poisson mass beyond 12 sigma is below double precision, so the
	// enumerable window can be capped there without changing any expectation
	int64_t cap = (int64_t)std::ceil(12.0 * std::sqrt(e.mu)) + 2;
	int64_t half = std::min(trunc, cap);
	int64_t center = (int64_t)std::llround(e.mu);
	e.d_lo = std::max<int64_t>(0, center - half);
	e.d_hi = center + half;

	e.pmf.resize(e.d_hi - e.d_lo + 1);
	double mass = 0;
	for (int64_t d = e.d_lo; d <= e.d_hi; ++d)
	{
		double lp = -e.mu + d * std::log(e.mu) - std::lgamma((double)d + 1.0);
		e.pmf[d - e.d_lo] = std::exp(lp);
		mass += e.pmf[d - e.d_lo];
	}
	e.truncation_mass = std::max(0.0, 1.0 - mass);
	for (auto &p : e.pmf)
		p /= mass;

	for (int64_t d = e.d_lo; d <= e.d_hi; ++d)
	{
		double p = e.pmf[d - e.d_lo];
		e.mean += d * p;
		e.mean_sq += (double)d * (double)d * p;
	}

	// s = E_rho[theta^0] with rho the size-biased degree-pair measure;
	// theta^0(delta) = 1/2 - 2^{-k-2} - delta 2^{-k-1} is affine, so only
	// E_rho[delta] = E[D^2]/E[D] - E[D] is needed
	double e_delta = e.mean_sq / e.mean - e.mean;
	e.s = 0.5 - std::ldexp(1.0, -k - 2) - std::ldexp(1.0, -k - 1) * e_delta;
	return e;
}

} // namespace ksat
