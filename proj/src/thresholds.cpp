#include "ksat/thresholds.hpp"

#include <cmath>

namespace ksat {

static double pow2(int k) { return std::ldexp(1.0, k); }

double bound_main(int k)
{
	if (k < 3)
		throw std::invalid_argument("bound_main: k must be >= 3");
	return pow2(k) * M_LN2 - (1.0 + M_LN2) / 2.0;
}

double bound_lower_ap(int k)
{
	if (k < 3)
		throw std::invalid_argument("bound_lower_ap: k must be >= 3");
	return pow2(k) * M_LN2 - k * M_LN2 / 2.0 - (1.0 + M_LN2 / 2.0);
}

double bound_condensation(int k)
{
	if (k < 3)
		throw std::invalid_argument("bound_condensation: k must be >= 3");
	return pow2(k) * M_LN2 - 1.5 * M_LN2;
}

BoundTable bound_table(int k)
{
	BoundTable t;
	t.k = k;
	t.main = bound_main(k);
	t.kkks_upper = t.main;
	t.ap_lower = bound_lower_ap(k);
	t.condensation = bound_condensation(k);
	t.gap = t.main - t.ap_lower;
	return t;
}

} // namespace ksat
