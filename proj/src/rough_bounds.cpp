#include "ksat/moments.hpp"

#include <cmath>

namespace ksat {

namespace {

double xlx(double x) { return x == 0 ? 0.0 : x * std::log(x); }

} // namespace

PsiValue separability_psi(int k, double r, const PsiInput &in)
{
	PsiValue out;
	double p2k = std::ldexp(1.0, -k);

	// reconstruct O from (O^{10}, O^{1*}) via the affine relations of pairs
	// with a 2^{-k} N star budget (counted over the 2N literals)
	double o10 = in.o10, o1s = in.o1s;
	double oss = 0.5 * p2k - 2 * o1s;
	double o11 = 0.5 - 0.25 * p2k - o10 - o1s;
	double o00 = o11;
	out.o_row = {o11, o10, o1s};
	double O[3][3] = {{o00, o10, o1s}, {o10, o11, o1s}, {o1s, o1s, oss}};
	for (int a = 0; a < 3; ++a)
		for (int b = 0; b < 3; ++b)
			if (O[a][b] < 0 || O[a][b] > 1)
			{
				out.feasible = false;
				out.note = "reconstructed overlap entry outside [0,1]";
				return out;
			}

	double H = 0;
	for (int a = 0; a < 3; ++a)
		for (int b = 0; b < 3; ++b)
			H -= xlx(O[a][b]);
	out.entropy = H;

	// row/column sums indexed 0, 1, *
	double row0 = o00 + o10 + o1s;
	double col0 = row0;
	double rows = 2 * o1s + oss; // the *-row

	// g(O)
	double gyy = k * (double)(k - 1) * o10 * o10 * std::pow(o00, k - 2);
	double grg = k * o1s * (std::pow(col0, k) - std::pow(o00, k));
	double ggr = grg;
	double gry = k * o10 *
	             (std::pow(col0, k - 1) - std::pow(o00, k - 1) -
	              k * (o10 + o1s) * std::pow(o00, k - 1));
	double gyr = gry;
	double gcc = 1 - std::pow(col0, k) - std::pow(row0, k) -
	             k * rows * std::pow(col0, k - 1) - k * rows * std::pow(row0, k - 1) +
	             std::pow(o00, k) + k * o1s * std::pow(o00, k - 1) +
	             k * o1s * std::pow(o00, k - 1) + k * oss * std::pow(o00, k - 1) +
	             k * (double)(k - 1) * o1s * o1s * std::pow(o00, k - 2);

	// Gamma(O) feasibility
	const auto &g = in.gamma; // yy, rg, ry, gr, yr, cc
	double sum = 0;
	for (double v : g)
	{
		if (v < -1e-15)
		{
			out.feasible = false;
			out.note = "negative gamma entry";
			return out;
		}
		sum += v;
	}
	if (std::abs(sum - 1) > 1e-9)
	{
		out.feasible = false;
		out.note = "gamma does not sum to 1";
		return out;
	}
	double two_n_over_m = 2.0 / r;
	double p8k = std::pow(8.0, -k);
	if (g[0] + g[2] < two_n_over_m * o10 - p8k ||
	    g[0] + g[4] < two_n_over_m * o10 - p8k ||
	    g[1] < two_n_over_m * o1s - p8k || g[3] < two_n_over_m * o1s - p8k)
	{
		out.feasible = false;
		out.note = "gamma violates the Gamma(O) lower bounds";
		return out;
	}

	double gv[6] = {gyy, grg, gry, ggr, gyr, gcc};
	double kl = 0;
	for (int i = 0; i < 6; ++i)
	{
		if (g[i] == 0)
			continue;
		if (gv[i] <= 0)
		{
			kl = HUGE_VAL;
			break;
		}
		kl += g[i] * std::log(g[i] / gv[i]);
	}
	double kl_term = -(1 - p8k) * r * kl;
	out.kl_term = kl_term;

	// Freezing cost of the critical-clause occupancy argument: every literal
	// set to 1 under the first shade needs a critical clause, which costs
	// exp(-|W| 2^{-k}) with |W| = 2N O^{1.}. The printed +2^{-k} O^{11}
	// variant is reported alongside.
	out.freezing_term = -p2k * 2 * (o11 + o10 + o1s);
	out.value = H + kl_term + out.freezing_term;
	out.value_paper = H + kl_term + p2k * o11;
	return out;
}

MiddleGroundScan scan_middle_ground(int k, double r, int grid_points)
{
	MiddleGroundScan scan;
	double lo1 = std::pow(2.0, -0.99 * k);
	double hi1 = 0.5 - std::pow(2.0, -0.49 * k);
	double lo2 = 0.5 + std::pow(2.0, -0.49 * k);
	double hi2 = 1.0;
	double len1 = std::max(0.0, hi1 - lo1), len2 = std::max(0.0, hi2 - lo2);
	int n1 = (int)std::llround(grid_points * len1 / (len1 + len2));
	n1 = std::max(2, std::min(grid_points - 2, n1));
	int n2 = grid_points - n1;

	auto eval = [&](double y) {
		double h = -xlx(y) - xlx(1 - y);
		double arg = 1 - std::ldexp(2.0, -k) + std::pow((1 - y) / 2, k);
		double v = h + r * std::log(arg);
		if (v > scan.max_value)
		{
			scan.max_value = v;
			scan.argmax_y = y;
		}
	};
	for (int i = 0; i < n1; ++i)
		eval(lo1 + (hi1 - lo1) * i / (double)(n1 - 1));
	for (int i = 0; i < n2; ++i)
		eval(lo2 + (hi2 - lo2) * i / (double)(n2 - 1));
	scan.points = n1 + n2;
	return scan;
}

} // namespace ksat
