#include "ksat/pruning.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace ksat {

using boost::multiprecision::cpp_int;

namespace {

// |d - k*num/(2*den)| > k^3 * 2^{k/2}, decided exactly:
// (2*den*d - k*num)^2 > (2*den*k^3)^2 * 2^k
struct WindowTest {
	cpp_int lhs_base; // k*num
	cpp_int two_den;
	cpp_int rhs; // (2*den*k^3)^2 * 2^k

	WindowTest(int k, int64_t num, int64_t den)
	{
		lhs_base = cpp_int(k) * num;
		two_den = cpp_int(2) * den;
		cpp_int b = two_den * k * k * k;
		rhs = b * b << k;
	}

	bool outside(int64_t degree) const
	{
		cpp_int lhs = two_den * degree - lhs_base;
		return lhs * lhs > rhs;
	}
};

} // namespace

std::pair<Formula, PruneReport> prune(const Formula &f, int k, Density r,
                                      PruneOptions opt)
{
	if (r.num <= 0 || r.den <= 0)
		throw std::invalid_argument("prune: density must be positive");
	f.check_valid();

	PruneReport rep;
	rep.recompute_target = opt.recompute_target;

	DegreeProfile deg = degree_profile(f);
	std::vector<bool> in_u(f.n_vars + 1, false);
	std::vector<bool> alive(f.clauses.size(), true);

	WindowTest test(k, r.num, r.den);
	auto var_outside = [&](int v) {
		return test.outside(deg[Lit(v, false)]) || test.outside(deg[Lit(v, true)]);
	};

	// PR1
	for (int v = 1; v <= f.n_vars; ++v)
		if (var_outside(v))
			in_u[v] = true;

	// PR2, round semantics
	int64_t m_alive = (int64_t)f.clauses.size();
	for (;;)
	{
		std::vector<int> batch;
		for (size_t i = 0; i < f.clauses.size(); ++i)
		{
			if (!alive[i])
				continue;
			int u_vars = 0;
			// distinct U-variables in this clause
			for (size_t a = 0; a < f.clauses[i].size(); ++a)
			{
				int v = f.clauses[i][a].var;
				if (!in_u[v])
					continue;
				bool seen = false;
				for (size_t b = 0; b < a; ++b)
					if (f.clauses[i][b].var == v)
					{
						seen = true;
						break;
					}
				if (!seen)
					++u_vars;
			}
			if (u_vars >= 3)
				batch.push_back((int)i);
		}
		if (batch.empty())
			break;
		++rep.rounds;
		for (int i : batch)
		{
			alive[i] = false;
			rep.removed_clause_ids.insert(i);
			for (auto l : f.clauses[i])
				--deg[l];
			--m_alive;
		}
		if (opt.recompute_target)
			test = WindowTest(k, m_alive, f.n_vars);
		for (int v = 1; v <= f.n_vars; ++v)
			if (!in_u[v] && var_outside(v))
				in_u[v] = true;
	}

	// PR3
	Formula out;
	out.n_vars = f.n_vars;
	out.k = k;
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		if (!alive[i])
			continue;
		Clause c;
		for (auto l : f.clauses[i])
			if (!in_u[l.var])
				c.push_back(l);
		if ((int)c.size() < k - 2 || c.empty())
		{
			rep.dropped_clause_ids.insert((int)i);
			continue;
		}
		++rep.widths_histogram[(int)c.size()];
		out.clauses.push_back(std::move(c));
	}

	for (int v = 1; v <= f.n_vars; ++v)
		if (in_u[v])
			rep.removed_vars.insert(v);
	rep.kept_vars = f.n_vars - (int)rep.removed_vars.size();
	rep.kept_clauses = (int)out.clauses.size();
	return {std::move(out), std::move(rep)};
}

DegreeBoundReport check_degree_bounds(const Formula &f, int k, Density r)
{
	DegreeProfile deg = degree_profile(f);
	WindowTest test(k, r.num, r.den);
	DegreeBoundReport rep;
	for (int v = 1; v <= f.n_vars; ++v)
	{
		// only variables that still occur; pruned-away variables have no clones
		if (deg[Lit(v, false)] == 0 && deg[Lit(v, true)] == 0)
			continue;
		for (bool neg : {false, true})
		{
			Lit l(v, neg);
			cpp_int dev = cpp_int(2) * r.den * deg[l] - cpp_int(k) * r.num;
			if (dev < 0)
				dev = -dev;
			if (dev > rep.max_abs_deviation_num)
				rep.max_abs_deviation_num = (int64_t)dev;
			if (test.outside(deg[l]))
				rep.violators.push_back(l);
		}
	}
	return rep;
}

} // namespace ksat
