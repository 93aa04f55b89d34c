#include "ksat/formula.hpp"

#include <algorithm>
#include <cassert>

namespace ksat {

void Formula::check_valid() const
{
	for (auto &c : clauses)
	{
		if (c.empty())
			throw std::invalid_argument("empty clause");
		for (auto l : c)
			if (l.var < 1 || l.var > n_vars)
				throw std::invalid_argument("literal out of range");
	}
}

DegreeProfile degree_profile(const Formula &f)
{
	DegreeProfile p(f.n_vars);
	for (auto &c : f.clauses)
		for (auto l : c)
			++p[l];
	return p;
}

Formula gen_uniform(int k, int n_vars, int64_t m_clauses, uint64_t seed)
{
	if (k < 2)
		throw std::invalid_argument("gen_uniform: k must be >= 2");
	if (n_vars < 1)
		throw std::invalid_argument("gen_uniform: n_vars must be >= 1");
	if (m_clauses < 0)
		throw std::invalid_argument("gen_uniform: m_clauses must be >= 0");

	Rng rng(seed);
	Formula f;
	f.n_vars = n_vars;
	f.k = k;
	f.clauses.resize(m_clauses);
	for (auto &c : f.clauses)
	{
		c.resize(k);
		for (auto &l : c)
			l = Lit::from_code((int)rng.below(2 * (uint64_t)n_vars));
	}
	return f;
}

Formula gen_configuration(const DegreeProfile &profile,
                          const std::vector<int> &clause_lengths, uint64_t seed)
{
	int64_t slots = 0;
	for (int len : clause_lengths)
	{
		if (len < 1)
			throw std::invalid_argument("gen_configuration: clause length < 1");
		slots += len;
	}
	if (profile.total() != slots)
		throw std::invalid_argument("gen_configuration: clone/slot count mismatch");

	std::vector<int> clones;
	clones.reserve(slots);
	for (int c = 0; c < (int)profile.d.size(); ++c)
		for (int64_t j = 0; j < profile.d[c]; ++j)
			clones.push_back(c);

	Rng rng(seed);
	rng.shuffle(clones);

	Formula f;
	f.n_vars = profile.n_vars();
	f.k = clause_lengths.empty()
	          ? 0
	          : *std::max_element(clause_lengths.begin(), clause_lengths.end());
	f.clauses.resize(clause_lengths.size());
	size_t pos = 0;
	for (size_t i = 0; i < clause_lengths.size(); ++i)
	{
		f.clauses[i].resize(clause_lengths[i]);
		for (auto &l : f.clauses[i])
			l = Lit::from_code(clones[pos++]);
	}
	return f;
}

Formula gen_regular(int k, int d, int n_vars, uint64_t seed)
{
	if (k < 2 || d < 1 || n_vars < 1)
		throw std::invalid_argument("gen_regular: bad parameters");
	int64_t clones = 2 * (int64_t)n_vars * d;
	if (clones % k != 0)
		throw std::invalid_argument("gen_regular: 2*n_vars*d not divisible by k");

	DegreeProfile p(n_vars);
	for (auto &x : p.d)
		x = d;
	std::vector<int> lengths(clones / k, k);
	Formula f = gen_configuration(p, lengths, seed);
	f.k = k;
	return f;
}

MajorityVote majority_vote(const Formula &f, uint64_t seed)
{
	DegreeProfile p = degree_profile(f);
	Rng rng(seed);
	MajorityVote mv;
	mv.assignment.resize(f.n_vars);
	int64_t max_sum = 0;
	for (int v = 1; v <= f.n_vars; ++v)
	{
		int64_t dpos = p[Lit(v, false)], dneg = p[Lit(v, true)];
		if (dpos > dneg)
			mv.assignment[v - 1] = 1;
		else if (dpos < dneg)
			mv.assignment[v - 1] = 0;
		else
			mv.assignment[v - 1] = rng.coin() ? 1 : 0;
		max_sum += std::max(dpos, dneg);
	}
	int64_t clones = p.total();
	if (clones == 0)
	{
		mv.degenerate = true;
		mv.w_maj = 0;
	}
	else
		mv.w_maj = (double)max_sum / (double)clones;
	return mv;
}

} // namespace ksat
