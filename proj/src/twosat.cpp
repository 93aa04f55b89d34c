#include "ksat/twosat.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ksat {

TwoSatInstance reduce_to_2sat(const Formula &f, const Shade &s)
{
	if (!is_valid_shade(f, s).ok)
		throw std::invalid_argument("reduce_to_2sat: shade is not valid");
	TwoSatInstance t;
	t.n_vars = f.n_vars;
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		bool has_rb = false;
		for (auto c : s.colors[i])
			if (c == Color::R || c == Color::B)
				has_rb = true;
		if (has_rb)
			continue;
		std::vector<Lit> greens;
		for (size_t j = 0; j < s.colors[i].size(); ++j)
			if (s.colors[i][j] == Color::G)
				greens.push_back(f.clauses[i][j]);
		if (greens.size() < 2)
			throw std::logic_error("reduce_to_2sat: survivor with < 2 green clones");
		t.clauses.push_back({greens[0], greens[1]});
	}
	return t;
}

namespace {

// iterative Tarjan on the implication graph (2 nodes per variable)
struct Scc {
	const std::vector<std::vector<int>> &adj;
	std::vector<int> comp, low, num, stk;
	std::vector<bool> on_stack;
	int counter = 0, n_comps = 0;

	explicit Scc(const std::vector<std::vector<int>> &a)
	    : adj(a), comp(a.size(), -1), low(a.size()), num(a.size(), -1),
	      on_stack(a.size(), false)
	{
		for (int v = 0; v < (int)a.size(); ++v)
			if (num[v] < 0)
				run(v);
	}

	void run(int root)
	{
		// explicit stack of (node, next edge index)
		std::vector<std::pair<int, size_t>> call;
		call.push_back({root, 0});
		while (!call.empty())
		{
			auto &[v, ei] = call.back();
			if (ei == 0)
			{
				num[v] = low[v] = counter++;
				stk.push_back(v);
				on_stack[v] = true;
			}
			bool descended = false;
			while (ei < adj[v].size())
			{
				int w = adj[v][ei++];
				if (num[w] < 0)
				{
					call.push_back({w, 0});
					descended = true;
					break;
				}
				if (on_stack[w])
					low[v] = std::min(low[v], num[w]);
			}
			if (descended)
				continue;
			if (low[v] == num[v])
			{
				for (;;)
				{
					int w = stk.back();
					stk.pop_back();
					on_stack[w] = false;
					comp[w] = n_comps;
					if (w == v)
						break;
				}
				++n_comps;
			}
			int child = v;
			call.pop_back();
			if (!call.empty())
				low[call.back().first] = std::min(low[call.back().first], low[child]);
		}
	}
};

} // namespace

std::optional<std::vector<uint8_t>> solve_2sat(const TwoSatInstance &t)
{
	int nodes = 2 * t.n_vars;
	std::vector<std::vector<int>> adj(nodes);
	for (auto &[a, b] : t.clauses)
	{
		adj[(~a).code()].push_back(b.code());
		adj[(~b).code()].push_back(a.code());
	}
	Scc scc(adj);
	std::vector<uint8_t> out(t.n_vars);
	for (int v = 1; v <= t.n_vars; ++v)
	{
		int cp = scc.comp[Lit(v, false).code()];
		int cn = scc.comp[Lit(v, true).code()];
		if (cp == cn)
			return std::nullopt;
		// Tarjan emits components in reverse topological order, so the
		// later literal in topological order is the one with the smaller id
		out[v - 1] = cp < cn ? 1 : 0;
	}
	// the contract is checked, not assumed
	for (auto &[a, b] : t.clauses)
	{
		auto val = [&](Lit l) { return (out[l.var - 1] != 0) != l.neg; };
		if (!val(a) && !val(b))
			throw std::logic_error("solve_2sat: produced assignment fails a clause");
	}
	return out;
}

std::vector<Bicycle> find_bicycles(const TwoSatInstance &t, int max_h)
{
	// implication edges a -> b exactly when the clause {~a, b} exists
	int nodes = 2 * t.n_vars;
	std::vector<std::vector<int>> adj(nodes);
	for (auto &[a, b] : t.clauses)
	{
		adj[(~a).code()].push_back(b.code());
		adj[(~b).code()].push_back(a.code());
	}
	for (auto &v : adj)
	{
		std::sort(v.begin(), v.end());
		v.erase(std::unique(v.begin(), v.end()), v.end());
	}

	std::vector<Bicycle> out;
	std::set<std::vector<int>> seen; // canonical rotations
	std::vector<int> path;           // literal codes l_0..l_cur
	std::vector<int> var_used(t.n_vars + 1, 0);

	auto canonical = [](const std::vector<int> &seq) {
		std::vector<int> best = seq;
		std::vector<int> rot = seq;
		for (size_t s = 1; s < seq.size(); ++s)
		{
			std::rotate(rot.begin(), rot.begin() + 1, rot.end());
			if (rot < best)
				best = rot;
		}
		return best;
	};

	std::function<void(int)> dfs = [&](int depth) {
		int cur = path.back();
		if (depth >= 2)
		{
			// try to close: current path is l_0..l_h, extend by l_{h+1}
			// whose variable reuses a middle variable
			for (int nxt : adj[cur])
			{
				int var = nxt / 2 + 1;
				if (!var_used[var])
					continue;
				// middle vars are path[1..h]; endpoint reuse is allowed for
				// l_0's variable too since BC3 constrains both ends
				std::vector<int> seq = path;
				seq.push_back(nxt);
				int h = (int)seq.size() - 2;
				if (h < 1 || h > max_h)
					continue;
				// BC3 for l_0
				int v0 = seq[0] / 2 + 1;
				bool v0_mid = false, vend_mid = false;
				for (int a = 1; a <= h; ++a)
				{
					if (seq[a] / 2 + 1 == v0)
						v0_mid = true;
					if (seq[a] / 2 + 1 == var)
						vend_mid = true;
				}
				if (!v0_mid || !vend_mid)
					continue;
				auto key = canonical(seq);
				if (seen.insert(key).second)
				{
					Bicycle b;
					for (int c : seq)
						b.lits.push_back(Lit::from_code(c));
					out.push_back(b);
				}
			}
		}
		if (depth > max_h)
			return;
		for (int nxt : adj[cur])
		{
			int var = nxt / 2 + 1;
			if (var_used[var])
				continue;
			var_used[var] = 1;
			path.push_back(nxt);
			dfs(depth + 1);
			path.pop_back();
			var_used[var] = 0;
		}
	};

	for (int start = 0; start < nodes; ++start)
	{
		path = {start};
		// l_0's variable is not a middle variable a priori
		dfs(1);
	}

	std::sort(out.begin(), out.end(), [](const Bicycle &a, const Bicycle &b) {
		if (a.lits.size() != b.lits.size())
			return a.lits.size() < b.lits.size();
		for (size_t i = 0; i < a.lits.size(); ++i)
			if (a.lits[i].code() != b.lits[i].code())
				return a.lits[i].code() < b.lits[i].code();
		return false;
	});
	return out;
}

ExtendResult extend_cover(const Formula &f, const CoverMap &z)
{
	auto verdict = is_cover(f, z);
	if (!verdict.ok)
		throw std::invalid_argument("extend_cover: map is not a cover");

	Shade s = shade_from_cover(f, z);
	TwoSatInstance t = reduce_to_2sat(f, s);
	auto sol = solve_2sat(t);
	if (!sol)
		return {};

	ExtendResult r;
	r.extendible = true;
	r.assignment.resize(f.n_vars);
	for (int v = 1; v <= f.n_vars; ++v)
	{
		CVal x = z.values[v - 1];
		if (x == CVal::Star)
			r.assignment[v - 1] = (*sol)[v - 1]; // free star variables come out 1
		else
			r.assignment[v - 1] = x == CVal::One ? 1 : 0;
	}
	// soundness is part of the contract
	for (auto &c : f.clauses)
	{
		bool sat = false;
		for (auto l : c)
			if ((r.assignment[l.var - 1] != 0) != l.neg)
			{
				sat = true;
				break;
			}
		if (!sat)
			throw std::logic_error("extend_cover: extension fails a clause");
	}
	return r;
}

std::string write_dimacs(const TwoSatInstance &t)
{
	std::ostringstream out;
	out << "p cnf " << t.n_vars << ' ' << t.clauses.size() << '\n';
	for (auto &[a, b] : t.clauses)
		out << a.to_dimacs() << ' ' << b.to_dimacs() << " 0\n";
	return out.str();
}

} // namespace ksat
