#include "ksat/pruning.hpp"

#include "ksat/rng.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ksat;

namespace {

Formula with_heavy_variable(int k, int n, int m, int heavy_extra, uint64_t seed)
{
	Formula f = gen_uniform(k, n, m, seed);
	Rng rng(seed ^ 0xabcdef);
	for (int i = 0; i < heavy_extra; ++i)
	{
		Clause c;
		c.push_back(Lit(1, false));
		for (int j = 1; j < k; ++j)
			c.push_back(Lit(2 + (int)rng.below(n - 1), rng.coin()));
		f.clauses.push_back(c);
	}
	return f;
}

// Two-round cascade at k = 4, n = 12, m = 3600 (kr/2 = 600, window 256):
//   round 1 deletes the 200 {x1,x2,x3,x4} clauses (x1,x2,x3 are PR1
//   outliers), which drops d_{x4} from 360 to 160 < 344, so x4 joins U;
//   round 2 then deletes the 60 {x1,x2,x4,f} clauses.
Formula cascade_formula()
{
	Formula f;
	f.n_vars = 12;
	f.k = 4;
	Rng rng(2024);
	auto filler = [&]() { return Lit(5 + (int)rng.below(8), rng.coin()); };
	auto add4 = [&](Lit a, Lit b, Lit c, Lit d) {
		f.clauses.push_back({a, b, c, d});
	};
	for (int i = 0; i < 200; ++i) // shared
		add4(Lit(1, false), Lit(2, false), Lit(3, false), Lit(4, false));
	for (int i = 0; i < 60; ++i) // mixed, dies in round 2
		add4(Lit(1, false), Lit(2, false), Lit(4, false), filler());
	for (int i = 0; i < 100; ++i) // safe mass for x4
		add4(Lit(4, false), filler(), filler(), filler());
	for (int i = 0; i < 360; ++i) // ballast keeps ~x4 inside the window
		add4(Lit(4, true), filler(), filler(), filler());
	for (int v = 1; v <= 3; ++v)
		for (int i = 0; i < 700; ++i) // heavy blocks: x1, x2, x3 PR1 outliers
			add4(Lit(v, false), filler(), filler(), filler());
	for (int i = 0; i < 780; ++i)
		add4(filler(), filler(), filler(), filler());
	return f;
}

} // namespace

TEST_CASE("pruning is the identity when every degree sits in the window")
{
	// k=3 window is 27 * 2^{1.5} ~ 76; desk-scale degrees never trigger PR1
	Formula f = gen_uniform(3, 30, 60, 4);
	auto [g, rep] = prune(f, 3, Density::of_formula(f));
	CHECK(rep.removed_vars.empty());
	CHECK(rep.removed_clause_ids.empty());
	CHECK(rep.rounds == 0);
	CHECK(write_dimacs(g) == write_dimacs(f));
}

TEST_CASE("a single heavy variable is removed and stripped, no clause deleted")
{
	Formula f = with_heavy_variable(3, 30, 60, 300, 7);
	Density r{(int64_t)f.clauses.size(), f.n_vars};
	auto [g, rep] = prune(f, 3, r);
	CHECK(rep.removed_vars.count(1) == 1);
	CHECK(rep.removed_clause_ids.empty()); // each clause has at most 1 U-var
	for (auto &c : g.clauses)
		for (auto l : c)
			CHECK(l.var != 1);
	CHECK(check_degree_bounds(g, 3, r).ok());
}

TEST_CASE("hand-simulated two-round cascade")
{
	Formula f = cascade_formula();
	REQUIRE(f.clauses.size() == 3600);
	Density r{3600, 12}; // kr/2 = 600 exactly
	auto [g, rep] = prune(f, 4, r);

	CHECK(rep.rounds == 2);
	CHECK(rep.removed_vars.count(1) == 1);
	CHECK(rep.removed_vars.count(2) == 1);
	CHECK(rep.removed_vars.count(3) == 1);
	CHECK(rep.removed_vars.count(4) == 1);
	CHECK(rep.removed_vars.size() == 4);
	// 200 shared + 60 mixed clauses die
	CHECK(rep.removed_clause_ids.size() == 260);
	CHECK(check_degree_bounds(g, 4, r).ok());
	// stripped survivors keep width within {k-2, k-1, k}
	for (auto &c : g.clauses)
	{
		CHECK((int)c.size() >= 2);
		CHECK((int)c.size() <= 4);
	}
}

TEST_CASE("prune result is invariant under clause permutation")
{
	Formula f = cascade_formula();
	Density r{3600, 12};
	auto [g1, rep1] = prune(f, 4, r);

	Formula rev = f;
	std::reverse(rev.clauses.begin(), rev.clauses.end());
	auto [g2, rep2] = prune(rev, 4, r);
	CHECK(rep1.removed_vars == rep2.removed_vars);
	CHECK(rep1.rounds == rep2.rounds);
	CHECK(rep1.removed_clause_ids.size() == rep2.removed_clause_ids.size());
}

TEST_CASE("check_degree_bounds flags heavy tails and passes empty input")
{
	Formula f = with_heavy_variable(3, 20, 40, 300, 31);
	Density r{(int64_t)f.clauses.size(), f.n_vars};
	CHECK(!check_degree_bounds(f, 3, r).ok());

	Formula empty;
	empty.n_vars = 5;
	empty.k = 3;
	CHECK(check_degree_bounds(empty, 3, Density{1, 1}).ok());
}

TEST_CASE("widths histogram covers exactly the surviving clauses")
{
	Formula f = with_heavy_variable(4, 25, 80, 350, 77);
	Density r{(int64_t)f.clauses.size(), f.n_vars};
	auto [g, rep] = prune(f, 4, r);
	int total = 0;
	for (auto &[w, c] : rep.widths_histogram)
	{
		CHECK(w >= 2);
		CHECK(w <= 4);
		total += c;
	}
	CHECK(total == (int)g.clauses.size());
	CHECK(rep.kept_clauses == (int)g.clauses.size());
	CHECK(rep.kept_vars == f.n_vars - (int)rep.removed_vars.size());
}

TEST_CASE("recompute-target mode is reported")
{
	Formula f = with_heavy_variable(3, 30, 60, 300, 7);
	Density r{(int64_t)f.clauses.size(), f.n_vars};
	PruneOptions opt;
	opt.recompute_target = true;
	auto [g, rep] = prune(f, 3, r, opt);
	CHECK(rep.recompute_target);
}
