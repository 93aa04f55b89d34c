#include "ksat/formula.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace ksat;

TEST_CASE("uniform generator shape and determinism")
{
	Formula f = gen_uniform(3, 5, 2, 1);
	CHECK(f.clauses.size() == 2);
	CHECK(f.n_clones() == 6);
	for (auto &c : f.clauses)
		for (auto l : c)
		{
			CHECK(l.var >= 1);
			CHECK(l.var <= 5);
		}
	Formula g = gen_uniform(3, 5, 2, 1);
	CHECK(write_dimacs(f) == write_dimacs(g));
	Formula h = gen_uniform(3, 5, 2, 2);
	CHECK(write_dimacs(f) != write_dimacs(h));
}

TEST_CASE("uniform generator over a single variable")
{
	Formula f = gen_uniform(3, 1, 1, 7);
	for (auto l : f.clauses[0])
		CHECK(l.var == 1);
}

TEST_CASE("uniform generator rejects bad parameters")
{
	CHECK_THROWS_AS(gen_uniform(1, 5, 2, 1), std::invalid_argument);
	CHECK_THROWS_AS(gen_uniform(3, 0, 2, 1), std::invalid_argument);
}

TEST_CASE("degree profile counts occurrences")
{
	Formula f;
	f.n_vars = 2;
	f.k = 3;
	f.clauses = {{Lit(1, false), Lit(1, false), Lit(2, false)}};
	DegreeProfile p = degree_profile(f);
	CHECK(p[Lit(1, false)] == 2);
	CHECK(p[Lit(2, false)] == 1);
	CHECK(p[Lit(1, true)] == 0);
	CHECK(p[Lit(2, true)] == 0);

	Formula empty;
	empty.n_vars = 3;
	CHECK(degree_profile(empty).total() == 0);

	Formula big = gen_uniform(3, 100, 50, 11);
	CHECK(degree_profile(big).total() == 150);
}

TEST_CASE("configuration model realizes profile and lengths")
{
	DegreeProfile p(3);
	p[Lit(1, false)] = 1;
	p[Lit(2, false)] = 1;
	p[Lit(3, false)] = 1;
	Formula f = gen_configuration(p, {3}, 5);
	REQUIRE(f.clauses.size() == 1);
	std::vector<int> vars;
	for (auto l : f.clauses[0])
	{
		CHECK(!l.neg);
		vars.push_back(l.var);
	}
	std::sort(vars.begin(), vars.end());
	CHECK(vars == std::vector<int>{1, 2, 3});

	Formula base = gen_uniform(4, 12, 9, 3);
	DegreeProfile bp = degree_profile(base);
	std::vector<int> lens(base.clauses.size(), 4);
	Formula re = gen_configuration(bp, lens, 17);
	DegreeProfile rp = degree_profile(re);
	CHECK(rp.d == bp.d);

	CHECK_THROWS_AS(gen_configuration(p, {2}, 5), std::invalid_argument);
}

TEST_CASE("configuration model hits slot arrangements uniformly")
{
	// 4 distinct clones into 2 clauses of width 2: 4! = 24 ordered placements
	DegreeProfile p(2);
	p[Lit(1, false)] = 1;
	p[Lit(1, true)] = 1;
	p[Lit(2, false)] = 1;
	p[Lit(2, true)] = 1;
	std::map<std::string, int> counts;
	const int trials = 12000;
	for (int t = 0; t < trials; ++t)
	{
		Formula f = gen_configuration(p, {2, 2}, 1000 + t);
		counts[write_dimacs(f)]++;
	}
	CHECK(counts.size() == 24);
	double mean = trials / 24.0;
	double sd = std::sqrt(trials * (1.0 / 24) * (23.0 / 24));
	for (auto &[key, c] : counts)
		CHECK(std::abs(c - mean) < 5 * sd);
}

TEST_CASE("regular generator forces degrees")
{
	Formula f = gen_regular(3, 3, 2, 9);
	CHECK(f.clauses.size() == 4);
	DegreeProfile p = degree_profile(f);
	for (auto d : p.d)
		CHECK(d == 3);
	CHECK_THROWS_AS(gen_regular(3, 2, 2, 9), std::invalid_argument);

	Formula g = gen_regular(4, 6, 10, 33);
	DegreeProfile q = degree_profile(g);
	for (auto d : q.d)
		CHECK(d == 6);
}

TEST_CASE("majority vote")
{
	Formula f;
	f.n_vars = 2;
	f.k = 3;
	f.clauses = {{Lit(1, false), Lit(1, false), Lit(2, false)}};
	MajorityVote mv = majority_vote(f, 1);
	CHECK(mv.assignment[0] == 1);
	CHECK(mv.assignment[1] == 1);
	CHECK(mv.w_maj == doctest::Approx(1.0));
	CHECK(!mv.degenerate);

	Formula g;
	g.n_vars = 2;
	g.k = 3;
	g.clauses = {{Lit(1, false), Lit(1, true), Lit(2, false)}};
	MajorityVote mw = majority_vote(g, 1);
	CHECK(mw.w_maj == doctest::Approx(2.0 / 3));
	CHECK(majority_vote(g, 7).assignment == majority_vote(g, 7).assignment);

	Formula empty;
	empty.n_vars = 3;
	MajorityVote me = majority_vote(empty, 1);
	CHECK(me.degenerate);
	CHECK(me.w_maj == 0);
}

TEST_CASE("dimacs roundtrip and errors")
{
	Formula f = read_dimacs("p cnf 2 1\n1 -2 0\n");
	REQUIRE(f.clauses.size() == 1);
	CHECK(f.n_vars == 2);
	CHECK(f.clauses[0][0] == Lit(1, false));
	CHECK(f.clauses[0][1] == Lit(2, true));
	CHECK(read_dimacs(write_dimacs(f)).clauses == f.clauses);

	CHECK_THROWS_AS(read_dimacs("p cnf 1 1\n3 0\n"), ParseError);
	CHECK_THROWS_AS(read_dimacs("p dnf 1 1\n1 0\n"), ParseError);
	CHECK_THROWS_AS(read_dimacs("p cnf 2 1\n1 -2\n"), ParseError);
	CHECK_THROWS_AS(read_dimacs("1 0\n"), ParseError);

	Formula g = read_dimacs("c hello\np cnf 1 1\nc mid\n1 0\n");
	CHECK(g.clauses.size() == 1);

	Formula u = gen_uniform(3, 20, 40, 5);
	CHECK(read_dimacs(write_dimacs(u)).clauses == u.clauses);
}
