#include "ksat/twosat.hpp"

#include "ksat/rng.hpp"
#include "ksat/solver.hpp"

#include <doctest.h>

#include <set>

using namespace ksat;

namespace {

constexpr CVal V0 = CVal::Zero, V1 = CVal::One, VS = CVal::Star;

TwoSatInstance make2(int n, std::initializer_list<std::pair<int, int>> cls)
{
	TwoSatInstance t;
	t.n_vars = n;
	for (auto [a, b] : cls)
		t.clauses.push_back({Lit::from_dimacs(a), Lit::from_dimacs(b)});
	return t;
}

bool brute_2sat(const TwoSatInstance &t)
{
	for (uint64_t a = 0; a < (1ull << t.n_vars); ++a)
	{
		bool ok = true;
		for (auto &[x, y] : t.clauses)
		{
			auto val = [&](Lit l) { return (((a >> (l.var - 1)) & 1) != 0) != l.neg; };
			if (!val(x) && !val(y))
			{
				ok = false;
				break;
			}
		}
		if (ok)
			return true;
	}
	return false;
}

} // namespace

TEST_CASE("solve_2sat basics")
{
	auto sat = solve_2sat(make2(2, {{1, 2}, {-1, 2}}));
	REQUIRE(sat.has_value());
	CHECK((*sat)[1] == 1); // x2 forced true

	CHECK(!solve_2sat(make2(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}})));

	auto empty = solve_2sat(make2(3, {}));
	REQUIRE(empty.has_value());
	CHECK(empty->size() == 3);
}

TEST_CASE("solve_2sat agrees with brute force on random instances")
{
	Rng rng(8);
	for (int i = 0; i < 3000; ++i)
	{
		int n = 1 + (int)rng.below(4);
		int m = (int)rng.below(9);
		TwoSatInstance t;
		t.n_vars = n;
		for (int c = 0; c < m; ++c)
			t.clauses.push_back({Lit(1 + (int)rng.below(n), rng.coin()),
			                     Lit(1 + (int)rng.below(n), rng.coin())});
		CHECK(solve_2sat(t).has_value() == brute_2sat(t));
	}
}

TEST_CASE("bicycles witness unsatisfiability")
{
	auto t = make2(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
	auto bikes = find_bicycles(t, 6);
	CHECK(!bikes.empty());
	// BC1-BC3 hold for everything reported
	for (auto &b : bikes)
	{
		REQUIRE(b.lits.size() >= 3);
		for (size_t i = 0; i + 1 < b.lits.size(); ++i)
		{
			bool found = false;
			for (auto &[x, y] : t.clauses)
			{
				Lit u = ~b.lits[i], v = b.lits[i + 1];
				if ((x == u && y == v) || (x == v && y == u))
					found = true;
			}
			CHECK(found);
		}
		std::set<int> mid;
		for (size_t i = 1; i + 1 < b.lits.size(); ++i)
			mid.insert(b.lits[i].var);
		CHECK(mid.size() == b.lits.size() - 2);
		CHECK(mid.count(b.lits.front().var) == 1);
		CHECK(mid.count(b.lits.back().var) == 1);
	}

	CHECK(find_bicycles(make2(2, {{1, 2}}), 6).empty());
}

TEST_CASE("unsat instances always contain a bicycle within 2n")
{
	Rng rng(77);
	int unsat_seen = 0;
	for (int i = 0; i < 400; ++i)
	{
		int n = 2 + (int)rng.below(4); // up to 5 variables
		TwoSatInstance t;
		t.n_vars = n;
		int m = 2 + (int)rng.below(12);
		for (int c = 0; c < m; ++c)
			t.clauses.push_back({Lit(1 + (int)rng.below(n), rng.coin()),
			                     Lit(1 + (int)rng.below(n), rng.coin())});
		if (solve_2sat(t))
			continue;
		++unsat_seen;
		CHECK(!find_bicycles(t, 2 * n).empty());
	}
	CHECK(unsat_seen > 10);
}

TEST_CASE("reduce_to_2sat keeps the first two green clones")
{
	Formula f;
	f.n_vars = 3;
	f.k = 3;
	f.clauses = {{Lit(1, false), Lit(2, false), Lit(3, false)}};
	CoverMap z;
	z.values = {VS, VS, VS};
	Shade s = shade_from_cover(f, z);
	TwoSatInstance t = reduce_to_2sat(f, s);
	REQUIRE(t.clauses.size() == 1);
	CHECK(t.clauses[0].first == Lit(1, false));
	CHECK(t.clauses[0].second == Lit(2, false));

	// clause with a blue/red clone is dropped
	CoverMap z2;
	z2.values = {V1, V0, V0};
	TwoSatInstance t2 = reduce_to_2sat(f, shade_from_cover(f, z2));
	CHECK(t2.clauses.empty());
}

TEST_CASE("extend_cover on star-free and all-star covers")
{
	Formula f;
	f.n_vars = 3;
	f.k = 3;
	f.clauses = {{Lit(1, false), Lit(2, false), Lit(3, false)}};
	CoverMap z;
	z.values = {V1, V0, V0};
	auto r = extend_cover(f, z);
	REQUIRE(r.extendible);
	CHECK(r.assignment == std::vector<uint8_t>{1, 0, 0});

	CoverMap zs;
	zs.values = {VS, VS, VS};
	auto rs = extend_cover(f, zs);
	REQUIRE(rs.extendible);
	CHECK(assignment_satisfies(f, rs.assignment));

	CoverMap bad;
	bad.values = {V1, V1, V0};
	CHECK_THROWS_AS(extend_cover(f, bad), std::invalid_argument);
}

TEST_CASE("extend_cover against the brute-force agreement oracle")
{
	// The two-green reduction can miss completions that use a third green
	// clone of a clause, so NotExtendible with an existing agreeing
	// assignment is recorded, never the other way around.
	Rng rng(31337);
	int cover_count = 0, incomplete = 0;
	for (int inst = 0; inst < 120; ++inst)
	{
		int n = 3 + (int)rng.below(5);
		Formula f = gen_uniform(3, n, 2 + rng.below(2 * (uint64_t)n), rng.next());
		auto covers = enumerate_covers(f);
		auto sats = brute_force_sat(f);
		for (auto &z : covers)
		{
			++cover_count;
			auto r = extend_cover(f, z);
			bool brute = false;
			for (auto &a : sats)
			{
				bool agree = true;
				for (int v = 0; v < n; ++v)
				{
					if (z.values[v] == V1 && a[v] != 1)
						agree = false;
					if (z.values[v] == V0 && a[v] != 0)
						agree = false;
				}
				if (agree)
				{
					brute = true;
					break;
				}
			}
			if (r.extendible)
			{
				// soundness is unconditional
				CHECK(brute);
				CHECK(assignment_satisfies(f, r.assignment));
			}
			else if (brute)
				++incomplete;
		}
	}
	CHECK(cover_count > 100);
	MESSAGE("two-green reduction incompleteness cases: ", incomplete, " of ",
	        cover_count);
	// star-free covers are never affected
	Rng rng2(99);
	for (int inst = 0; inst < 40; ++inst)
	{
		int n = 3 + (int)rng2.below(5);
		Formula f = gen_uniform(3, n, 2 + rng2.below(2 * (uint64_t)n), rng2.next());
		for (auto &z : enumerate_covers(f))
		{
			bool stars = false;
			for (auto v : z.values)
				if (v == VS)
					stars = true;
			if (!stars)
				CHECK(extend_cover(f, z).extendible);
		}
	}
}
