#include "ksat/cover.hpp"

#include "ksat/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace ksat;

namespace {

Formula triangle()
{
	Formula f;
	f.n_vars = 3;
	f.k = 3;
	f.clauses = {{Lit(1, false), Lit(2, false), Lit(3, false)}};
	return f;
}

CoverMap make_map(std::initializer_list<CVal> vals)
{
	CoverMap z;
	z.values = vals;
	return z;
}

constexpr CVal V0 = CVal::Zero, V1 = CVal::One, VS = CVal::Star;

// definition-level checker written independently of is_cover: CV1, CV2 for
// occurring literals, and stars on absent variables
bool cv_definition(const Formula &f, const CoverMap &z)
{
	// CV1
	for (auto &c : f.clauses)
	{
		int ones = 0, stars = 0;
		for (auto l : c)
		{
			if (z.at(l) == CVal::One)
				++ones;
			if (z.at(l) == CVal::Star)
				++stars;
		}
		if (!(ones >= 1 || stars >= 2))
			return false;
	}
	// CV2
	for (int var = 1; var <= f.n_vars; ++var)
		for (bool neg : {false, true})
		{
			Lit l(var, neg);
			if (z.at(l) != CVal::One)
				continue;
			bool occurs = false, witnessed = false;
			for (auto &c : f.clauses)
				for (size_t j = 0; j < c.size() && !witnessed; ++j)
				{
					if (!(c[j] == l))
						continue;
					occurs = true;
					bool others_zero = true;
					for (size_t j2 = 0; j2 < c.size(); ++j2)
						if (j2 != j && z.at(c[j2]) != CVal::Zero)
							others_zero = false;
					if (others_zero)
						witnessed = true;
				}
			if (occurs && !witnessed)
				return false;
		}
	// a variable out of the formula cannot be frozen
	for (int var = 1; var <= f.n_vars; ++var)
	{
		if (z.values[var - 1] == CVal::Star)
			continue;
		bool occurs = false;
		for (auto &c : f.clauses)
			for (auto l : c)
				if (l.var == var)
					occurs = true;
		if (!occurs)
			return false;
	}
	return true;
}

} // namespace

TEST_CASE("is_cover on the single triangle clause")
{
	Formula f = triangle();
	CHECK(is_cover(f, make_map({V1, V0, V0})).ok);
	CHECK(!is_cover(f, make_map({V1, VS, V0})).ok); // CV2 fails for x1
	CHECK(is_cover(f, make_map({VS, VS, VS})).ok);
	CHECK(!is_cover(f, make_map({V1, V1, V0})).ok); // no critical clause
	CHECK(!is_cover(f, make_map({V0, V0, V0})).ok); // CV1 fails
}

TEST_CASE("the triangle clause has exactly the seven covers")
{
	auto covers = enumerate_covers(triangle());
	std::set<std::string> got;
	for (auto &z : covers)
		got.insert(z.str());
	std::set<std::string> want = {"100", "010", "001", "**0", "*0*", "0**", "***"};
	CHECK(got == want);
}

TEST_CASE("two opposing clauses forbid every frozen value")
{
	// (x1 v x2 v x3) & (~x1 v ~x2 v ~x3): freezing any variable needs a
	// critical clause on both sides at once, so only all-star survives
	Formula f = triangle();
	f.clauses.push_back({Lit(1, true), Lit(2, true), Lit(3, true)});
	auto covers = enumerate_covers(f);
	REQUIRE(covers.size() == 1);
	CHECK(covers[0].str() == "***");
}

TEST_CASE("one-sided variables may still take the value 0")
{
	// (x1 v x2 v x3) & (~x1 v x2 v x3): x2, x3 never occur negated, so their
	// 0-values bind nothing; x1 can never be frozen (its critical clause
	// would need the other slots at 0, killing CV1 in the sibling clause)
	Formula f = triangle();
	f.clauses.push_back({Lit(1, true), Lit(2, false), Lit(3, false)});
	auto covers = enumerate_covers(f);
	std::set<std::string> got;
	for (auto &z : covers)
		got.insert(z.str());
	CHECK(got == std::set<std::string>{"**0", "*0*", "***"});
}

TEST_CASE("empty formula has exactly the all-star cover")
{
	Formula f;
	f.n_vars = 4;
	f.k = 3;
	auto covers = enumerate_covers(f);
	REQUIRE(covers.size() == 1);
	CHECK(covers[0].str() == "****");
}

TEST_CASE("is_cover matches the definition on random desk instances")
{
	Rng rng(42);
	for (int inst = 0; inst < 60; ++inst)
	{
		int n = 2 + (int)rng.below(4);
		int m = 1 + (int)rng.below(5);
		Formula f = gen_uniform(3, n, m, rng.next());
		uint64_t total = 1;
		for (int i = 0; i < n; ++i)
			total *= 3;
		for (uint64_t idx = 0; idx < total; ++idx)
		{
			CoverMap z;
			uint64_t x = idx;
			for (int v = 0; v < n; ++v)
			{
				z.values.push_back((CVal)(x % 3));
				x /= 3;
			}
			CHECK(is_cover(f, z).ok == cv_definition(f, z));
		}
	}
}

TEST_CASE("critical clauses")
{
	Formula f = triangle();
	CHECK(critical_clauses(f, make_map({V1, V0, V0})) == std::vector<int>{0});
	CHECK(critical_clauses(f, make_map({VS, VS, VS})).empty());
	CHECK(critical_clauses(f, make_map({V1, V1, V0})).empty());
}

TEST_CASE("shade from cover and back")
{
	Formula f = triangle();
	CoverMap z = make_map({V1, V0, V0});
	Shade s = shade_from_cover(f, z);
	CHECK(s.colors[0][0] == Color::R);
	CHECK(s.colors[0][1] == Color::Y);
	CHECK(s.colors[0][2] == Color::Y);
	CHECK(is_valid_shade(f, s).ok);
	CHECK(cover_from_shade(f, s) == z);

	Shade sg = shade_from_cover(f, make_map({VS, VS, VS}));
	for (auto c : sg.colors[0])
		CHECK(c == Color::G);
	CHECK(is_valid_shade(f, sg).ok);

	CHECK_THROWS_AS(shade_from_cover(f, make_map({V1, V1, V0})),
	                std::invalid_argument);
}

TEST_CASE("invalid shades are rejected")
{
	Formula f = triangle();
	// all-blue literal violates SD2 (and V2)
	Shade s;
	s.colors = {{Color::B, Color::Y, Color::Y}};
	CHECK(!is_valid_shade(f, s).ok);

	// green next to red violates V1
	Shade t;
	t.colors = {{Color::R, Color::G, Color::Y}};
	CHECK(!is_valid_shade(f, t).ok);
}

TEST_CASE("shade bijection on random desk instances")
{
	Rng rng(4242);
	for (int inst = 0; inst < 40; ++inst)
	{
		int n = 2 + (int)rng.below(4); // up to 5 vars
		int m = 1 + (int)rng.below(4);
		Formula f = gen_uniform(3, n, m, rng.next());
		auto covers = enumerate_covers(f);
		auto shades = enumerate_valid_shades(f);
		CHECK(covers.size() == shades.size());

		std::set<std::string> cover_set;
		for (auto &z : covers)
			cover_set.insert(z.str());
		for (auto &s : shades)
		{
			CoverMap z = cover_from_shade(f, s);
			CHECK(cover_set.count(z.str()) == 1);
			CHECK(shade_from_cover(f, z) == s);
		}
		for (auto &z : covers)
		{
			Shade s = shade_from_cover(f, z);
			CHECK(is_valid_shade(f, s).ok);
			CHECK(cover_from_shade(f, s) == z);
		}
	}
}

TEST_CASE("satisfying assignments, CV1, and the critical-clause corollary")
{
	Rng rng(7);
	for (int inst = 0; inst < 30; ++inst)
	{
		int n = 2 + (int)rng.below(3);
		Formula f = gen_uniform(3, n, 1 + rng.below(4), rng.next());
		for (uint64_t a = 0; a < (1ull << n); ++a)
		{
			CoverMap z;
			for (int v = 0; v < n; ++v)
				z.values.push_back((a >> v) & 1 ? V1 : V0);
			bool sat = true;
			for (auto &c : f.clauses)
			{
				bool cs = false;
				for (auto l : c)
					if (z.at(l) == V1)
						cs = true;
				sat = sat && cs;
			}
			if (!sat)
				continue;
			// CV1 holds for every satisfying assignment read as a map; it
			// is a cover iff every occurring 1-literal sits in a critical
			// clause and no variable is absent from the formula
			auto verdict = is_cover(f, z);
			std::vector<bool> occ(2 * n, false);
			for (auto &c : f.clauses)
				for (auto l : c)
					occ[l.code()] = true;
			bool all_frozen = true;
			std::vector<int> crit = critical_clauses(f, z);
			for (int var = 1; var <= n && all_frozen; ++var)
			{
				if (!occ[Lit(var, false).code()] && !occ[Lit(var, true).code()])
				{
					all_frozen = false; // 0/1 on an absent variable
					break;
				}
				Lit tl(var, z.values[var - 1] == V0);
				if (!occ[tl.code()])
					continue; // absent true literal binds nothing
				bool in_crit = false;
				for (int ci : crit)
					for (size_t j = 0; j < f.clauses[ci].size(); ++j)
						if (f.clauses[ci][j] == tl &&
						    z.at(f.clauses[ci][j]) == V1)
							in_crit = true;
				if (!in_crit)
					all_frozen = false;
			}
			CHECK(verdict.ok == all_frozen);
		}
	}
}

TEST_CASE("overlap matrix identities")
{
	CoverMap z1 = make_map({V1, V0, VS, V1});
	OverlapMatrix same = overlap(z1, z1);
	CHECK(same.delta == doctest::Approx(0.0));

	CoverMap z2 = make_map({V0, V1, VS, V0}); // complement on non-stars
	// complement with no stars at all:
	CoverMap a = make_map({V1, V0, V1});
	CoverMap b = make_map({V0, V1, V0});
	OverlapMatrix o = overlap(a, b);
	CHECK(o.entries[0][1] == doctest::Approx(0.5));
	CHECK(o.entries[1][0] == doctest::Approx(0.5));
	CHECK(o.delta == doctest::Approx(1.0));

	// all-star against all-zero-on-the-positive-side: over literals the
	// second map takes value 0 on x and 1 on ~x, half each
	CoverMap stars = make_map({VS, VS});
	CoverMap zeros = make_map({V0, V0});
	OverlapMatrix s = overlap(stars, zeros);
	CHECK(s.entries[2][0] == doctest::Approx(0.5));
	CHECK(s.entries[2][1] == doctest::Approx(0.5));
	CHECK(s.entries[2][2] == doctest::Approx(0.0));

	// symmetry: O(z1,z2) is the transpose of O(z2,z1)
	OverlapMatrix ab = overlap(z1, z2), ba = overlap(z2, z1);
	for (int i = 0; i < 3; ++i)
		for (int j = 0; j < 3; ++j)
			CHECK(ab.entries[i][j] == doctest::Approx(ba.entries[j][i]));
}

TEST_CASE("exhaustive counters")
{
	Formula f = triangle();
	CHECK(count_sat(f) == 7);
	CHECK(count_nae(f) == 6);
	CHECK(count_balanced(f, 0.5) == count_sat(f));

	Formula contra;
	contra.n_vars = 1;
	contra.k = 1;
	contra.clauses = {{Lit(1, false)}, {Lit(1, true)}};
	CHECK(count_sat(contra) == 0);

	Formula empty;
	empty.n_vars = 2;
	CHECK(count_sat(empty) == 4);

	// parity of the NAE count on a random suite
	Rng rng(99);
	for (int i = 0; i < 20; ++i)
	{
		Formula g = gen_uniform(3, 2 + (int)rng.below(5), 1 + rng.below(6),
		                        rng.next());
		CHECK(count_nae(g) % 2 == 0);
	}
}

TEST_CASE("enumeration cap is enforced")
{
	Formula f;
	f.n_vars = 20;
	f.k = 3;
	CHECK_THROWS_AS(enumerate_covers(f, 16), std::invalid_argument);
	CHECK_THROWS_AS(count_sat(f, 10), std::invalid_argument);
}
