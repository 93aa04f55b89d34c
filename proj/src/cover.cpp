#include "ksat/cover.hpp"

#include <algorithm>
#include <stdexcept>

namespace ksat {

CoverVerdict is_cover(const Formula &f, const CoverMap &z)
{
	if ((int)z.values.size() != f.n_vars)
		throw std::invalid_argument("is_cover: map does not cover all variables");
	CoverVerdict v;

	// CV1
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		int ones = 0, stars = 0;
		for (auto l : f.clauses[i])
		{
			CVal x = z.at(l);
			if (x == CVal::One)
				++ones;
			else if (x == CVal::Star)
				++stars;
		}
		if (ones == 0 && stars < 2)
		{
			v.ok = false;
			v.violations.push_back("CV1: clause " + std::to_string(i + 1) +
			                       " has no 1-literal and fewer than two *-slots");
		}
	}

	// CV2: every occurring 1-literal needs a clause whose other slots are
	// all 0. A literal with no occurrence cannot be frozen by a clause, so
	// the condition binds exactly the literals that appear; a variable with
	// no occurrence on either side must stay unfrozen (value *), matching
	// the shade correspondence.
	std::vector<bool> frozen(2 * (size_t)f.n_vars, false);
	std::vector<bool> occurs(2 * (size_t)f.n_vars, false);
	for (auto &c : f.clauses)
		for (size_t j = 0; j < c.size(); ++j)
		{
			occurs[c[j].code()] = true;
			if (z.at(c[j]) != CVal::One)
				continue;
			bool others_zero = true;
			for (size_t j2 = 0; j2 < c.size(); ++j2)
				if (j2 != j && z.at(c[j2]) != CVal::Zero)
				{
					others_zero = false;
					break;
				}
			if (others_zero)
				frozen[c[j].code()] = true;
		}
	for (int code = 0; code < 2 * f.n_vars; ++code)
	{
		Lit l = Lit::from_code(code);
		if (occurs[code] && z.at(l) == CVal::One && !frozen[code])
		{
			v.ok = false;
			v.violations.push_back("CV2: literal " + std::to_string(l.to_dimacs()) +
			                       " is 1 but occurs in no critical clause");
		}
	}
	for (int var = 1; var <= f.n_vars; ++var)
		if (!occurs[Lit(var, false).code()] && !occurs[Lit(var, true).code()] &&
		    z.values[var - 1] != CVal::Star)
		{
			v.ok = false;
			v.violations.push_back("CV2: variable " + std::to_string(var) +
			                       " has no occurrence and cannot be frozen");
		}
	return v;
}

std::vector<int> critical_clauses(const Formula &f, const CoverMap &z)
{
	std::vector<int> out;
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		int ones = 0;
		bool rest_zero = true;
		for (auto l : f.clauses[i])
		{
			CVal x = z.at(l);
			if (x == CVal::One)
				++ones;
			else if (x != CVal::Zero)
				rest_zero = false;
		}
		if (ones == 1 && rest_zero)
			out.push_back((int)i);
	}
	return out;
}

static CoverMap map_from_index(int n, uint64_t idx)
{
	CoverMap z;
	z.values.resize(n);
	for (int v = 0; v < n; ++v)
	{
		z.values[v] = (CVal)(idx % 3);
		idx /= 3;
	}
	return z;
}

void for_each_cover(const Formula &f, const std::function<void(const CoverMap &)> &fn,
                    int max_vars)
{
	if (f.n_vars > max_vars)
		throw std::invalid_argument("for_each_cover: variable cap exceeded");
	uint64_t total = 1;
	for (int i = 0; i < f.n_vars; ++i)
		total *= 3;
	for (uint64_t idx = 0; idx < total; ++idx)
	{
		CoverMap z = map_from_index(f.n_vars, idx);
		if (is_cover(f, z).ok)
			fn(z);
	}
}

std::vector<CoverMap> enumerate_covers(const Formula &f, int max_vars)
{
	std::vector<CoverMap> out;
	for_each_cover(f, [&](const CoverMap &z) { out.push_back(z); }, max_vars);
	return out;
}

int64_t count_covers(const Formula &f, int max_vars)
{
	int64_t n = 0;
	for_each_cover(f, [&](const CoverMap &) { ++n; }, max_vars);
	return n;
}

CloneIndex::CloneIndex(const Formula &f) : occ(2 * (size_t)f.n_vars)
{
	for (size_t i = 0; i < f.clauses.size(); ++i)
		for (size_t j = 0; j < f.clauses[i].size(); ++j)
			occ[f.clauses[i][j].code()].push_back({(int)i, (int)j});
}

Shade shade_from_cover(const Formula &f, const CoverMap &z)
{
	if (!is_cover(f, z).ok)
		throw std::invalid_argument("shade_from_cover: map is not a cover");
	std::vector<int> crit = critical_clauses(f, z);
	std::vector<bool> is_crit(f.clauses.size(), false);
	for (int i : crit)
		is_crit[i] = true;

	Shade s;
	s.colors.resize(f.clauses.size());
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		s.colors[i].resize(f.clauses[i].size());
		for (size_t j = 0; j < f.clauses[i].size(); ++j)
		{
			CVal x = z.at(f.clauses[i][j]);
			if (x == CVal::Star)
				s.colors[i][j] = Color::G;
			else if (x == CVal::Zero)
				s.colors[i][j] = Color::Y;
			else
				s.colors[i][j] = is_crit[i] ? Color::R : Color::B;
		}
	}
	return s;
}

namespace {

// SD1 classes: 0 = yellow, 1 = red/blue, 2 = green, -1 = no clones
int literal_class(const Formula &f, const Shade &s, const CloneIndex &ci, int code,
                  std::string *err)
{
	int cls = -1;
	for (auto [i, j] : ci.occ[code])
	{
		Color c = s.colors[i][j];
		int k = c == Color::Y ? 0 : c == Color::G ? 2 : 1;
		if (cls == -1)
			cls = k;
		else if (cls != k)
		{
			if (err)
				*err = "SD1: literal " + std::to_string(Lit::from_code(code).to_dimacs()) +
				       " has clones of mixed classes";
			return -2;
		}
	}
	return cls;
}

} // namespace

ShadeVerdict is_valid_shade(const Formula &f, const Shade &s)
{
	ShadeVerdict v;
	if (s.colors.size() != f.clauses.size())
		throw std::invalid_argument("is_valid_shade: clause count mismatch");
	for (size_t i = 0; i < f.clauses.size(); ++i)
		if (s.colors[i].size() != f.clauses[i].size())
			throw std::invalid_argument("is_valid_shade: missing clone color");

	CloneIndex ci(f);

	// SD1
	for (int var = 1; var <= f.n_vars; ++var)
	{
		std::string err;
		int cp = literal_class(f, s, ci, Lit(var, false).code(), &err);
		if (cp == -2)
		{
			v.ok = false;
			v.violations.push_back(err);
			continue;
		}
		int cn = literal_class(f, s, ci, Lit(var, true).code(), &err);
		if (cn == -2)
		{
			v.ok = false;
			v.violations.push_back(err);
			continue;
		}
		if (cp == -1 || cn == -1)
			continue; // a side with no clones constrains nothing
		bool ok = (cp == 2 && cn == 2) || (cp == 1 && cn == 0) || (cp == 0 && cn == 1);
		if (!ok)
		{
			v.ok = false;
			v.violations.push_back("SD1: variable " + std::to_string(var) +
			                       " has inconsistent classes on its two literals");
		}
	}

	// SD2
	for (int code = 0; code < 2 * f.n_vars; ++code)
	{
		if (ci.occ[code].empty())
			continue;
		bool all_blue = true;
		for (auto [i, j] : ci.occ[code])
			if (s.colors[i][j] != Color::B)
			{
				all_blue = false;
				break;
			}
		if (all_blue)
		{
			v.ok = false;
			v.violations.push_back("SD2: literal " +
			                       std::to_string(Lit::from_code(code).to_dimacs()) +
			                       " has all clones blue");
		}
	}

	// V1/V2
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		int reds = 0, cyans = 0, yellows = 0;
		for (auto c : s.colors[i])
		{
			if (c == Color::R)
				++reds;
			else if (is_cyan(c))
				++cyans;
			else
				++yellows;
		}
		if (reds > 0 && (reds > 1 || cyans > 0))
		{
			v.ok = false;
			v.violations.push_back("V1: clause " + std::to_string(i + 1) +
			                       " has a red clone next to a non-yellow clone");
		}
		if (reds == 0 && cyans < 2)
		{
			v.ok = false;
			v.violations.push_back("V2: clause " + std::to_string(i + 1) +
			                       " has no red clone and fewer than two cyan clones");
		}
	}
	return v;
}

CoverMap cover_from_shade(const Formula &f, const Shade &s)
{
	if (!is_valid_shade(f, s).ok)
		throw std::invalid_argument("cover_from_shade: shade is not valid");
	CloneIndex ci(f);
	CoverMap z;
	z.values.assign(f.n_vars, CVal::Star);
	for (int var = 1; var <= f.n_vars; ++var)
	{
		int pos = Lit(var, false).code(), neg = Lit(var, true).code();
		auto from_color = [](Color c) {
			return c == Color::G ? CVal::Star : c == Color::Y ? CVal::Zero : CVal::One;
		};
		if (!ci.occ[pos].empty())
		{
			auto [i, j] = ci.occ[pos][0];
			z.values[var - 1] = from_color(s.colors[i][j]);
		}
		else if (!ci.occ[neg].empty())
		{
			auto [i, j] = ci.occ[neg][0];
			z.values[var - 1] = neg_val(from_color(s.colors[i][j]));
		}
		// variables with no occurrence at all stay *
	}
	return z;
}

std::vector<Shade> enumerate_valid_shades(const Formula &f, int max_vars)
{
	if (f.n_vars > max_vars)
		throw std::invalid_argument("enumerate_valid_shades: variable cap exceeded");
	std::vector<Shade> out;

	uint64_t total = 1;
	for (int i = 0; i < f.n_vars; ++i)
		total *= 3;

	std::vector<bool> var_occurs(f.n_vars + 1, false);
	for (auto &c : f.clauses)
		for (auto l : c)
			var_occurs[l.var] = true;

	for (uint64_t idx = 0; idx < total; ++idx)
	{
		CoverMap z = map_from_index(f.n_vars, idx);

		// a variable without clones leaves no trace in the shade; keep the
		// canonical representative so each shade is produced exactly once
		{
			bool canonical = true;
			for (int v = 1; v <= f.n_vars; ++v)
				if (!var_occurs[v] && z.values[v - 1] != CVal::Star)
					canonical = false;
			if (!canonical)
				continue;
		}

		// underlying values fix y/g slots; 1-slots range over {r,b}
		Shade s;
		s.colors.resize(f.clauses.size());
		std::vector<std::pair<int, int>> one_slots;
		for (size_t i = 0; i < f.clauses.size(); ++i)
		{
			s.colors[i].resize(f.clauses[i].size());
			for (size_t j = 0; j < f.clauses[i].size(); ++j)
			{
				CVal x = z.at(f.clauses[i][j]);
				if (x == CVal::Star)
					s.colors[i][j] = Color::G;
				else if (x == CVal::Zero)
					s.colors[i][j] = Color::Y;
				else
					one_slots.push_back({(int)i, (int)j});
			}
		}

		// DFS over r/b choices with clause-level V1/V2 pruning
		auto clause_ok = [&](int i) {
			int reds = 0, cyans = 0;
			for (auto c : s.colors[i])
			{
				if (c == Color::R)
					++reds;
				else if (is_cyan(c))
					++cyans;
			}
			if (reds > 0 && (reds > 1 || cyans > 0))
				return false;
			if (reds == 0 && cyans < 2)
				return false;
			return true;
		};
		std::function<void(size_t)> rec = [&](size_t pos) {
			if (pos == one_slots.size())
			{
				// all slots decided; full check (covers SD1/SD2 and V1/V2)
				if (is_valid_shade(f, s).ok)
					out.push_back(s);
				return;
			}
			auto [i, j] = one_slots[pos];
			bool last_in_clause = true;
			for (size_t p2 = pos + 1; p2 < one_slots.size(); ++p2)
				if (one_slots[p2].first == i)
				{
					last_in_clause = false;
					break;
				}
			for (Color c : {Color::R, Color::B})
			{
				s.colors[i][j] = c;
				if (!last_in_clause || clause_ok(i))
					rec(pos + 1);
			}
			s.colors[i][j] = Color::Y; // restore sentinel
		};
		// clauses without 1-slots must already satisfy V2
		bool feasible = true;
		for (size_t i = 0; i < f.clauses.size() && feasible; ++i)
		{
			bool has_one = false;
			for (auto l : f.clauses[i])
				if (z.at(l) == CVal::One)
					has_one = true;
			if (!has_one && !clause_ok((int)i))
				feasible = false;
		}
		if (feasible)
			rec(0);
	}
	return out;
}

OverlapMatrix overlap(const CoverMap &z1, const CoverMap &z2)
{
	if (z1.values.size() != z2.values.size())
		throw std::invalid_argument("overlap: mismatched variable sets");
	OverlapMatrix o;
	int64_t counts[3][3] = {};
	int n = (int)z1.values.size();
	for (int var = 1; var <= n; ++var)
		for (bool neg : {false, true})
		{
			Lit l(var, neg);
			counts[(int)z1.at(l)][(int)z2.at(l)]++;
		}
	// order rows/cols as 0, 1, *
	for (int a = 0; a < 3; ++a)
		for (int b = 0; b < 3; ++b)
			o.entries[a][b] = (double)counts[a][b] / (2.0 * n);
	o.delta = 1.0 - o.entries[0][0] - o.entries[1][1] - o.entries[2][2];
	return o;
}

static void for_each_assignment(const Formula &f, int max_vars,
                                const std::function<void(const std::vector<uint8_t> &)> &fn)
{
	if (f.n_vars > max_vars)
		throw std::invalid_argument("assignment enumeration: variable cap exceeded");
	std::vector<uint8_t> a(f.n_vars, 0);
	uint64_t total = 1ull << f.n_vars;
	for (uint64_t idx = 0; idx < total; ++idx)
	{
		for (int v = 0; v < f.n_vars; ++v)
			a[v] = (idx >> v) & 1;
		fn(a);
	}
}

static bool satisfies(const Formula &f, const std::vector<uint8_t> &a)
{
	for (auto &c : f.clauses)
	{
		bool sat = false;
		for (auto l : c)
			if ((a[l.var - 1] != 0) != l.neg)
			{
				sat = true;
				break;
			}
		if (!sat)
			return false;
	}
	return true;
}

int64_t count_sat(const Formula &f, int max_vars)
{
	int64_t n = 0;
	for_each_assignment(f, max_vars, [&](const std::vector<uint8_t> &a) {
		if (satisfies(f, a))
			++n;
	});
	return n;
}

int64_t count_nae(const Formula &f, int max_vars)
{
	int64_t n = 0;
	for_each_assignment(f, max_vars, [&](const std::vector<uint8_t> &a) {
		if (!satisfies(f, a))
			return;
		std::vector<uint8_t> b(a);
		for (auto &x : b)
			x ^= 1;
		if (satisfies(f, b))
			++n;
	});
	return n;
}

int64_t count_balanced(const Formula &f, double tol, int max_vars)
{
	DegreeProfile p = degree_profile(f);
	int64_t clones = p.total();
	int64_t n = 0;
	for_each_assignment(f, max_vars, [&](const std::vector<uint8_t> &a) {
		if (!satisfies(f, a))
			return;
		if (clones == 0)
		{
			++n; // vacuous balance on the empty formula
			return;
		}
		int64_t true_occ = 0;
		for (int v = 1; v <= f.n_vars; ++v)
			true_occ += a[v - 1] ? p[Lit(v, false)] : p[Lit(v, true)];
		double frac = (double)true_occ / (double)clones;
		if (std::abs(frac - 0.5) <= tol)
			++n;
	});
	return n;
}

} // namespace ksat
