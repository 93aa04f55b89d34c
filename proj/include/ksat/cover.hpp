#pragma once

#include "ksat/formula.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ksat {

// variable values of a cover: 0, 1, or the joker *
enum class CVal : uint8_t { Zero = 0, One = 1, Star = 2 };

inline CVal neg_val(CVal v)
{
	if (v == CVal::Zero)
		return CVal::One;
	if (v == CVal::One)
		return CVal::Zero;
	return CVal::Star;
}

inline char cval_char(CVal v)
{
	return v == CVal::Zero ? '0' : v == CVal::One ? '1' : '*';
}

struct CoverMap {
	std::vector<CVal> values; // per variable, index var-1

	CVal at(Lit l) const
	{
		CVal v = values[l.var - 1];
		return l.neg ? neg_val(v) : v;
	}
	bool operator==(const CoverMap &o) const = default;
	std::string str() const
	{
		std::string s;
		for (auto v : values)
			s += cval_char(v);
		return s;
	}
};

struct CoverVerdict {
	bool ok = true;
	std::vector<std::string> violations;
};

// CV1: every clause has a 1-literal or at least two *-slots.
// CV2: every literal with value 1 occurs in some clause whose other slots are
//      all 0. Slots are counted with multiplicity; a width-1 clause freezes
//      its literal vacuously.
CoverVerdict is_cover(const Formula &f, const CoverMap &z);

// clauses with exactly one slot valued 1 and all other slots valued 0
std::vector<int> critical_clauses(const Formula &f, const CoverMap &z);

// Iterates all 3^n maps in counter order and calls fn on each cover.
// Throws if n_vars exceeds max_vars.
void for_each_cover(const Formula &f, const std::function<void(const CoverMap &)> &fn,
                    int max_vars = 16);
std::vector<CoverMap> enumerate_covers(const Formula &f, int max_vars = 16);
int64_t count_covers(const Formula &f, int max_vars = 16);

// clone colors
enum class Color : uint8_t { R = 0, B = 1, G = 2, Y = 3 };

inline char color_char(Color c)
{
	return c == Color::R ? 'r' : c == Color::B ? 'b' : c == Color::G ? 'g' : 'y';
}
inline bool is_cyan(Color c) { return c == Color::B || c == Color::G; }

// one color per clause slot; clone j of literal l is its j-th occurrence in
// clause-major, slot-major order
struct Shade {
	std::vector<std::vector<Color>> colors;
	bool operator==(const Shade &o) const = default;
};

// occurrence lists: literal code -> ordered (clause, slot) pairs
struct CloneIndex {
	std::vector<std::vector<std::pair<int, int>>> occ;
	explicit CloneIndex(const Formula &f);
};

// *-clones are green, 0-clones yellow, 1-clones red in critical clauses and
// blue elsewhere
Shade shade_from_cover(const Formula &f, const CoverMap &z);

struct ShadeVerdict {
	bool ok = true;
	std::vector<std::string> violations;
};

// SD1/SD2 and V1/V2
ShadeVerdict is_valid_shade(const Formula &f, const Shade &s);

CoverMap cover_from_shade(const Formula &f, const Shade &s);

// exhaustive enumeration of valid shades (oracle; does not assume the
// shade<->cover correspondence)
std::vector<Shade> enumerate_valid_shades(const Formula &f, int max_vars = 16);

// 3x3 overlap of two covers, counted over the 2n signed literals;
// rows/columns ordered 0, 1, *
struct OverlapMatrix {
	std::array<std::array<double, 3>, 3> entries{};
	double delta = 0; // 1 - sum of diagonal
};

OverlapMatrix overlap(const CoverMap &z1, const CoverMap &z2);

// exhaustive assignment counts
int64_t count_sat(const Formula &f, int max_vars = 25);
int64_t count_nae(const Formula &f, int max_vars = 25);
// |true-literal-occurrence fraction - 1/2| <= tol
int64_t count_balanced(const Formula &f, double tol, int max_vars = 25);

} // namespace ksat
