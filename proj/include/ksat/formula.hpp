#pragma once

#include "ksat/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksat {

// A literal over variables 1..n. Encoded as 2*(var-1)+neg so that signed
// literals index arrays of size 2n directly.
struct Lit {
	int var = 0; // 1-based
	bool neg = false;

	Lit() = default;
	Lit(int v, bool n) : var(v), neg(n) {}

	Lit operator~() const { return Lit(var, !neg); }
	bool operator==(const Lit &o) const = default;

	int code() const { return 2 * (var - 1) + (neg ? 1 : 0); }
	static Lit from_code(int c) { return Lit(c / 2 + 1, c & 1); }

	// DIMACS convention: +v / -v
	int to_dimacs() const { return neg ? -var : var; }
	static Lit from_dimacs(int d) { return Lit(d < 0 ? -d : d, d < 0); }
};

using Clause = std::vector<Lit>;

struct Formula {
	int n_vars = 0;
	int k = 0; // nominal clause width
	std::vector<Clause> clauses;

	size_t n_clones() const
	{
		size_t s = 0;
		for (auto &c : clauses)
			s += c.size();
		return s;
	}
	void check_valid() const;
};

// occurrence count per signed literal, indexed by Lit::code()
struct DegreeProfile {
	std::vector<int64_t> d;

	explicit DegreeProfile(int n_vars = 0) : d(2 * (size_t)n_vars, 0) {}
	int64_t operator[](Lit l) const { return d[l.code()]; }
	int64_t &operator[](Lit l) { return d[l.code()]; }
	int n_vars() const { return (int)(d.size() / 2); }
	int64_t total() const
	{
		int64_t s = 0;
		for (auto x : d)
			s += x;
		return s;
	}
};

DegreeProfile degree_profile(const Formula &f);

// m_clauses clauses of width k, each slot i.i.d. uniform over 2*n_vars
// signed literals (repeats and complementary pairs allowed)
Formula gen_uniform(int k, int n_vars, int64_t m_clauses, uint64_t seed);

// uniformly random bijection between literal clones and clause slots
Formula gen_configuration(const DegreeProfile &profile,
                          const std::vector<int> &clause_lengths, uint64_t seed);

// every literal occurs exactly d times; 2*n_vars*d must be divisible by k
Formula gen_regular(int k, int d, int n_vars, uint64_t seed);

struct MajorityVote {
	std::vector<uint8_t> assignment; // per variable, 0/1
	double w_maj = 0;
	bool degenerate = false; // empty formula: w_maj undefined, reported as 0
};

MajorityVote majority_vote(const Formula &f, uint64_t seed);

// DIMACS CNF
Formula read_dimacs(const std::string &text);
std::string write_dimacs(const Formula &f);
Formula read_dimacs_file(const std::string &path);
void write_dimacs_file(const Formula &f, const std::string &path);

struct ParseError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

} // namespace ksat
