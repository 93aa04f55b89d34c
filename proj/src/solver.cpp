#include "ksat/solver.hpp"

#include "ksat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ksat {

bool assignment_satisfies(const Formula &f, const std::vector<uint8_t> &a)
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

std::vector<std::vector<uint8_t>> brute_force_sat(const Formula &f, int max_vars)
{
	if (f.n_vars > max_vars)
		throw std::invalid_argument("brute_force_sat: variable cap exceeded");
	std::vector<std::vector<uint8_t>> out;
	std::vector<uint8_t> a(f.n_vars, 0);
	uint64_t total = 1ull << f.n_vars;
	for (uint64_t idx = 0; idx < total; ++idx)
	{
		for (int v = 0; v < f.n_vars; ++v)
			a[v] = (idx >> v) & 1;
		if (assignment_satisfies(f, a))
			out.push_back(a);
	}
	return out;
}

namespace {

// counter-based DPLL: per clause we track the number of unassigned literals
// and how many of its literals are currently true; per literal we track the
// number of active (not yet satisfied) clauses it occurs in
class Dpll {
  public:
	explicit Dpll(const Formula &f) : f_(f), n_(f.n_vars)
	{
		occ_.resize(2 * n_);
		for (int i = 0; i < (int)f.clauses.size(); ++i)
			for (auto l : f.clauses[i])
				occ_[l.code()].push_back(i);
		val_.assign(n_, -1);
		unassigned_.resize(f.clauses.size());
		true_count_.assign(f.clauses.size(), 0);
		active_occ_.resize(2 * n_, 0);
		for (int i = 0; i < (int)f.clauses.size(); ++i)
			unassigned_[i] = (int)f.clauses[i].size();
		for (int c = 0; c < 2 * n_; ++c)
			active_occ_[c] = (int)occ_[c].size();
	}

	SatResult run(int64_t node_cap)
	{
		SatResult res;
		// top-level propagation of unit clauses
		for (int i = 0; i < (int)f_.clauses.size(); ++i)
			if (f_.clauses[i].size() == 1)
				if (!enqueue(f_.clauses[i][0]))
				{
					res.status = SatStatus::Unsat;
					return res;
				}
		if (!propagate())
		{
			res.status = SatStatus::Unsat;
			res.propagations = propagations_;
			return res;
		}

		bool unknown = false;
		if (search(node_cap, unknown))
		{
			res.status = SatStatus::Sat;
			std::vector<uint8_t> a(n_);
			for (int v = 0; v < n_; ++v)
				a[v] = val_[v] == 1 ? 1 : 0; // unconstrained variables -> 0
			if (!assignment_satisfies(f_, a))
				throw std::logic_error("dpll: produced assignment fails a clause");
			res.assignment = a;
		}
		else
			res.status = unknown ? SatStatus::Unknown : SatStatus::Unsat;
		res.decisions = decisions_;
		res.propagations = propagations_;
		return res;
	}

  private:
	const Formula &f_;
	int n_;
	std::vector<std::vector<int>> occ_;
	std::vector<int8_t> val_;
	std::vector<int> unassigned_, true_count_, active_occ_;
	std::vector<int> trail_;
	std::vector<Lit> queue_;
	int64_t decisions_ = 0, propagations_ = 0;

	bool lit_true(Lit l) const { return val_[l.var - 1] == (l.neg ? 0 : 1); }
	bool lit_false(Lit l) const { return val_[l.var - 1] == (l.neg ? 1 : 0); }

	bool enqueue(Lit l)
	{
		if (val_[l.var - 1] >= 0)
			return lit_true(l);
		queue_.push_back(l);
		return true;
	}

	bool assign(Lit l)
	{
		val_[l.var - 1] = l.neg ? 0 : 1;
		trail_.push_back(l.code());
		++propagations_;
		// clauses satisfied by l
		for (int i : occ_[l.code()])
		{
			if (true_count_[i]++ == 0)
				for (auto l2 : f_.clauses[i])
					--active_occ_[l2.code()];
		}
		// clauses shrunk by ~l
		for (int i : occ_[(~l).code()])
		{
			--unassigned_[i];
			if (true_count_[i] > 0)
				continue;
			if (unassigned_[i] == 0)
				return false;
			if (unassigned_[i] == 1)
			{
				for (auto l2 : f_.clauses[i])
					if (val_[l2.var - 1] < 0)
					{
						if (!enqueue(l2))
							return false;
						break;
					}
			}
		}
		return true;
	}

	bool propagate()
	{
		while (!queue_.empty())
		{
			Lit l = queue_.back();
			queue_.pop_back();
			if (val_[l.var - 1] >= 0)
			{
				if (!lit_true(l))
					return false;
				continue;
			}
			if (!assign(l))
				return false;
		}
		return true;
	}

	void undo_to(size_t mark)
	{
		while (trail_.size() > mark)
		{
			int code = trail_.back();
			trail_.pop_back();
			Lit l = Lit::from_code(code);
			for (int i : occ_[code])
			{
				if (--true_count_[i] == 0)
					for (auto l2 : f_.clauses[i])
						++active_occ_[l2.code()];
			}
			for (int i : occ_[(~l).code()])
				++unassigned_[i];
			val_[l.var - 1] = -1;
		}
		queue_.clear();
	}

	// max active occurrences, smallest code on ties; also reports pure
	// literals (negation inactive) so they get asserted rather than branched
	bool pick(Lit &out, bool &pure)
	{
		int best = -1, best_occ = -1;
		for (int v = 0; v < n_; ++v)
		{
			if (val_[v] >= 0)
				continue;
			int cp = 2 * v, cn = 2 * v + 1;
			if (active_occ_[cp] > 0 && active_occ_[cn] == 0)
			{
				out = Lit::from_code(cp);
				pure = true;
				return true;
			}
			if (active_occ_[cn] > 0 && active_occ_[cp] == 0)
			{
				out = Lit::from_code(cn);
				pure = true;
				return true;
			}
			if (active_occ_[cp] > best_occ)
			{
				best_occ = active_occ_[cp];
				best = cp;
			}
			if (active_occ_[cn] > best_occ)
			{
				best_occ = active_occ_[cn];
				best = cn;
			}
		}
		if (best < 0)
			return false; // every variable assigned or inactive
		if (best_occ == 0)
			return false; // all clauses satisfied
		out = Lit::from_code(best);
		pure = false;
		return true;
	}

	bool all_satisfied() const
	{
		for (size_t i = 0; i < f_.clauses.size(); ++i)
			if (true_count_[i] == 0)
				return false;
		return true;
	}

	bool search(int64_t node_cap, bool &unknown)
	{
		Lit l;
		bool pure = false;
		if (!pick(l, pure))
			return all_satisfied();
		if (pure)
		{
			size_t mark = trail_.size();
			queue_.push_back(l);
			if (propagate() && search(node_cap, unknown))
				return true;
			undo_to(mark);
			return false; // pure literal never needs the opposite branch
		}
		++decisions_;
		if (node_cap > 0 && decisions_ > node_cap)
		{
			unknown = true;
			return false;
		}
		for (Lit branch : {l, ~l})
		{
			size_t mark = trail_.size();
			queue_.push_back(branch);
			if (propagate() && search(node_cap, unknown))
				return true;
			undo_to(mark);
			if (unknown)
				return false;
		}
		return false;
	}
};

} // namespace

SatResult dpll_solve(const Formula &f, int64_t node_cap)
{
	f.check_valid();
	Dpll d(f);
	return d.run(node_cap);
}

SatProbability estimate_sat_probability(int k, int n, double r, int64_t trials,
                                        uint64_t seed, int64_t node_cap)
{
	if (trials < 1)
		throw std::invalid_argument("estimate_sat_probability: trials must be >= 1");
	int64_t m = (int64_t)std::ceil(r * n);
	std::vector<int64_t> sat_per_chunk, unk_per_chunk;
	std::mutex mu;
	std::vector<std::pair<int64_t, int64_t>> chunk_results;
	parallel_chunks(trials, [&](int64_t lo, int64_t hi, int chunk) {
		int64_t sat = 0, unk = 0;
		for (int64_t t = lo; t < hi; ++t)
		{
			Formula f = gen_uniform(k, n, m, seed ^ (uint64_t)t);
			SatResult res = dpll_solve(f, node_cap);
			if (res.status == SatStatus::Sat)
				++sat;
			else if (res.status == SatStatus::Unknown)
				++unk;
		}
		std::lock_guard<std::mutex> g(mu);
		chunk_results.push_back({sat, unk});
	});
	SatProbability p;
	p.trials = trials;
	for (auto [s, u] : chunk_results)
	{
		p.sat += s;
		p.unknown += u;
	}
	p.fraction = (double)p.sat / (double)trials;
	p.stderr_ = std::sqrt(p.fraction * (1 - p.fraction) / (double)trials);
	return p;
}

ThresholdEstimate empirical_threshold(int k, int n, int64_t trials, double r_lo,
                                      double r_hi, double tol, uint64_t seed)
{
	if (!(r_lo < r_hi))
		throw std::invalid_argument("empirical_threshold: need r_lo < r_hi");
	ThresholdEstimate est;
	auto eval = [&](double r) {
		SatProbability p = estimate_sat_probability(k, n, r, trials, seed);
		est.curve.push_back({r, p.fraction, p.stderr_});
		return p.fraction;
	};
	double lo = r_lo, hi = r_hi;
	eval(lo);
	eval(hi);
	while (hi - lo > tol)
	{
		double mid = 0.5 * (lo + hi);
		double frac = eval(mid);
		if (frac >= 0.5)
			lo = mid;
		else
			hi = mid;
	}
	est.estimate = 0.5 * (lo + hi);
	std::sort(est.curve.begin(), est.curve.end(),
	          [](const ThresholdCurvePoint &a, const ThresholdCurvePoint &b) {
		          return a.r < b.r;
	          });
	for (size_t i = 0; i + 1 < est.curve.size(); ++i)
	{
		double slack = 3 * (est.curve[i].stderr_ + est.curve[i + 1].stderr_);
		if (est.curve[i + 1].fraction > est.curve[i].fraction + slack)
			est.monotone_within_noise = false;
	}
	return est;
}

} // namespace ksat
