#include "ksat/sp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ksat {

Signature sp_marginal(int k, int64_t delta)
{
	if (k < 2)
		throw std::invalid_argument("sp_marginal: k must be >= 2");
	// p1 = 1/2 + delta/2^{k+1} - 2^{-k-2} = (2^{k+1} + 2 delta - 1) / 2^{k+2}
	Rat den = Rat(boost::multiprecision::cpp_int(1) << (k + 2));
	Rat num1 = Rat((boost::multiprecision::cpp_int(1) << (k + 1)) + 2 * delta - 1);
	Rat num0 = Rat((boost::multiprecision::cpp_int(1) << (k + 1)) - 2 * delta - 1);
	Signature s;
	s.p1 = num1 / den;
	s.p0 = num0 / den;
	s.ps = Rat(2) / den;
	if (s.p1 < 0 || s.p0 < 0)
		throw std::domain_error("sp_marginal: delta outside the admissible regime");
	return s;
}

std::vector<CloneDist> lambda_map(const std::vector<Signature> &sig)
{
	size_t kappa = sig.size();
	if (kappa == 0)
		throw std::invalid_argument("lambda_map: empty signature tuple");
	std::vector<CloneDist> out(kappa);
	for (size_t j = 0; j < kappa; ++j)
	{
		Rat prod0 = 1;
		for (size_t j2 = 0; j2 < kappa; ++j2)
			if (j2 != j)
				prod0 *= sig[j2].p0;
		CloneDist &c = out[j];
		c.r = (sig[j].p1 + sig[j].ps) * prod0;
		c.b = sig[j].p1 - c.r;
		c.y = sig[j].p0;
		c.g = sig[j].ps;
		if (c.b < 0)
			throw std::domain_error("lambda_map: negative blue mass (inputs outside regime)");
	}
	return out;
}

namespace {

std::string rat_key(const Rat &x)
{
	std::ostringstream ss;
	ss << x;
	return ss.str();
}

std::string dist_key(const CloneDist &c)
{
	return rat_key(c.r) + "," + rat_key(c.b) + "," + rat_key(c.g) + "," + rat_key(c.y);
}

} // namespace

TypeSystem assign_types(const Formula &f, int k, bool degree_pair_mode)
{
	f.check_valid();
	TypeSystem ts;
	ts.k = k;
	ts.n_vars = f.n_vars;
	ts.n_clauses = (int64_t)f.clauses.size();
	ts.degree_pair_mode = degree_pair_mode;

	DegreeProfile deg = degree_profile(f);
	int n2 = 2 * f.n_vars;

	// per-literal signatures from the degree gap
	std::vector<Signature> lit_sig(n2);
	for (int code = 0; code < n2; ++code)
	{
		Lit l = Lit::from_code(code);
		lit_sig[code] = sp_marginal(k, deg[l] - deg[~l]);
	}

	// per-clause signature tuples -> clone distributions
	std::vector<std::vector<CloneDist>> slot_dist(f.clauses.size());
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		std::vector<Signature> tuple;
		tuple.reserve(f.clauses[i].size());
		for (auto l : f.clauses[i])
			tuple.push_back(lit_sig[l.code()]);
		slot_dist[i] = lambda_map(tuple);
	}

	// collect each literal's clone distributions in occurrence order
	CloneIndex ci(f);
	std::vector<std::vector<CloneDist>> lit_clones(n2);
	for (int code = 0; code < n2; ++code)
		for (auto [i, j] : ci.occ[code])
			lit_clones[code].push_back(slot_dist[i][j]);

	if (degree_pair_mode)
	{
		// collapse every clone of the class to the class-average distribution
		std::map<std::pair<int64_t, int64_t>, std::vector<int>> classes;
		for (int code = 0; code < n2; ++code)
		{
			Lit l = Lit::from_code(code);
			classes[{deg[l], deg[~l]}].push_back(code);
		}
		std::map<std::pair<int64_t, int64_t>, CloneDist> avg;
		for (auto &[key, codes] : classes)
		{
			CloneDist a{0, 0, 0, 0};
			int64_t cnt = 0;
			for (int code : codes)
				for (auto &cd : lit_clones[code])
				{
					a.r += cd.r;
					a.b += cd.b;
					a.g += cd.g;
					a.y += cd.y;
					++cnt;
				}
			if (cnt > 0)
			{
				a.r /= cnt;
				a.b /= cnt;
				a.g /= cnt;
				a.y /= cnt;
			}
			else
			{
				// degree-0 class: fall back to the bare signature
				Signature s = sp_marginal(k, key.first - key.second);
				a = CloneDist{0, s.p1, s.ps, s.p0};
			}
			avg[key] = a;
		}
		for (int code = 0; code < n2; ++code)
		{
			Lit l = Lit::from_code(code);
			const CloneDist &a = avg[{deg[l], deg[~l]}];
			for (auto &cd : lit_clones[code])
				cd = a;
		}
	}

	// canonical clone order: stable sort by distribution
	ts.clone_rank.resize(n2);
	std::vector<std::vector<CloneDist>> sorted_clones(n2);
	for (int code = 0; code < n2; ++code)
	{
		std::vector<int> order(lit_clones[code].size());
		std::iota(order.begin(), order.end(), 0);
		std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
			return lit_clones[code][a] < lit_clones[code][b];
		});
		ts.clone_rank[code].resize(order.size());
		sorted_clones[code].reserve(order.size());
		for (size_t rank = 0; rank < order.size(); ++rank)
		{
			ts.clone_rank[code][order[rank]] = (int)rank;
			sorted_clones[code].push_back(lit_clones[code][order[rank]]);
		}
	}

	// group literals into types
	std::map<std::string, int> type_index;
	ts.type_of_literal.assign(n2, -1);
	for (int code = 0; code < n2; ++code)
	{
		Lit l = Lit::from_code(code);
		std::ostringstream key;
		key << deg[l] << '|' << deg[~l];
		if (!degree_pair_mode)
		{
			key << '|';
			for (auto &c : sorted_clones[code])
				key << dist_key(c) << ';';
			key << '|';
			for (auto &c : sorted_clones[(~l).code()])
				key << dist_key(c) << ';';
		}
		auto [it, fresh] = type_index.insert({key.str(), (int)ts.lit_types.size()});
		if (fresh)
		{
			LiteralType t;
			t.d_pos = deg[l];
			t.d_neg = deg[~l];
			t.clones = sorted_clones[code];
			t.neg_clones = sorted_clones[(~l).code()];
			t.sig = lit_sig[code];
			ts.lit_types.push_back(std::move(t));
		}
		ts.type_of_literal[code] = it->second;
		++ts.lit_types[it->second].count;
	}
	for (auto &t : ts.lit_types)
		t.weight = Rat(t.count) / Rat(n2);
	for (int code = 0; code < n2; ++code)
	{
		int t = ts.type_of_literal[code];
		ts.lit_types[t].neg_type = ts.type_of_literal[(~Lit::from_code(code)).code()];
	}

	// TY1/TY2 are guaranteed by construction; verify anyway
	for (auto &t : ts.lit_types)
	{
		for (auto &c : t.clones)
			if (c.p1() != t.sig.p1 || c.y != t.sig.p0 || c.g != t.sig.ps)
				throw std::logic_error("assign_types: TY1 violated");
		for (auto &c : t.neg_clones)
			if (c.p1() != t.sig.p0 || c.g != t.sig.ps)
				throw std::logic_error("assign_types: TY2 violated");
	}

	// clause types
	std::map<std::string, int> clause_index;
	ts.type_of_clause.assign(f.clauses.size(), -1);
	// occurrence counters to recover each slot's clone number
	std::vector<int> occ_counter(n2, 0);
	std::vector<std::vector<int>> slot_clone(f.clauses.size());
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		slot_clone[i].resize(f.clauses[i].size());
		for (size_t j = 0; j < f.clauses[i].size(); ++j)
		{
			int code = f.clauses[i][j].code();
			int occ = occ_counter[code]++;
			slot_clone[i][j] = ts.clone_rank[code][occ];
		}
	}
	// Clone positions with equal distributions are interchangeable, so the
	// canonical slot key is the first clone of the literal type carrying the
	// same distribution. A regular formula then has a single clause type.
	auto canonical_clone = [&](int lit_type, int rank) {
		const auto &clones = ts.lit_types[lit_type].clones;
		const CloneDist &d = clones.at(rank);
		int h = rank;
		while (h > 0 && clones[h - 1] == d)
			--h;
		return h;
	};
	for (size_t i = 0; i < f.clauses.size(); ++i)
	{
		std::ostringstream key;
		for (size_t j = 0; j < f.clauses[i].size(); ++j)
		{
			int code = f.clauses[i][j].code();
			int lt = ts.type_of_literal[code];
			key << lt << ':'
			    << (degree_pair_mode ? 0 : canonical_clone(lt, slot_clone[i][j]))
			    << ';';
		}
		auto [it, fresh] = clause_index.insert({key.str(), (int)ts.clause_types.size()});
		if (fresh)
		{
			ClauseType ct;
			for (size_t j = 0; j < f.clauses[i].size(); ++j)
			{
				ClauseSlot slot;
				int code = f.clauses[i][j].code();
				slot.lit_type = ts.type_of_literal[code];
				slot.clone = degree_pair_mode
				                 ? 0
				                 : canonical_clone(slot.lit_type, slot_clone[i][j]);
				slot.dist = ts.lit_types[slot.lit_type].clones.at(slot.clone);
				ct.slots.push_back(std::move(slot));
			}
			ts.clause_types.push_back(std::move(ct));
		}
		ts.type_of_clause[i] = it->second;
		++ts.clause_types[it->second].count;
	}
	for (auto &ct : ts.clause_types)
		ct.weight = Rat(ct.count) / Rat((int64_t)f.clauses.size());
	return ts;
}

TypeIdentityReport check_type_identity(const TypeSystem &ts)
{
	TypeIdentityReport rep;
	Rat two_k = Rat(1) / Rat(boost::multiprecision::cpp_int(1) << ts.k);
	for (auto &ct : ts.clause_types)
	{
		for (size_t j = 0; j < ct.slots.size(); ++j)
		{
			Rat prod_y = 1;
			for (size_t j2 = 0; j2 < ct.slots.size(); ++j2)
				if (j2 != j)
					prod_y *= ct.slots[j2].dist.y;
			const CloneDist &d = ct.slots[j].dist;
			Rat lp = d.r + d.b + d.g;
			Rat lhs = d.r, rhs = lp * prod_y;
			if (lhs != rhs)
			{
				rep.exact = false;
				rep.max_violation =
				    std::max(rep.max_violation, std::abs(to_double(lhs - rhs)));
			}
			rep.max_dev_from_2k =
			    std::max(rep.max_dev_from_2k, std::abs(to_double(d.r - two_k)));
		}
	}
	return rep;
}

ThetaShadeReport is_theta_shade(const Formula &f, const TypeSystem &ts,
                                const Shade &s, double slack)
{
	ThetaShadeReport rep;
	CloneIndex ci(f);
	int n2 = 2 * f.n_vars;

	// literal-side counts: (type, canonical clone, color)
	for (int t = 0; t < (int)ts.lit_types.size(); ++t)
	{
		const LiteralType &lt = ts.lit_types[t];
		if (lt.clones.empty())
			continue;
		size_t d = lt.clones.size();
		std::vector<std::array<int64_t, 4>> counts(d, {0, 0, 0, 0});
		for (int code = 0; code < n2; ++code)
		{
			if (ts.type_of_literal[code] != t)
				continue;
			for (size_t occ = 0; occ < ci.occ[code].size(); ++occ)
			{
				auto [i, j] = ci.occ[code][occ];
				int h = ts.degree_pair_mode ? (int)occ : ts.clone_rank[code][occ];
				if (h < (int)d)
					counts[h][(int)s.colors[i][j]]++;
			}
		}
		for (size_t h = 0; h < d; ++h)
		{
			const CloneDist &cd = lt.clones[h];
			double nt = (double)lt.count;
			const Rat *mass[4] = {&cd.r, &cd.b, &cd.g, &cd.y};
			for (int z = 0; z < 4; ++z)
			{
				double expect = nt * to_double(*mass[z]);
				double dev = std::abs((double)counts[h][z] - expect);
				rep.max_literal_dev = std::max(rep.max_literal_dev, dev / std::max(nt, 1.0));
				if (dev > slack * nt + 1.0)
					rep.ok = false;
			}
		}
	}

	// clause-side yellow counts per slot
	for (int c = 0; c < (int)ts.clause_types.size(); ++c)
	{
		const ClauseType &ct = ts.clause_types[c];
		std::vector<int64_t> yellow(ct.slots.size(), 0);
		for (size_t i = 0; i < f.clauses.size(); ++i)
		{
			if (ts.type_of_clause[i] != c)
				continue;
			for (size_t j = 0; j < f.clauses[i].size(); ++j)
				if (s.colors[i][j] == Color::Y)
					yellow[j]++;
		}
		for (size_t j = 0; j < ct.slots.size(); ++j)
		{
			double ml = (double)ct.count;
			double expect = ml * to_double(ct.slots[j].dist.y);
			double dev = std::abs((double)yellow[j] - expect);
			rep.max_clause_dev = std::max(rep.max_clause_dev, dev / std::max(ml, 1.0));
			if (dev > slack * ml + 1.0)
				rep.ok = false;
		}
	}
	return rep;
}

} // namespace ksat
