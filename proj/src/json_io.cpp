#include "ksat/json_io.hpp"

#include <sstream>

namespace ksat {

json schema_header(const std::string &command)
{
	json j;
	j["schema"] = "ksat-lab/1";
	j["command"] = command;
	return j;
}

std::string rat_string(const Rat &x)
{
	std::ostringstream ss;
	ss << x;
	return ss.str();
}

json to_json(const PruneReport &r)
{
	json j;
	j["removed_vars"] = std::vector<int>(r.removed_vars.begin(), r.removed_vars.end());
	j["removed_clauses"] =
	    std::vector<int>(r.removed_clause_ids.begin(), r.removed_clause_ids.end());
	j["dropped_below_min_width"] =
	    std::vector<int>(r.dropped_clause_ids.begin(), r.dropped_clause_ids.end());
	j["rounds"] = r.rounds;
	j["kept_vars"] = r.kept_vars;
	j["kept_clauses"] = r.kept_clauses;
	json hist = json::object();
	for (auto [w, c] : r.widths_histogram)
		hist[std::to_string(w)] = c;
	j["widths_histogram"] = hist;
	j["recompute_target"] = r.recompute_target;
	return j;
}

json to_json(const CoverMap &z) { return z.str(); }

json to_json(const Formula &f, const Shade &s)
{
	json j = json::array();
	for (size_t i = 0; i < s.colors.size(); ++i)
	{
		std::string row;
		for (auto c : s.colors[i])
			row += color_char(c);
		j.push_back(row);
	}
	(void)f;
	return j;
}

json to_json(const OverlapMatrix &o)
{
	json j;
	json m = json::array();
	for (int a = 0; a < 3; ++a)
		m.push_back(std::vector<double>{o.entries[a][0], o.entries[a][1], o.entries[a][2]});
	j["order"] = "0,1,*";
	j["matrix"] = m;
	j["delta"] = o.delta;
	return j;
}

json to_json(const TypeSystem &ts)
{
	json j;
	j["k"] = ts.k;
	j["n_vars"] = ts.n_vars;
	j["n_clauses"] = ts.n_clauses;
	j["degree_pair_mode"] = ts.degree_pair_mode;
	json lits = json::array();
	for (auto &t : ts.lit_types)
	{
		json e;
		e["d_pos"] = t.d_pos;
		e["d_neg"] = t.d_neg;
		e["count"] = t.count;
		e["weight"] = rat_string(t.weight);
		e["weight_float"] = to_double(t.weight);
		e["neg_type"] = t.neg_type;
		e["p1"] = rat_string(t.sig.p1);
		e["p0"] = rat_string(t.sig.p0);
		e["pstar"] = rat_string(t.sig.ps);
		json clones = json::array();
		for (auto &c : t.clones)
			clones.push_back({{"r", rat_string(c.r)},
			                  {"b", rat_string(c.b)},
			                  {"g", rat_string(c.g)},
			                  {"y", rat_string(c.y)}});
		e["clones"] = clones;
		lits.push_back(e);
	}
	j["literal_types"] = lits;
	json cts = json::array();
	for (auto &c : ts.clause_types)
	{
		json e;
		e["count"] = c.count;
		e["weight"] = rat_string(c.weight);
		e["weight_float"] = to_double(c.weight);
		json slots = json::array();
		for (auto &s : c.slots)
			slots.push_back({{"type", s.lit_type}, {"clone", s.clone}});
		e["slots"] = slots;
		cts.push_back(e);
	}
	j["clause_types"] = cts;
	return j;
}

json to_json(const TypeIdentityReport &r)
{
	return {{"exact", r.exact},
	        {"max_violation", r.max_violation},
	        {"max_dev_from_2k", r.max_dev_from_2k}};
}

json to_json(const FirstMomentParams &p)
{
	json j;
	j["residual"] = p.residual;
	j["iterations"] = p.iterations;
	j["converged"] = p.converged;
	j["q_r"] = p.q_r;
	j["q_p"] = p.q_p;
	return j;
}

json to_json(const RateResult &r)
{
	json j;
	j["rate"] = r.rate;
	j["entropy"] = r.entropy;
	j["occupancy"] = r.occupancy;
	j["occupancy_fig1_variant"] = r.occupancy_fig1;
	j["validity"] = r.validity;
	j["validity_sum"] = r.validity_sum;
	j["polylog_C"] = r.polylog_C;
	j["residual"] = r.residual;
	j["truncation_error"] = r.truncation_error;
	return j;
}

json to_json(const AsymptoticTable &t)
{
	json rows = json::array();
	for (auto &r : t.rows)
		rows.push_back({{"name", r.name},
		                {"computed", r.computed},
		                {"claimed", r.claimed},
		                {"deviation", r.deviation},
		                {"tolerance", r.tolerance},
		                {"ok", r.ok}});
	json j;
	j["rows"] = rows;
	j["rate"] = to_json(t.rate);
	return j;
}

json to_json(const BoundTable &t)
{
	json j;
	j["k"] = t.k;
	j["main"] = t.main;
	j["kkks_upper"] = t.kkks_upper;
	j["ap_lower"] = t.ap_lower;
	j["condensation"] = t.condensation;
	j["gap"] = t.gap;
	if (t.regular_dstar)
		j["regular_dstar"] = *t.regular_dstar;
	return j;
}

json to_json(const SatProbability &p)
{
	return {{"fraction", p.fraction},
	        {"stderr", p.stderr_},
	        {"sat", p.sat},
	        {"trials", p.trials},
	        {"unknown", p.unknown}};
}

json to_json(const ThresholdEstimate &e)
{
	json curve = json::array();
	for (auto &p : e.curve)
		curve.push_back({{"r", p.r}, {"fraction", p.fraction}, {"stderr", p.stderr_}});
	return {{"estimate", e.estimate},
	        {"monotone_within_noise", e.monotone_within_noise},
	        {"curve", curve}};
}

json to_json(const SecondMomentResult &r)
{
	return {{"f", r.f},
	        {"f_ent", r.f_ent},
	        {"f_disc", r.f_disc},
	        {"f_val", r.f_val},
	        {"f_occ", r.f_occ},
	        {"solver_residual", r.solver_residual},
	        {"in_region", r.in_region},
	        {"fhat", r.fhat}};
}

json to_json(const StationaryReport &r)
{
	return {{"max_abs_derivative", r.max_abs_derivative},
	        {"derivatives", r.derivatives}};
}

json to_json(const ConcavityReport &r)
{
	return {{"max_eigenvalue", r.max_eigenvalue},
	        {"all_negative", r.all_negative},
	        {"per_sample_max", r.per_sample_max},
	        {"curvature_gamma_rr", r.curvature_gamma_rr},
	        {"curvature_omega_pp", r.curvature_omega_pp}};
}

json to_json(const PsiValue &v)
{
	return {{"value", v.value},
	        {"value_paper_term", v.value_paper},
	        {"entropy", v.entropy},
	        {"kl_term", v.kl_term},
	        {"freezing_term", v.freezing_term},
	        {"O11", v.o_row[0]},
	        {"O10", v.o_row[1]},
	        {"O1star", v.o_row[2]},
	        {"feasible", v.feasible},
	        {"note", v.note}};
}

json to_json(const MiddleGroundScan &s)
{
	return {{"max_value", s.max_value}, {"argmax_y", s.argmax_y}, {"points", s.points}};
}

json to_json(const RegularThreshold &t)
{
	json curve = json::array();
	for (auto &[d, xi] : t.curve)
		curve.push_back({{"d", d}, {"xi", xi}});
	return {{"d_star", t.d_star},
	        {"found_sign_change", t.found_sign_change},
	        {"strictly_decreasing", t.strictly_decreasing},
	        {"curve", curve}};
}

json to_json(const Bicycle &b)
{
	json lits = json::array();
	for (auto l : b.lits)
		lits.push_back(l.to_dimacs());
	return lits;
}

std::string curve_csv(const std::vector<ThresholdCurvePoint> &curve)
{
	std::ostringstream ss;
	ss << "r,fraction,stderr\n";
	ss.precision(17);
	for (auto &p : curve)
		ss << p.r << ',' << p.fraction << ',' << p.stderr_ << '\n';
	return ss.str();
}

std::string curve_csv(const std::vector<std::pair<int, double>> &curve,
                      const std::string &xname, const std::string &yname)
{
	std::ostringstream ss;
	ss << xname << ',' << yname << '\n';
	ss.precision(17);
	for (auto &[x, y] : curve)
		ss << x << ',' << y << '\n';
	return ss.str();
}

} // namespace ksat
