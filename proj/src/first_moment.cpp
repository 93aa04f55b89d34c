#include "ksat/moments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ksat {

MomentSystem regular_system(int k, int d)
{
	if (k < 3 || d < 1)
		throw std::invalid_argument("regular_system: bad parameters");
	MomentSystem ms;
	ms.k = k;
	ms.m_over_n = 2.0 * d / k;

	double ts = std::ldexp(1.0, -k - 1);
	double t1 = 0.5 - std::ldexp(1.0, -k - 2);
	double t0 = t1;
	double th_r = (t1 + ts) * std::pow(t0, k - 1);

	MLitType t;
	t.w = 1;
	t.t1 = t1;
	t.t0 = t0;
	t.ts = ts;
	t.d = d;
	t.uniform = true;
	t.th_r = {th_r};
	t.neg_type = 0; // self-paired
	ms.lits.push_back(t);

	MClauseType c;
	c.w = 1;
	c.lj_r.assign(k, th_r);
	c.lj_y.assign(k, t0);
	c.slot_type.assign(k, 0);
	c.slot_clone.assign(k, -1);
	ms.clauses.push_back(c);

	ms.has_polylog = true;
	ms.pair_classes = 1;
	ms.sum_k_ell_half = 0.5 * k;
	ms.sum_incidence_half = 0.5 * d * (k - 1);
	return ms;
}

MomentSystem moment_system(const TypeSystem &ts)
{
	MomentSystem ms;
	ms.k = ts.k;
	int64_t clones = 0;
	for (auto &ct : ts.clause_types)
		clones += ct.count * (int64_t)ct.slots.size();
	ms.m_over_n = ts.n_vars > 0 ? (double)ts.n_clauses / (double)ts.n_vars : 0.0;

	for (auto &lt : ts.lit_types)
	{
		MLitType t;
		t.w = to_double(lt.weight);
		t.t1 = to_double(lt.sig.p1);
		t.t0 = to_double(lt.sig.p0);
		t.ts = to_double(lt.sig.ps);
		t.d = (double)lt.d_pos;
		t.uniform = false;
		for (auto &c : lt.clones)
			t.th_r.push_back(to_double(c.r));
		if (t.th_r.empty())
		{
			t.uniform = true;
			t.th_r = {0.0};
		}
		t.neg_type = lt.neg_type;
		ms.lits.push_back(std::move(t));
	}
	for (auto &ct : ts.clause_types)
	{
		MClauseType c;
		c.w = to_double(ct.weight);
		for (auto &slot : ct.slots)
		{
			c.lj_r.push_back(to_double(slot.dist.r));
			c.lj_y.push_back(to_double(slot.dist.y));
			c.slot_type.push_back(slot.lit_type);
			c.slot_clone.push_back(slot.clone);
		}
		ms.clauses.push_back(std::move(c));
	}

	// polylog counts
	ms.has_polylog = true;
	std::vector<bool> seen(ts.lit_types.size(), false);
	for (int t = 0; t < (int)ts.lit_types.size(); ++t)
	{
		if (seen[t])
			continue;
		seen[t] = true;
		int nt = ts.lit_types[t].neg_type;
		if (nt >= 0 && nt < (int)ts.lit_types.size())
			seen[nt] = true;
		ms.pair_classes += 1;
	}
	// |d(t,h)| counts the distinct (ell, j) pairs attached to each clone slot
	std::map<std::pair<int, int>, int> distinct;
	for (auto &ct : ts.clause_types)
	{
		ms.sum_k_ell_half += 0.5 * (double)ct.slots.size();
		for (auto &slot : ct.slots)
			distinct[{slot.lit_type, slot.clone}]++;
	}
	for (auto &[key, cnt] : distinct)
		ms.sum_incidence_half += 0.5 * (cnt - 1);
	return ms;
}

// ---------------------------------------------------------------------------
// Gauss rules on discrete measures (Stieltjes + Golub-Welsch)
// ---------------------------------------------------------------------------

namespace {

struct GaussRule {
	std::vector<double> x, w;
};

GaussRule gauss_from_discrete(const std::vector<double> &xs,
                              const std::vector<double> &ws, int m)
{
	size_t n = xs.size();
	double mass = std::accumulate(ws.begin(), ws.end(), 0.0);
	double mean = 0;
	for (size_t i = 0; i < n; ++i)
		mean += ws[i] * xs[i];
	mean /= mass;
	double var = 0;
	for (size_t i = 0; i < n; ++i)
		var += ws[i] * (xs[i] - mean) * (xs[i] - mean);
	var /= mass;
	double sd = var > 0 ? std::sqrt(var) : 1.0;

	// a discrete measure supports at most n distinct nodes
	m = std::min<int>(m, (int)n);

	// three-term recurrence on standardized coordinates
	std::vector<double> pj(n, 1.0), pjm1(n, 0.0);
	std::vector<double> alpha(m), beta(m); // beta[0] = total mass
	beta[0] = mass;
	double norm_j = mass, norm_jm1 = 1.0;
	for (int j = 0; j < m; ++j)
	{
		double a = 0;
		for (size_t i = 0; i < n; ++i)
		{
			double t = (xs[i] - mean) / sd;
			a += ws[i] * t * pj[i] * pj[i];
		}
		alpha[j] = a / norm_j;
		if (j + 1 < m)
		{
			std::vector<double> pn(n);
			double norm_n = 0;
			for (size_t i = 0; i < n; ++i)
			{
				double t = (xs[i] - mean) / sd;
				pn[i] = (t - alpha[j]) * pj[i] -
				        (j > 0 ? (norm_j / norm_jm1) * pjm1[i] : 0.0);
				norm_n += ws[i] * pn[i] * pn[i];
			}
			beta[j + 1] = norm_n / norm_j;
			pjm1.swap(pj);
			pj.swap(pn);
			norm_jm1 = norm_j;
			norm_j = norm_n;
		}
	}

	Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
	for (int j = 0; j < m; ++j)
	{
		J(j, j) = alpha[j];
		if (j + 1 < m)
			J(j, j + 1) = J(j + 1, j) = std::sqrt(beta[j + 1]);
	}
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
	GaussRule rule;
	for (int i = 0; i < m; ++i)
	{
		rule.x.push_back(mean + sd * es.eigenvalues()(i));
		double v0 = es.eigenvectors()(0, i);
		rule.w.push_back(beta[0] * v0 * v0);
	}
	return rule;
}

} // namespace

MomentSystem moment_system(const PoissonEnsemble &e, int nodes)
{
	MomentSystem ms;
	ms.k = e.k;
	ms.m_over_n = e.r;
	ms.truncation_error = e.truncation_mass;
	ms.has_polylog = false;

	int k = e.k;
	double ts_mass = std::ldexp(1.0, -k - 1);
	auto theta0 = [&](double delta) {
		return 0.5 - std::ldexp(1.0, -k - 2) - std::ldexp(1.0, -k - 1) * delta;
	};

	// literal pseudo-types: 2-d tensor Gauss rule on the degree measure.
	// Node pairs whose degree gap leaves the signature domain carry mass far
	// below double precision; they are dropped, reported, and the weights
	// renormalized.
	std::vector<double> supp, w;
	for (int64_t d = e.d_lo; d <= e.d_hi; ++d)
	{
		supp.push_back((double)d);
		w.push_back(e.prob(d));
	}
	GaussRule lit_rule = gauss_from_discrete(supp, w, nodes);
	double sk1 = std::pow(e.s, k - 1);
	double kept_mass = 0;
	for (size_t a = 0; a < lit_rule.x.size(); ++a)
		for (size_t b = 0; b < lit_rule.x.size(); ++b)
		{
			double dpos = lit_rule.x[a], dneg = lit_rule.x[b];
			double delta = dpos - dneg;
			MLitType t;
			t.w = lit_rule.w[a] * lit_rule.w[b];
			t.t0 = theta0(delta);
			t.ts = ts_mass;
			t.t1 = 1.0 - t.t0 - t.ts;
			if (t.t0 < 1e-9 || t.t1 < 1e-9 || t.w < 1e-16)
			{
				ms.truncation_error += std::max(t.w, 0.0);
				continue;
			}
			kept_mass += t.w;
			t.d = dpos;
			t.uniform = true;
			t.th_r = {(1.0 - t.t0) * sk1};
			t.neg_type = -1; // pairing is not tracked for pseudo-types
			ms.lits.push_back(t);
		}
	for (auto &t : ms.lits)
		t.w /= kept_mass;

	// clause pseudo-types: weighted multisets over Gauss nodes of the
	// size-biased yellow-mass measure
	std::vector<double> dsupp, dw;
	int64_t width = e.d_hi - e.d_lo;
	for (int64_t delta = -width; delta <= width; ++delta)
	{
		double p = 0;
		for (int64_t dpos = e.d_lo; dpos <= e.d_hi; ++dpos)
		{
			int64_t dneg = dpos - delta;
			if (dneg < e.d_lo || dneg > e.d_hi)
				continue;
			p += (double)dpos * e.prob(dpos) * e.prob(dneg);
		}
		if (p > 0)
		{
			dsupp.push_back((double)delta);
			dw.push_back(p / e.mean);
		}
	}
	GaussRule slot_rule = gauss_from_discrete(dsupp, dw, nodes);
	std::vector<double> ynode, ywt;
	double ymass = 0;
	for (size_t i = 0; i < slot_rule.x.size(); ++i)
	{
		double y = theta0(slot_rule.x[i]);
		if (y < 1e-6 || y > 1 - 1e-6 || slot_rule.w[i] < 1e-16)
		{
			ms.truncation_error += std::max(slot_rule.w[i], 0.0);
			continue;
		}
		ynode.push_back(y);
		ywt.push_back(slot_rule.w[i]);
		ymass += slot_rule.w[i];
	}
	for (auto &wy : ywt)
		wy /= ymass;

	int m = (int)ynode.size();
	std::vector<int> counts(m, 0);
	double kfact = std::tgamma((double)k + 1.0);
	double clause_mass = 0;
	std::function<void(int, int)> emit = [&](int node, int left) {
		if (node == m - 1)
		{
			counts[node] = left;
			double weight = kfact;
			for (int i = 0; i < m; ++i)
			{
				weight /= std::tgamma((double)counts[i] + 1.0);
				weight *= std::pow(ywt[i], counts[i]);
			}
			counts[node] = 0;
			if (weight < 1e-16)
			{
				ms.truncation_error += std::max(weight, 0.0);
				return;
			}
			counts[node] = left;
			MClauseType c;
			c.w = weight;
			clause_mass += weight;
			double prod_y = 1;
			for (int i = 0; i < m; ++i)
				for (int rep = 0; rep < counts[i]; ++rep)
				{
					c.lj_y.push_back(ynode[i]);
					prod_y *= ynode[i];
				}
			for (int j = 0; j < k; ++j)
				c.lj_r.push_back((1.0 - c.lj_y[j]) * prod_y / c.lj_y[j]);
			c.slot_type.assign(k, -1);
			c.slot_clone.assign(k, -1);
			ms.clauses.push_back(std::move(c));
			counts[node] = 0;
			return;
		}
		for (int take = 0; take <= left; ++take)
		{
			counts[node] = take;
			emit(node + 1, left - take);
			counts[node] = 0;
		}
	};
	emit(0, k);
	for (auto &c : ms.clauses)
		c.w /= clause_mass;
	return ms;
}

// ---------------------------------------------------------------------------
// fixed points
// ---------------------------------------------------------------------------

namespace {

// s_t = 1 - prod_h (1 - q_h), stable for uniform clones
double survive(const MLitType &t, const std::vector<double> &q)
{
	if (t.uniform)
		return -std::expm1(t.d * std::log1p(-q[0]));
	double logp = 0;
	for (double x : q)
		logp += std::log1p(-x);
	return -std::expm1(logp);
}

// g^c and the e^p map of the clause fixed point
struct ClauseFp {
	const MClauseType &ct;
	double sum_lr = 0;

	explicit ClauseFp(const MClauseType &c) : ct(c)
	{
		for (double r : c.lj_r)
			sum_lr += r;
	}

	// products prod_{j' != j} (1 - q_{j'})
	std::vector<double> excl_products(const std::vector<double> &q) const
	{
		size_t kl = q.size();
		std::vector<double> pre(kl + 1, 1.0), post(kl + 1, 1.0), out(kl);
		for (size_t j = 0; j < kl; ++j)
			pre[j + 1] = pre[j] * (1 - q[j]);
		for (size_t j = kl; j-- > 0;)
			post[j] = post[j + 1] * (1 - q[j]);
		for (size_t j = 0; j < kl; ++j)
			out[j] = pre[j] * post[j + 1];
		return out;
	}

	double g_c(const std::vector<double> &q, const std::vector<double> &pj) const
	{
		size_t kl = q.size();
		double all = pj[0] * (1 - q[0]);
		double g = 1 - all;
		for (size_t j = 0; j < kl; ++j)
			g -= q[j] * pj[j];
		return g;
	}

	double e_p(size_t j, const std::vector<double> &q, const std::vector<double> &pj,
	           double gc) const
	{
		return ct.lj_r[j] + q[j] / gc * (1 - sum_lr) * (1 - pj[j]);
	}
};

} // namespace

FirstMomentParams solve_first_moment(const MomentSystem &ms, double tol, int max_iter)
{
	FirstMomentParams p;
	p.q_r.resize(ms.lits.size());
	p.q_p.resize(ms.clauses.size());
	int worst_iters = 0;

	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const MLitType &lt = ms.lits[t];
		std::vector<double> q(lt.th_r.size());
		for (size_t h = 0; h < q.size(); ++h)
			q[h] = std::clamp(lt.th_r[h] / std::max(lt.t1, 1e-300), 1e-15, 1 - 1e-15);
		int it = 0;
		for (; it < max_iter; ++it)
		{
			double s = survive(lt, q);
			double res = 0;
			for (size_t h = 0; h < q.size(); ++h)
			{
				double target = lt.th_r[h] * s / lt.t1;
				res = std::max(res, std::abs(lt.t1 * q[h] / s - lt.th_r[h]));
				q[h] = 0.5 * q[h] + 0.5 * std::clamp(target, 1e-300, 1.0 - 1e-15);
			}
			if (res < tol * 0.1)
				break;
		}
		// Newton polish on the uniform scalar equation
		if (lt.uniform)
			for (int n = 0; n < 4; ++n)
			{
				double s = survive(lt, q);
				double g = lt.t1 * q[0] - lt.th_r[0] * s;
				double ds = lt.d * std::exp((lt.d - 1) * std::log1p(-q[0]));
				double gp = lt.t1 - lt.th_r[0] * ds;
				q[0] -= g / gp;
			}
		worst_iters = std::max(worst_iters, it);
		p.q_r[t] = std::move(q);
	}

	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		ClauseFp fp(ct);
		size_t kl = ct.lj_r.size();
		std::vector<double> q(kl);
		double shift = std::ldexp(1.0, -(int)kl - 1);
		for (size_t j = 0; j < kl; ++j)
			q[j] = std::clamp(1 - ct.lj_y[j] - shift, 1e-12, 1 - 1e-12);
		int it = 0;
		double best_res = HUGE_VAL;
		int since_best = 0;
		for (; it < max_iter; ++it)
		{
			auto pj = fp.excl_products(q);
			double gc = fp.g_c(q, pj);
			double res = 0;
			for (size_t j = 0; j < kl; ++j)
			{
				double lp = 1 - ct.lj_y[j];
				res = std::max(res, std::abs(fp.e_p(j, q, pj, gc) - lp));
				double target = (lp - ct.lj_r[j]) * gc / ((1 - fp.sum_lr) * (1 - pj[j]));
				q[j] = 0.5 * q[j] + 0.5 * std::clamp(target, 1e-12, 1.0 - 1e-12);
			}
			if (res < tol * 0.1)
				break;
			// infeasible targets stall with the iterate pinned at a boundary
			if (res < best_res * (1 - 1e-9))
			{
				best_res = res;
				since_best = 0;
			}
			else if (++since_best > 200)
				break;
		}
		// per-coordinate Newton polish with numeric derivatives
		for (int n = 0; n < 3; ++n)
			for (size_t j = 0; j < kl; ++j)
			{
				auto pj = fp.excl_products(q);
				double gc = fp.g_c(q, pj);
				double lp = 1 - ct.lj_y[j];
				double g0 = fp.e_p(j, q, pj, gc) - lp;
				double h = 1e-7;
				std::vector<double> q2 = q;
				q2[j] += h;
				auto pj2 = fp.excl_products(q2);
				double gc2 = fp.g_c(q2, pj2);
				double g1 = fp.e_p(j, q2, pj2, gc2) - lp;
				double deriv = (g1 - g0) / h;
				if (std::abs(deriv) > 1e-8)
					q[j] = std::clamp(q[j] - g0 / deriv, 1e-12, 1.0 - 1e-12);
			}
		worst_iters = std::max(worst_iters, it);
		p.q_p[c] = std::move(q);
	}

	p.iterations = worst_iters;
	p.residual = first_moment_residual(ms, p);
	p.converged = p.residual <= tol;
	return p;
}

double first_moment_residual(const MomentSystem &ms, const FirstMomentParams &p)
{
	double res = 0;
	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const MLitType &lt = ms.lits[t];
		double s = survive(lt, p.q_r[t]);
		for (size_t h = 0; h < p.q_r[t].size(); ++h)
			res = std::max(res, std::abs(lt.t1 * p.q_r[t][h] / s - lt.th_r[h]));
	}
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		ClauseFp fp(ct);
		auto pj = fp.excl_products(p.q_p[c]);
		double gc = fp.g_c(p.q_p[c], pj);
		for (size_t j = 0; j < ct.lj_r.size(); ++j)
			res = std::max(res,
			               std::abs(fp.e_p(j, p.q_p[c], pj, gc) - (1 - ct.lj_y[j])));
	}
	return res;
}

namespace {

// F_val for one clause type at its fixed point
double validity_term(const MClauseType &ct, const std::vector<double> &q)
{
	ClauseFp fp(ct);
	auto pj = fp.excl_products(q);
	double gc = fp.g_c(q, pj);
	size_t kl = ct.lj_r.size();
	double head = 0;
	for (size_t j = 0; j < kl; ++j)
	{
		double gr = q[j] * pj[j];
		head += xlogy(ct.lj_r[j], ct.lj_r[j] / gr);
	}
	double rest = 1 - fp.sum_lr;
	head += xlogy(rest, rest / gc);
	double tail = 0;
	for (size_t j = 0; j < kl; ++j)
	{
		double lp = 1 - ct.lj_y[j];
		tail += kl2(lp, q[j]);
	}
	return -head + tail;
}

// occupancy term of one literal type; lemma variant carries the (t^1+t^*)
// prefactor on the clone KL, fig1 variant drops it
std::pair<double, double> occupancy_term(const MLitType &lt,
                                         const std::vector<double> &q)
{
	double s = survive(lt, q);
	if (!(s > 0 && s < 1))
		throw std::domain_error("first_moment_rate: s_t outside (0,1)");
	double tp = lt.t1 + lt.ts;
	double base = lt.t1 * std::log(s) + lt.ts * std::log1p(-s);
	double klsum = 0;
	if (lt.uniform)
		klsum = lt.d * kl2(lt.th_r[0] / tp, q[0]);
	else
		for (size_t h = 0; h < q.size(); ++h)
			klsum += kl2(lt.th_r[h] / tp, q[h]);
	return {2 * (base + tp * klsum), 2 * (base + klsum)};
}

} // namespace

RateResult first_moment_rate(const MomentSystem &ms, const FirstMomentParams &p)
{
	RateResult r;
	r.residual = p.residual;
	r.truncation_error = ms.truncation_error;
	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const MLitType &lt = ms.lits[t];
		r.entropy += lt.w * entropy3(lt.t0, lt.t1, lt.ts);
		auto [lemma, fig1] = occupancy_term(lt, p.q_r[t]);
		r.occupancy += lt.w * lemma;
		r.occupancy_fig1 += lt.w * fig1;
	}
	for (size_t c = 0; c < ms.clauses.size(); ++c)
		r.validity_sum += ms.clauses[c].w * validity_term(ms.clauses[c], p.q_p[c]);
	r.validity = ms.m_over_n * r.validity_sum;
	r.rate = r.entropy + r.occupancy + r.validity;
	if (ms.has_polylog)
		r.polylog_C = ms.pair_classes + ms.sum_k_ell_half + ms.sum_incidence_half;
	return r;
}

RateResult first_moment_rate(const MomentSystem &ms, double tol)
{
	FirstMomentParams p = solve_first_moment(ms, tol);
	return first_moment_rate(ms, p);
}

AsymptoticTable asymptotic_terms(int k, double r)
{
	if (k < 6)
		throw std::invalid_argument("asymptotic_terms: k must be >= 6");
	PoissonEnsemble e = poisson_type_ensemble(k, r);
	MomentSystem ms = moment_system(e);
	AsymptoticTable tab;
	tab.rate = first_moment_rate(ms);

	double p2k = std::ldexp(1.0, -k);
	double tol32 = (double)k * k * k * std::pow(2.0, -1.5 * k);
	double tol52 = (double)k * k * k * std::pow(2.0, -2.5 * k) + e.truncation_mass;

	auto add = [&](const std::string &name, double computed, double claimed,
	               double tol) {
		AsymptoticRow row;
		row.name = name;
		row.computed = computed;
		row.claimed = claimed;
		row.deviation = std::abs(computed - claimed);
		row.tolerance = tol;
		row.ok = row.deviation <= tol;
		tab.rows.push_back(row);
	};
	add("entropy", tab.rate.entropy, M_LN2 + 0.5 * p2k, tol32);
	add("occupancy", tab.rate.occupancy, -p2k - k * p2k * M_LN2, tol32);
	add("validity", tab.rate.validity_sum, -p2k + k * 0.5 * p2k * p2k, tol52);
	return tab;
}

} // namespace ksat
