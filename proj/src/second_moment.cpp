#include "ksat/moments.hpp"
#include "ksat/parallel.hpp"
#include "ksat/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ksat {

namespace {

double kl_cat(double a, double g) { return a == 0 ? 0.0 : a * std::log(a / g); }

// -------------------------------------------------------------------------
// clause-side implicit solver: per slot q = (pp, py, yp, yy), equations
// e^{pp/py/yp}(q; gamma) = omega^{pp/py/yp}
// -------------------------------------------------------------------------

struct ClauseWork {
	int kl = 0;
	std::vector<double> qpp, qpy, qyp, qyy, qy1, qy2, qp1, qp2;
	double Py1 = 1, Py2 = 1, Pyy = 1;

	void refresh(const std::vector<std::array<double, 4>> &q)
	{
		kl = (int)q.size();
		qpp.resize(kl);
		qpy.resize(kl);
		qyp.resize(kl);
		qyy.resize(kl);
		qy1.resize(kl);
		qy2.resize(kl);
		qp1.resize(kl);
		qp2.resize(kl);
		Py1 = Py2 = Pyy = 1;
		for (int j = 0; j < kl; ++j)
		{
			qpp[j] = q[j][0];
			qpy[j] = q[j][1];
			qyp[j] = q[j][2];
			qyy[j] = q[j][3];
			qy1[j] = qyp[j] + qyy[j]; // coord1 yellow
			qy2[j] = qpy[j] + qyy[j]; // coord2 yellow
			qp1[j] = qpp[j] + qpy[j];
			qp2[j] = qpp[j] + qyp[j];
			Py1 *= qy1[j];
			Py2 *= qy2[j];
			Pyy *= qyy[j];
		}
	}

	double ex1(int j) const { return Py1 / qy1[j]; }
	double ex2(int j) const { return Py2 / qy2[j]; }
	double exyy(int j) const { return Pyy / qyy[j]; }
	double ex1p(int j, int j2) const { return Py1 / (qy1[j] * qy1[j2]); }
	double ex2p(int j, int j2) const { return Py2 / (qy2[j] * qy2[j2]); }
	double exyyp(int j, int j2) const { return Pyy / (qyy[j] * qyy[j2]); }

	double grr(int j) const { return qpp[j] * exyy(j); }
	double gyy(int j, int j2) const { return qpy[j] * qyp[j2] * exyyp(j, j2); }
	double grc(int j) const { return qpp[j] * (ex1(j) - exyy(j)); }
	double gcr(int j) const { return qpp[j] * (ex2(j) - exyy(j)); }
	double gry(int j) const
	{
		double s = 0;
		for (int j2 = 0; j2 < kl; ++j2)
			if (j2 != j)
				s += qyp[j2] * exyyp(j, j2);
		return qpy[j] * (ex1(j) - exyy(j) - s);
	}
	double gyr(int j) const
	{
		double s = 0;
		for (int j2 = 0; j2 < kl; ++j2)
			if (j2 != j)
				s += qpy[j2] * exyyp(j, j2);
		return qyp[j] * (ex2(j) - exyy(j) - s);
	}
	double gcc() const
	{
		double s1 = 0, s2 = 0, syy = 0, a = 0, b = 0, ab2 = 0;
		for (int j = 0; j < kl; ++j)
		{
			s1 += qp1[j] * ex1(j);
			s2 += qp2[j] * ex2(j);
			syy += (1 - qyy[j]) * exyy(j);
			a += qpy[j] / qyy[j];
			b += qyp[j] / qyy[j];
			ab2 += qpy[j] * qyp[j] / (qyy[j] * qyy[j]);
		}
		return 1 - Py1 - s1 - Py2 - s2 + Pyy + syy + Pyy * (a * b - ab2);
	}

	// conditional slot means given the clause-category fractions
	void e_map(const GammaBlock &g, std::vector<std::array<double, 3>> &e) const
	{
		double cc = gcc();
		std::vector<double> grc_all(kl), gcr_all(kl), gry_all(kl), gyr_all(kl);
		for (int j = 0; j < kl; ++j)
		{
			grc_all[j] = grc(j);
			gcr_all[j] = gcr(j);
			gry_all[j] = gry(j);
			gyr_all[j] = gyr(j);
		}
		e.assign(kl, {0, 0, 0});
		for (int j = 0; j < kl; ++j)
		{
			double epp = g.slot[j][0] + g.slot[j][1] + g.slot[j][3] +
			             g.cc * qpp[j] / cc * (1 - ex2(j) - ex1(j) + exyy(j));

			double epy = g.slot[j][2];
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					epy += g.yy[j * kl + j2];
			{
				double scol = 0, srow = 0;
				for (int j2 = 0; j2 < kl; ++j2)
					if (j2 != j)
					{
						scol += qp2[j2] * ex2p(j, j2);
						srow += qyp[j2] * exyyp(j, j2);
					}
				epy += g.cc * qpy[j] / cc *
				       (1 - ex2(j) - ex1(j) - scol + exyy(j) + srow);
			}
			for (int j2 = 0; j2 < kl; ++j2)
			{
				if (j2 == j)
					continue;
				if (g.slot[j2][3] > 0)
					epy += g.slot[j2][3] * qpp[j2] * qpy[j] * ex2p(j, j2) /
					       gcr_all[j2];
				if (g.slot[j2][4] > 0)
					epy += g.slot[j2][4] * qyp[j2] * qpy[j] *
					       (ex2p(j, j2) - exyyp(j, j2)) / gyr_all[j2];
			}

			double eyp = g.slot[j][4];
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					eyp += g.yy[j2 * kl + j];
			{
				double scol = 0, srow = 0;
				for (int j2 = 0; j2 < kl; ++j2)
					if (j2 != j)
					{
						scol += qp1[j2] * ex1p(j, j2);
						srow += qpy[j2] * exyyp(j, j2);
					}
				eyp += g.cc * qyp[j] / cc *
				       (1 - ex1(j) - ex2(j) - scol + exyy(j) + srow);
			}
			for (int j2 = 0; j2 < kl; ++j2)
			{
				if (j2 == j)
					continue;
				if (g.slot[j2][1] > 0)
					eyp += g.slot[j2][1] * qpp[j2] * qyp[j] * ex1p(j, j2) /
					       grc_all[j2];
				if (g.slot[j2][2] > 0)
					eyp += g.slot[j2][2] * qpy[j2] * qyp[j] *
					       (ex1p(j, j2) - exyyp(j, j2)) / gry_all[j2];
			}
			e[j] = {epp, epy, eyp};
		}
	}
};

struct ClauseSolve {
	std::vector<std::array<double, 4>> q;
	double residual = HUGE_VAL;
	bool ok = false;
};

ClauseSolve solve_q_ell(const MClauseType &ct,
                        const std::vector<std::array<double, 4>> &target,
                        const GammaBlock &g, double tol, int max_iter = 500)
{
	ClauseSolve out;
	int kl = (int)ct.lj_r.size();
	out.q = target;
	ClauseWork w;
	std::vector<std::array<double, 3>> e;
	for (int it = 0; it < max_iter; ++it)
	{
		for (auto &qj : out.q)
		{
			for (int a = 0; a < 3; ++a)
				qj[a] = std::clamp(qj[a], 1e-14, 1.0 - 1e-14);
			qj[3] = 1 - qj[0] - qj[1] - qj[2];
			if (qj[3] < 1e-14)
				return out; // left the solvable region
		}
		w.refresh(out.q);
		w.e_map(g, e);
		double res = 0;
		for (int j = 0; j < kl; ++j)
			for (int a = 0; a < 3; ++a)
				res = std::max(res, std::abs(e[j][a] - target[j][a]));
		out.residual = res;
		if (res < tol)
		{
			out.ok = true;
			return out;
		}
		for (int j = 0; j < kl; ++j)
			for (int a = 0; a < 3; ++a)
				out.q[j][a] += target[j][a] - e[j][a];
	}
	return out;
}

// -------------------------------------------------------------------------
// occupancy-side implicit solver: per type q = (rr, rc, cr, ry, yr), uniform
// over clones
// -------------------------------------------------------------------------

struct OccSolve {
	double qrr = 0, qrc = 0, qcr = 0, qry = 0, qyr = 0;
	double s11 = 0, s1s = 0, ss1 = 0, sss = 0, s10 = 0, ss0 = 0, s01 = 0, s0s = 0;
	double residual = HUGE_VAL;
	bool ok = false;
};

OccSolve solve_q_t(double d, const std::array<double, 5> &target, double w11,
                   double w1s, double ws1, double w10, double w01, double tol,
                   int max_iter = 500)
{
	OccSolve o;
	o.qrr = target[0] / w11;
	o.qrc = target[1] / w11;
	o.qcr = target[2] / w11;
	o.qry = target[3] / w10;
	o.qyr = target[4] / w01;
	auto powd = [](double base, double e) {
		return std::exp(e * std::log1p(-base));
	};
	for (int it = 0; it < max_iter; ++it)
	{
		if (o.qrr <= 0 || o.qrc <= 0 || o.qcr <= 0 || o.qry <= 0 || o.qyr <= 0 ||
		    o.qrr + o.qrc + o.qcr > 1 - 1e-14 || o.qry > 1 - 1e-14 ||
		    o.qyr > 1 - 1e-14)
			return o;
		double A = powd(o.qrr + o.qrc, d); // coord2 never red on a pp-literal
		double B = powd(o.qrr + o.qcr, d); // coord1 never red
		double C = powd(o.qrr + o.qrc + o.qcr, d);
		double A1 = powd(o.qrr + o.qrc, d - 1);
		double B1 = powd(o.qrr + o.qcr, d - 1);
		o.s11 = 1 - A - B + C;
		o.s1s = B - C;
		o.ss1 = A - C;
		o.sss = C;
		o.s10 = -std::expm1(d * std::log1p(-o.qry));
		o.ss0 = 1 - o.s10;
		o.s01 = -std::expm1(d * std::log1p(-o.qyr));
		o.s0s = 1 - o.s01;

		double err = w11 * o.qrr / o.s11;
		double erc = w11 * o.qrc * (1 - B1) / o.s11 + w1s * o.qrc * B1 / o.s1s;
		double ecr = w11 * o.qcr * (1 - A1) / o.s11 + ws1 * o.qcr * A1 / o.ss1;
		double ery = w10 * o.qry / o.s10;
		double eyr = w01 * o.qyr / o.s01;

		double res = std::max({std::abs(err - target[0]), std::abs(erc - target[1]),
		                       std::abs(ecr - target[2]), std::abs(ery - target[3]),
		                       std::abs(eyr - target[4])});
		o.residual = res;
		if (res < tol)
		{
			o.ok = true;
			return o;
		}
		o.qrr += 0.7 * (target[0] - err) * o.s11 / w11;
		o.qrc += 0.7 * (target[1] - erc) /
		         (w11 * (1 - B1) / o.s11 + w1s * B1 / o.s1s);
		o.qcr += 0.7 * (target[2] - ecr) /
		         (w11 * (1 - A1) / o.s11 + ws1 * A1 / o.ss1);
		o.qry += 0.7 * (target[3] - ery) * o.s10 / w10;
		o.qyr += 0.7 * (target[4] - eyr) * o.s01 / w01;
	}
	return o;
}

} // namespace

SecondMomentResult second_moment_f(const MomentSystem &ms, const Overlap &ov,
                                   double tol)
{
	SecondMomentResult res;
	res.fhat = rough_bound_fhat(ms, ov);

	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		double h = 0;
		for (double v : ov.wt[t])
			h -= kl_cat(v, 1.0); // -v ln v
		res.f_ent += ms.lits[t].w * h;
	}

	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		double term = 0;
		for (size_t j = 0; j < ct.lj_r.size(); ++j)
		{
			const auto &w = ov.wt[ct.slot_type[j]];
			double col[4] = {w[4] + w[5] + w[7] + w[8], w[3] + w[6],
			                 w[1] + w[2], w[0]};
			for (int e = 0; e < 4; ++e)
				term += kl_cat(ov.wlj[c][j][e], col[e]);
		}
		res.f_disc -= ms.m_over_n * ct.w * term;
	}

	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		int kl = (int)ct.lj_r.size();
		auto sol = solve_q_ell(ct, ov.wlj[c], ov.gamma[c], tol);
		if (!sol.ok)
		{
			res.in_region = false;
			continue;
		}
		res.solver_residual = std::max(res.solver_residual, sol.residual);
		ClauseWork w;
		w.refresh(sol.q);
		double klg = kl_cat(ov.gamma[c].cc, w.gcc());
		for (int j = 0; j < kl; ++j)
		{
			klg += kl_cat(ov.gamma[c].slot[j][0], w.grr(j));
			klg += kl_cat(ov.gamma[c].slot[j][1], w.grc(j));
			klg += kl_cat(ov.gamma[c].slot[j][2], w.gry(j));
			klg += kl_cat(ov.gamma[c].slot[j][3], w.gcr(j));
			klg += kl_cat(ov.gamma[c].slot[j][4], w.gyr(j));
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					klg += kl_cat(ov.gamma[c].yy[j * kl + j2], w.gyy(j, j2));
		}
		double klq = 0;
		for (int j = 0; j < kl; ++j)
			for (int e = 0; e < 4; ++e)
				klq += kl_cat(ov.wlj[c][j][e], sol.q[j][e]);
		res.f_val += ms.m_over_n * ct.w * (-klg + klq);
	}

	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const MLitType &lt = ms.lits[t];
		const auto &w = ov.wt[t];
		double w11 = w[4], w1s = w[5], ws1 = w[7], wss = w[8];
		double w10 = w[3], w01 = w[1], w0s = w[2], ws0 = w[6];
		double wpy = w10 + ws0, wyp = w01 + w0s;
		// the e-map denominators are the literal-level masses: star-side
		// literals are forced cyan, so only (1,0)/(0,1) literals can carry a
		// red clone in the ry/yr channels
		auto sol = solve_q_t(lt.d, ov.wth[t], w11, w1s, ws1, w10, w01, tol);
		if (!sol.ok)
		{
			res.in_region = false;
			continue;
		}
		res.solver_residual = std::max(res.solver_residual, sol.residual);
		double term = w11 * std::log(sol.s11) + w1s * std::log(sol.s1s) +
		              ws1 * std::log(sol.ss1) + wss * std::log(sol.sss) +
		              w10 * std::log(sol.s10) + ws0 * std::log(sol.ss0) +
		              w01 * std::log(sol.s01) + w0s * std::log(sol.s0s);
		double wpp = w11 + w1s + ws1 + wss;
		const auto &th = ov.wth[t];
		double a_rr = th[0] / wpp, a_rc = th[1] / wpp, a_cr = th[2] / wpp;
		double a4 = 1 - a_rr - a_rc - a_cr;
		double q4 = 1 - sol.qrr - sol.qrc - sol.qcr;
		double kl4 = kl_cat(a_rr, sol.qrr) + kl_cat(a_rc, sol.qrc) +
		             kl_cat(a_cr, sol.qcr) + kl_cat(a4, q4);
		double klsum = wpy * kl2(th[3] / wpy, sol.qry) +
		               wyp * kl2(th[4] / wyp, sol.qyr) + wpp * kl4;
		// per-literal log-probabilities enter the 1/n rate with weight
		// n_t/n = 2 pi_t, exactly as in the first moment
		res.f_occ += 2 * lt.w * (term + lt.d * klsum);
	}

	res.f = res.f_ent + res.f_disc + res.f_val + res.f_occ;
	return res;
}

double rough_bound_fhat(const MomentSystem &ms, const Overlap &ov)
{
	double fhat = 0;
	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		double h = 0;
		for (double v : ov.wt[t])
			h -= kl_cat(v, 1.0);
		fhat += ms.lits[t].w * h;
	}
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		double prod_ly = 1, prod_yy = 1;
		for (size_t j = 0; j < ct.lj_r.size(); ++j)
		{
			prod_ly *= ct.lj_y[j];
			prod_yy *= ov.wlj[c][j][3];
		}
		double arg = 1 - 2 * prod_ly + prod_yy;
		if (arg <= 0)
			throw std::domain_error("rough_bound_fhat: log argument <= 0");
		fhat += ms.m_over_n * ct.w * std::log(arg);
	}
	return fhat;
}

// ---------------------------------------------------------------------------
// derivative checks on the feasible subspace
// ---------------------------------------------------------------------------

namespace {

struct Evaluator {
	const MomentSystem &ms;
	FeasibleSpace fs;
	std::vector<double> xbar;

	explicit Evaluator(const MomentSystem &m) : ms(m), fs(feasible_space(m))
	{
		xbar = pack_overlap(ms, product_overlap(ms));
	}

	std::vector<double> at(const std::vector<double> &coef) const
	{
		std::vector<double> x = xbar;
		for (int i = 0; i < fs.dim; ++i)
		{
			if (coef[i] == 0)
				continue;
			for (int j = 0; j < fs.coords; ++j)
				x[j] += coef[i] * fs.basis[i][j] * fs.scale[j];
		}
		return x;
	}

	double f(const std::vector<double> &coef) const
	{
		Overlap ov = unpack_overlap(ms, at(coef));
		return second_moment_f(ms, ov, 1e-13).f;
	}
};

// The paper's tame windows carry unspecified O_k constants; with the literal
// k^{-9} half-width even the product point falls outside TM1 at finite k
// (its yellow-yellow mass is 1/4 - Theta(2^{-k})). The sampler therefore
// centers every window at the product overlap, with a k^{-5} absolute
// half-width for the slot masses and the stated relative 2^{-k/4} windows
// for the clause-category masses.
bool is_tame(const MomentSystem &ms, const Overlap &ov, const Overlap &base)
{
	int k = ms.k;
	double rel = std::pow(2.0, -0.25 * k);
	double tm1 = std::pow((double)k, -5.0);
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		for (int j = 0; j < kl; ++j)
		{
			if (std::abs(ov.wlj[c][j][3] - base.wlj[c][j][3]) > tm1)
				return false;
			auto near = [&](double v, double b) {
				return std::abs(v - b) <= rel * std::abs(b);
			};
			if (!near(ov.gamma[c].slot[j][0], base.gamma[c].slot[j][0]) ||
			    !near(ov.gamma[c].slot[j][1], base.gamma[c].slot[j][1]) ||
			    !near(ov.gamma[c].slot[j][3], base.gamma[c].slot[j][3]))
				return false;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j &&
				    !near(ov.gamma[c].yy[j * kl + j2], base.gamma[c].yy[j * kl + j2]))
					return false;
		}
	}
	return true;
}

// second difference along the projection of a raw coordinate axis
double coordinate_curvature(const Evaluator &ev, int coord, double h_step)
{
	std::vector<double> dir(ev.fs.dim, 0.0);
	double norm = 0;
	for (int i = 0; i < ev.fs.dim; ++i)
	{
		dir[i] = ev.fs.basis[i][coord];
		norm += dir[i] * dir[i];
	}
	if (norm < 1e-24)
		return 0;
	norm = std::sqrt(norm);
	for (auto &d : dir)
		d /= norm;
	std::vector<double> c(ev.fs.dim, 0.0);
	double f0 = ev.f(c);
	for (int i = 0; i < ev.fs.dim; ++i)
		c[i] = h_step * dir[i];
	double fp = ev.f(c);
	for (int i = 0; i < ev.fs.dim; ++i)
		c[i] = -h_step * dir[i];
	double fm = ev.f(c);
	return (fp - 2 * f0 + fm) / (h_step * h_step);
}

} // namespace

StationaryReport check_stationary(const MomentSystem &ms, double h_step)
{
	Evaluator ev(ms);
	StationaryReport rep;
	rep.derivatives.assign(ev.fs.dim, 0.0);
	parallel_chunks(ev.fs.dim, [&](int64_t lo, int64_t hi, int) {
		for (int64_t i = lo; i < hi; ++i)
		{
			std::vector<double> c(ev.fs.dim, 0.0);
			c[i] = h_step;
			double fp = ev.f(c);
			c[i] = -h_step;
			double fm = ev.f(c);
			rep.derivatives[i] = (fp - fm) / (2 * h_step);
		}
	});
	for (double d : rep.derivatives)
		rep.max_abs_derivative = std::max(rep.max_abs_derivative, std::abs(d));
	return rep;
}

ConcavityReport check_concavity(const MomentSystem &ms, int n_samples,
                                double radius, uint64_t seed, double h_step)
{
	Evaluator ev(ms);
	int dim = ev.fs.dim;
	ConcavityReport rep;
	Overlap base = product_overlap(ms);

	Rng rng(seed);
	std::vector<std::vector<double>> centers;
	centers.push_back(std::vector<double>(dim, 0.0)); // the product point itself
	int attempts = 0;
	while ((int)centers.size() < n_samples + 1 && attempts++ < 50 * n_samples)
	{
		std::vector<double> c(dim);
		for (auto &x : c)
			x = radius * (2 * rng.real() - 1);
		bool good = false;
		for (int tries = 0; tries < 60 && !good; ++tries)
		{
			Overlap ov = unpack_overlap(ms, ev.at(c));
			if (is_tame(ms, ov, base))
				good = true;
			else
				for (auto &x : c)
					x *= 0.5;
		}
		if (good)
			centers.push_back(c);
	}

	rep.per_sample_max.assign(centers.size(), 0.0);
	std::mutex mu;
	parallel_chunks((int64_t)centers.size(), [&](int64_t lo, int64_t hi, int) {
		for (int64_t s = lo; s < hi; ++s)
		{
			const std::vector<double> &c0 = centers[s];
			Eigen::MatrixXd H(dim, dim);
			double f0 = ev.f(c0);
			std::vector<double> c = c0;
			for (int i = 0; i < dim; ++i)
			{
				c[i] = c0[i] + h_step;
				double fp = ev.f(c);
				c[i] = c0[i] - h_step;
				double fm = ev.f(c);
				c[i] = c0[i];
				H(i, i) = (fp - 2 * f0 + fm) / (h_step * h_step);
			}
			for (int i = 0; i < dim; ++i)
				for (int j = i + 1; j < dim; ++j)
				{
					c[i] = c0[i] + h_step;
					c[j] = c0[j] + h_step;
					double fpp = ev.f(c);
					c[j] = c0[j] - h_step;
					double fpm = ev.f(c);
					c[i] = c0[i] - h_step;
					double fmm = ev.f(c);
					c[j] = c0[j] + h_step;
					double fmp = ev.f(c);
					c[i] = c0[i];
					c[j] = c0[j];
					H(i, j) = H(j, i) =
					    (fpp - fpm - fmp + fmm) / (4 * h_step * h_step);
				}
			Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
			double mx = es.eigenvalues().maxCoeff();
			std::lock_guard<std::mutex> g(mu);
			rep.per_sample_max[s] = mx;
			rep.max_eigenvalue = std::max(rep.max_eigenvalue, mx);
			if (mx >= 0)
				rep.all_negative = false;
		}
	});

	rep.curvature_gamma_rr =
	    coordinate_curvature(ev, overlap_coord_gamma_rr(ms, 0, 0), h_step);
	rep.curvature_omega_pp =
	    coordinate_curvature(ev, overlap_coord_wlj(ms, 0, 0, 0), h_step);
	return rep;
}

} // namespace ksat
