#include "ksat/moments.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ksat {

namespace {

// packed layout: per lit type 9 wt entries, then per clause type and slot the
// 4 wlj entries, then per clause type the gamma block
// (5 per slot, k(k-1) ordered yy pairs, cc)
struct Layout {
	std::vector<int> wt_off, wlj_off, gamma_off;
	int coords = 0;

	explicit Layout(const MomentSystem &ms)
	{
		for (size_t t = 0; t < ms.lits.size(); ++t)
		{
			wt_off.push_back(coords);
			coords += 9;
		}
		for (size_t c = 0; c < ms.clauses.size(); ++c)
		{
			wlj_off.push_back(coords);
			coords += 4 * (int)ms.clauses[c].lj_r.size();
		}
		for (size_t c = 0; c < ms.clauses.size(); ++c)
		{
			gamma_off.push_back(coords);
			int kl = (int)ms.clauses[c].lj_r.size();
			coords += 5 * kl + kl * (kl - 1) + 1;
		}
	}

	int wt(int t, int z1, int z2) const { return wt_off[t] + 3 * z1 + z2; }
	int wlj(int c, int j, int e) const { return wlj_off[c] + 4 * j + e; }
	int gslot(const MomentSystem &ms, int c, int j, int e) const
	{
		return gamma_off[c] + 5 * j + e;
	}
	int gyy(const MomentSystem &ms, int c, int j, int j2) const
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		int idx = j * (kl - 1) + (j2 < j ? j2 : j2 - 1);
		return gamma_off[c] + 5 * kl + idx;
	}
	int gcc(const MomentSystem &ms, int c) const
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		return gamma_off[c] + 5 * kl + kl * (kl - 1);
	}
};

void require_uniform(const MomentSystem &ms)
{
	for (auto &t : ms.lits)
		if (!t.uniform)
			throw std::invalid_argument(
			    "overlap machinery expects clone-uniform type systems "
			    "(regular or ensemble)");
	for (auto &c : ms.clauses)
		for (int t : c.slot_type)
			if (t < 0)
				throw std::invalid_argument(
				    "overlap machinery needs slot-to-type incidence");
}

} // namespace

void refresh_clone_level(const MomentSystem &ms, Overlap &ov)
{
	ov.wth.assign(ms.lits.size(), {0, 0, 0, 0, 0});
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		int kl = (int)ct.lj_r.size();
		for (int j = 0; j < kl; ++j)
		{
			int t = ct.slot_type[j];
			if (t < 0)
				continue;
			double coef = ct.w * ms.m_over_n /
			              (2.0 * ms.lits[t].d * ms.lits[t].w);
			auto &g = ov.gamma[c];
			double yy_row = 0, yy_col = 0;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
				{
					yy_row += g.yy[j * kl + j2];
					yy_col += g.yy[j2 * kl + j];
				}
			// slot entries: rr, rc, ry, cr, yr
			ov.wth[t][0] += coef * g.slot[j][0];
			ov.wth[t][1] += coef * g.slot[j][1];
			ov.wth[t][2] += coef * g.slot[j][3];          // cr
			ov.wth[t][3] += coef * (g.slot[j][2] + yy_row); // ry + row of yy
			ov.wth[t][4] += coef * (g.slot[j][4] + yy_col); // yr + column of yy
		}
	}
}

Overlap product_overlap(const MomentSystem &ms)
{
	require_uniform(ms);
	Overlap ov;
	for (auto &t : ms.lits)
	{
		double tz[3] = {t.t0, t.t1, t.ts};
		std::array<double, 9> w;
		for (int a = 0; a < 3; ++a)
			for (int b = 0; b < 3; ++b)
				w[3 * a + b] = tz[a] * tz[b];
		ov.wt.push_back(w);
	}
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		int kl = (int)ct.lj_r.size();
		std::vector<std::array<double, 4>> slots;
		for (int j = 0; j < kl; ++j)
		{
			// slot-level values are the 2x2 collapse of the literal-level
			// block, so the discrepancy term vanishes identically at the
			// product point
			const auto &w = ov.wt[ct.slot_type[j]];
			double pp = w[4] + w[5] + w[7] + w[8];
			double py = w[3] + w[6];
			double yp = w[1] + w[2];
			double yy = w[0];
			slots.push_back({pp, py, yp, yy});
		}
		ov.wlj.push_back(std::move(slots));

		GammaBlock g;
		g.slot.resize(kl);
		g.yy.assign(kl * kl, 0.0);
		double sum_lr = 0;
		for (int j = 0; j < kl; ++j)
			sum_lr += ct.lj_r[j];
		double total = 0;
		for (int j = 0; j < kl; ++j)
		{
			double lr = ct.lj_r[j], ly = ct.lj_y[j];
			double lp = 1 - ly, lc = lp - lr;
			double ry = lr * (ly - (sum_lr - lr));
			g.slot[j] = {lr * lr, lr * lc, ry, lc * lr, ry};
			total += lr * lr + 2 * lr * lc + 2 * ry;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
				{
					g.yy[j * kl + j2] = lr * ct.lj_r[j2];
					total += lr * ct.lj_r[j2];
				}
		}
		g.cc = 1 - total;
		ov.gamma.push_back(std::move(g));
	}
	refresh_clone_level(ms, ov);
	return ov;
}

std::vector<double> pack_overlap(const MomentSystem &ms, const Overlap &ov)
{
	Layout L(ms);
	std::vector<double> x(L.coords);
	for (size_t t = 0; t < ms.lits.size(); ++t)
		for (int e = 0; e < 9; ++e)
			x[L.wt_off[t] + e] = ov.wt[t][e];
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		for (int j = 0; j < kl; ++j)
			for (int e = 0; e < 4; ++e)
				x[L.wlj(c, j, e)] = ov.wlj[c][j][e];
		for (int j = 0; j < kl; ++j)
			for (int e = 0; e < 5; ++e)
				x[L.gslot(ms, c, j, e)] = ov.gamma[c].slot[j][e];
		for (int j = 0; j < kl; ++j)
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					x[L.gyy(ms, c, j, j2)] = ov.gamma[c].yy[j * kl + j2];
		x[L.gcc(ms, c)] = ov.gamma[c].cc;
	}
	return x;
}

Overlap unpack_overlap(const MomentSystem &ms, const std::vector<double> &x)
{
	Layout L(ms);
	Overlap ov;
	ov.wt.resize(ms.lits.size());
	for (size_t t = 0; t < ms.lits.size(); ++t)
		for (int e = 0; e < 9; ++e)
			ov.wt[t][e] = x[L.wt_off[t] + e];
	ov.wlj.resize(ms.clauses.size());
	ov.gamma.resize(ms.clauses.size());
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		ov.wlj[c].resize(kl);
		for (int j = 0; j < kl; ++j)
			for (int e = 0; e < 4; ++e)
				ov.wlj[c][j][e] = x[L.wlj(c, j, e)];
		ov.gamma[c].slot.resize(kl);
		ov.gamma[c].yy.assign(kl * kl, 0.0);
		for (int j = 0; j < kl; ++j)
			for (int e = 0; e < 5; ++e)
				ov.gamma[c].slot[j][e] = x[L.gslot(ms, c, j, e)];
		for (int j = 0; j < kl; ++j)
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					ov.gamma[c].yy[j * kl + j2] = x[L.gyy(ms, c, j, j2)];
		ov.gamma[c].cc = x[L.gcc(ms, c)];
	}
	refresh_clone_level(ms, ov);
	return ov;
}

int overlap_coord_gamma_rr(const MomentSystem &ms, int clause_type, int slot)
{
	Layout L(ms);
	return L.gslot(ms, clause_type, slot, 0);
}

int overlap_coord_wlj(const MomentSystem &ms, int clause_type, int slot, int entry)
{
	Layout L(ms);
	return L.wlj(clause_type, slot, entry);
}

AffineCheck check_affine_relations(const MomentSystem &ms, const Overlap &ov,
                                   double slack)
{
	AffineCheck chk;
	auto fail = [&](double res, const std::string &what) {
		chk.max_residual = std::max(chk.max_residual, std::abs(res));
		if (std::abs(res) > slack)
		{
			chk.ok = false;
			if (chk.notes.size() < 20)
				chk.notes.push_back(what);
		}
	};

	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const auto &w = ov.wt[t];
		double tz[3] = {ms.lits[t].t0, ms.lits[t].t1, ms.lits[t].ts};
		double sum = 0;
		for (double v : w)
			sum += v;
		fail(sum - 1, "wt sum");
		for (int a = 0; a < 3; ++a)
		{
			double row = w[3 * a] + w[3 * a + 1] + w[3 * a + 2];
			double col = w[a] + w[a + 3] + w[a + 6];
			fail(row - tz[a], "wt row marginal");
			fail(col - tz[a], "wt column marginal");
		}
		int nt = ms.lits[t].neg_type;
		if (nt >= 0)
		{
			auto flip = [](int z) { return z == 0 ? 1 : z == 1 ? 0 : 2; };
			for (int a = 0; a < 3; ++a)
				for (int b = 0; b < 3; ++b)
					fail(w[3 * a + b] - ov.wt[nt][3 * flip(a) + flip(b)],
					     "complement pairing");
		}
	}

	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		int kl = (int)ct.lj_r.size();
		double gsum = ov.gamma[c].cc;
		for (int j = 0; j < kl; ++j)
		{
			const auto &s = ov.wlj[c][j];
			double lp = 1 - ct.lj_y[j];
			fail(s[0] + s[1] + s[2] + s[3] - 1, "wlj sum");
			fail(s[0] + s[1] - lp, "wlj coord1 marginal");
			fail(s[0] + s[2] - lp, "wlj coord2 marginal");

			double red1 = ov.gamma[c].slot[j][0] + ov.gamma[c].slot[j][1] +
			              ov.gamma[c].slot[j][2];
			double red2 = ov.gamma[c].slot[j][0] + ov.gamma[c].slot[j][3] +
			              ov.gamma[c].slot[j][4];
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
				{
					red1 += ov.gamma[c].yy[j * kl + j2];
					red2 += ov.gamma[c].yy[j2 * kl + j];
				}
			fail(red1 - ct.lj_r[j], "gamma coord1 red sum");
			fail(red2 - ct.lj_r[j], "gamma coord2 red sum");

			for (int e = 0; e < 5; ++e)
				gsum += ov.gamma[c].slot[j][e];
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					gsum += ov.gamma[c].yy[j * kl + j2];
		}
		fail(gsum - 1, "gamma sum");
	}

	// collapse consistency: the 2x2 collapse of wt must equal the
	// flow-average of the slot-level blocks
	std::vector<std::array<double, 4>> avg(ms.lits.size(), {0, 0, 0, 0});
	std::vector<double> mass(ms.lits.size(), 0);
	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		const MClauseType &ct = ms.clauses[c];
		for (size_t j = 0; j < ct.lj_r.size(); ++j)
		{
			int t = ct.slot_type[j];
			if (t < 0)
				continue;
			double coef =
			    ct.w * ms.m_over_n / (2.0 * ms.lits[t].d * ms.lits[t].w);
			mass[t] += coef;
			for (int e = 0; e < 4; ++e)
				avg[t][e] += coef * ov.wlj[c][j][e];
		}
	}
	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		if (mass[t] == 0)
			continue;
		const auto &w = ov.wt[t];
		double col[4] = {w[4] + w[5] + w[7] + w[8], w[3] + w[6], w[1] + w[2], w[0]};
		for (int e = 0; e < 4; ++e)
			fail(col[e] - avg[t][e], "collapse consistency");
	}
	return chk;
}

FeasibleSpace feasible_space(const MomentSystem &ms)
{
	require_uniform(ms);
	Layout L(ms);
	Overlap base = product_overlap(ms);
	std::vector<double> xbar = pack_overlap(ms, base);

	// unit scaling so derivative steps are meaningful across entries of very
	// different magnitude
	std::vector<double> scale(L.coords);
	for (int i = 0; i < L.coords; ++i)
		scale[i] = std::max(std::abs(xbar[i]), 1e-9);

	std::vector<std::vector<double>> rows;
	auto row = [&]() -> std::vector<double> & {
		rows.emplace_back(L.coords, 0.0);
		return rows.back();
	};

	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		auto &r0 = row();
		for (int e = 0; e < 9; ++e)
			r0[L.wt_off[t] + e] = 1;
		for (int a = 0; a < 3; ++a)
		{
			auto &r1 = row();
			for (int b = 0; b < 3; ++b)
				r1[L.wt(t, a, b)] = 1;
			auto &r2 = row();
			for (int b = 0; b < 3; ++b)
				r2[L.wt(t, b, a)] = 1;
		}
		int nt = ms.lits[t].neg_type;
		if (nt >= 0 && nt >= (int)t)
		{
			auto flip = [](int z) { return z == 0 ? 1 : z == 1 ? 0 : 2; };
			for (int a = 0; a < 3; ++a)
				for (int b = 0; b < 3; ++b)
				{
					int i1 = L.wt(t, a, b), i2 = L.wt(nt, flip(a), flip(b));
					if (i1 >= i2)
						continue;
					auto &r = row();
					r[i1] += 1;
					r[i2] -= 1;
				}
		}
	}

	for (size_t c = 0; c < ms.clauses.size(); ++c)
	{
		int kl = (int)ms.clauses[c].lj_r.size();
		for (int j = 0; j < kl; ++j)
		{
			auto &r0 = row();
			for (int e = 0; e < 4; ++e)
				r0[L.wlj(c, j, e)] = 1;
			auto &r1 = row();
			r1[L.wlj(c, j, 0)] = r1[L.wlj(c, j, 1)] = 1;
			auto &r2 = row();
			r2[L.wlj(c, j, 0)] = r2[L.wlj(c, j, 2)] = 1;

			auto &r3 = row();
			r3[L.gslot(ms, c, j, 0)] = r3[L.gslot(ms, c, j, 1)] =
			    r3[L.gslot(ms, c, j, 2)] = 1;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					r3[L.gyy(ms, c, j, j2)] = 1;
			auto &r4 = row();
			r4[L.gslot(ms, c, j, 0)] = r4[L.gslot(ms, c, j, 3)] =
			    r4[L.gslot(ms, c, j, 4)] = 1;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					r4[L.gyy(ms, c, j2, j)] = 1;
		}
		auto &rg = row();
		rg[L.gcc(ms, c)] = 1;
		for (int j = 0; j < kl; ++j)
		{
			for (int e = 0; e < 5; ++e)
				rg[L.gslot(ms, c, j, e)] = 1;
			for (int j2 = 0; j2 < kl; ++j2)
				if (j2 != j)
					rg[L.gyy(ms, c, j, j2)] = 1;
		}
	}

	// collapse rows (pp, py, yp per literal type)
	for (size_t t = 0; t < ms.lits.size(); ++t)
	{
		const int pp[] = {4, 5, 7, 8}, py[] = {3, 6}, yp[] = {1, 2};
		for (int which = 0; which < 3; ++which)
		{
			auto &r = row();
			const int *idx = which == 0 ? pp : which == 1 ? py : yp;
			int cnt = which == 0 ? 4 : 2;
			for (int e = 0; e < cnt; ++e)
				r[L.wt_off[t] + idx[e]] = 1;
			for (size_t c = 0; c < ms.clauses.size(); ++c)
			{
				const MClauseType &ct = ms.clauses[c];
				for (size_t j = 0; j < ct.lj_r.size(); ++j)
				{
					if (ct.slot_type[j] != (int)t)
						continue;
					double coef =
					    ct.w * ms.m_over_n / (2.0 * ms.lits[t].d * ms.lits[t].w);
					r[L.wlj(c, (int)j, which)] -= coef;
				}
			}
		}
	}

	// scaled constraint matrix; its kernel is the feasible subspace
	Eigen::MatrixXd A((int)rows.size(), L.coords);
	for (int i = 0; i < (int)rows.size(); ++i)
		for (int j = 0; j < L.coords; ++j)
			A(i, j) = rows[i][j] * scale[j];

	Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
	double tol = std::max(A.rows(), A.cols()) * svd.singularValues()(0) * 1e-12;
	int rank = 0;
	for (int i = 0; i < svd.singularValues().size(); ++i)
		if (svd.singularValues()(i) > tol)
			++rank;

	FeasibleSpace fs;
	fs.coords = L.coords;
	fs.dim = L.coords - rank;
	fs.scale = scale;
	for (int d = 0; d < fs.dim; ++d)
	{
		std::vector<double> v(L.coords);
		for (int j = 0; j < L.coords; ++j)
			v[j] = svd.matrixV()(j, rank + d);
		fs.basis.push_back(std::move(v));
	}
	return fs;
}

} // namespace ksat
