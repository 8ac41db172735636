#pragma once

// Exact rational LP feasibility: phase-one simplex with Bland's rule.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "ilp.hpp"

namespace ilpk {

using Rational = boost::multiprecision::cpp_rational;

/// Rows `a_i . x <= b_i` over free rational variables.
struct LpSystem {
	size_t num_vars = 0;
	std::vector<std::vector<Rational>> a;
	std::vector<Rational> b;

	void add_row(std::vector<Rational> coeffs, Rational rhs)
	{
		if (coeffs.size() != num_vars)
			throw InvalidInput("LP row has " + std::to_string(coeffs.size()) + " coefficients for " +
					   std::to_string(num_vars) + " variables");
		a.push_back(std::move(coeffs));
		b.push_back(std::move(rhs));
	}

	bool satisfied_by(const std::vector<Rational> &x) const
	{
		for (size_t i = 0; i < a.size(); ++i) {
			Rational lhs = 0;
			for (size_t j = 0; j < num_vars; ++j)
				lhs += a[i][j] * x[j];
			if (lhs > b[i])
				return false;
		}
		return true;
	}
};

struct LpResult {
	bool feasible = false;
	std::optional<std::vector<Rational>> witness;
};

/// LP relaxation of an instance: every row (EQ split into two), plus the
/// domain rows of every variable.
inline LpSystem lp_relaxation(const Ilp &ilp)
{
	Ilp norm = normalize(ilp);
	LpSystem sys;
	sys.num_vars = norm.num_vars();
	auto emit = [&](const Constraint &c) {
		std::vector<Rational> row(sys.num_vars, 0);
		for (const auto &t : c.terms)
			row[t.var] = t.coeff;
		sys.add_row(std::move(row), c.rhs);
	};
	for (const auto &c : norm.constraints())
		emit(c);
	std::vector<VarIndex> all(norm.num_vars());
	for (VarIndex v = 0; v < all.size(); ++v)
		all[v] = v;
	for (const auto &c : domain_rows(norm, all))
		emit(c);
	return sys;
}

namespace lp_detail {

inline void require_bounded(const LpSystem &sys)
{
	std::vector<bool> upper(sys.num_vars, false), lower(sys.num_vars, false);
	for (const auto &row : sys.a) {
		size_t nonzero = 0, at = 0;
		for (size_t j = 0; j < sys.num_vars; ++j)
			if (row[j] != 0) {
				++nonzero;
				at = j;
			}
		if (nonzero != 1)
			continue;
		(row[at] > 0 ? upper : lower)[at] = true;
	}
	for (size_t j = 0; j < sys.num_vars; ++j)
		if (!upper[j] || !lower[j])
			throw InvalidInput("lp_feasible: variable " + std::to_string(j) +
					   " is not bounded on both sides by single-variable rows");
}

} // namespace lp_detail

/// Feasibility of `sys` over the rationals. Variables are split as
/// x = p - q with p, q >= 0, rows get slacks, rows with negative right-hand
/// side get artificials, and the sum of artificials is minimized with
/// Bland's rule. A feasible answer carries an exactly verified witness.
/// Requires every variable to be bounded above and below by one-variable rows.
inline LpResult lp_feasible(const LpSystem &sys)
{
	if (sys.b.size() != sys.a.size())
		throw InvalidInput("lp_feasible: row and right-hand-side counts differ");
	lp_detail::require_bounded(sys);
	size_t m = sys.a.size(), n = sys.num_vars;

	// Columns: p_0..p_{n-1}, q_0..q_{n-1}, slack_0..slack_{m-1}, artificials.
	std::vector<size_t> art_row;
	for (size_t i = 0; i < m; ++i)
		if (sys.b[i] < 0)
			art_row.push_back(i);
	size_t cols = 2 * n + m + art_row.size();
	std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols, 0));
	std::vector<Rational> rhs(m);
	std::vector<size_t> basis(m);
	for (size_t i = 0; i < m; ++i) {
		int sign = sys.b[i] < 0 ? -1 : 1;
		for (size_t j = 0; j < n; ++j) {
			t[i][j] = sign * sys.a[i][j];
			t[i][n + j] = -sign * sys.a[i][j];
		}
		t[i][2 * n + i] = sign;
		rhs[i] = sign * sys.b[i];
		basis[i] = 2 * n + i;
	}
	for (size_t k = 0; k < art_row.size(); ++k) {
		size_t i = art_row[k];
		t[i][2 * n + m + k] = 1;
		basis[i] = 2 * n + m + k;
	}

	// Reduced costs of the phase-one objective sum(artificials).
	std::vector<Rational> cost(cols, 0);
	for (size_t k = 0; k < art_row.size(); ++k)
		cost[2 * n + m + k] = 1;
	for (size_t i : art_row) {
		for (size_t j = 0; j < cols; ++j)
			cost[j] -= t[i][j];
	}

	while (true) {
		size_t enter = cols;
		for (size_t j = 0; j < cols; ++j)
			if (cost[j] < 0) {
				enter = j;
				break;
			}
		if (enter == cols)
			break;
		size_t leave = m;
		Rational best;
		for (size_t i = 0; i < m; ++i) {
			if (t[i][enter] <= 0)
				continue;
			Rational ratio = rhs[i] / t[i][enter];
			if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
				leave = i;
				best = ratio;
			}
		}
		if (leave == m)
			throw Error("lp_feasible: phase-one objective unbounded");
		Rational pivot = t[leave][enter];
		for (auto &x : t[leave])
			x /= pivot;
		rhs[leave] /= pivot;
		for (size_t i = 0; i < m; ++i) {
			if (i == leave || t[i][enter] == 0)
				continue;
			Rational f = t[i][enter];
			for (size_t j = 0; j < cols; ++j)
				if (t[leave][j] != 0)
					t[i][j] -= f * t[leave][j];
			rhs[i] -= f * rhs[leave];
		}
		Rational f = cost[enter];
		for (size_t j = 0; j < cols; ++j)
			if (t[leave][j] != 0)
				cost[j] -= f * t[leave][j];
		basis[leave] = enter;
	}

	for (size_t i = 0; i < m; ++i)
		if (basis[i] >= 2 * n + m && rhs[i] != 0)
			return {false, std::nullopt};
	std::vector<Rational> x(n, 0);
	for (size_t i = 0; i < m; ++i) {
		if (basis[i] < n)
			x[basis[i]] += rhs[i];
		else if (basis[i] < 2 * n)
			x[basis[i] - n] -= rhs[i];
	}
	if (!sys.satisfied_by(x))
		throw Error("lp_feasible: internal error, witness violates a row");
	return {true, std::move(x)};
}

} // namespace ilpk
