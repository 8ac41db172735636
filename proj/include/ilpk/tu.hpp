#pragma once

// Total unimodularity checks and replacement of boundaried subsystems whose
// non-boundary columns are totally unimodular.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boundary.hpp"
#include "error.hpp"
#include "exact_lp.hpp"
#include "ilp.hpp"
#include "parallel.hpp"
#include "protrusion.hpp"

namespace ilpk {

struct IntMatrix {
	size_t rows = 0;
	size_t cols = 0;
	std::vector<int64_t> data; // row-major

	IntMatrix() = default;
	IntMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0) {}
	IntMatrix(std::initializer_list<std::initializer_list<int64_t>> init)
	{
		rows = init.size();
		cols = rows ? init.begin()->size() : 0;
		for (const auto &row : init) {
			if (row.size() != cols)
				throw InvalidInput("IntMatrix: ragged rows");
			data.insert(data.end(), row.begin(), row.end());
		}
	}

	int64_t &at(size_t i, size_t j) { return data[i * cols + j]; }
	int64_t at(size_t i, size_t j) const { return data[i * cols + j]; }

	IntMatrix transposed() const
	{
		IntMatrix t(cols, rows);
		for (size_t i = 0; i < rows; ++i)
			for (size_t j = 0; j < cols; ++j)
				t.at(j, i) = at(i, j);
		return t;
	}

	bool entries_unit() const
	{
		return std::all_of(data.begin(), data.end(), [](int64_t x) { return x >= -1 && x <= 1; });
	}

	friend bool operator==(const IntMatrix &, const IntMatrix &) = default;
};

/// Constraint matrix of `ilp`, one row per constraint as stored.
inline IntMatrix constraint_matrix(const Ilp &ilp)
{
	IntMatrix m(ilp.num_constraints(), ilp.num_vars());
	for (size_t i = 0; i < ilp.num_constraints(); ++i)
		for (const auto &t : ilp.constraint(i).terms)
			m.at(i, t.var) = t.coeff;
	return m;
}

/// Determinant by Bareiss fraction-free elimination with checked arithmetic.
inline int64_t determinant(IntMatrix m)
{
	if (m.rows != m.cols)
		throw InvalidInput("determinant of a non-square matrix");
	size_t n = m.rows;
	if (n == 0)
		return 1;
	int64_t sign = 1, prev = 1;
	for (size_t k = 0; k + 1 < n; ++k) {
		if (m.at(k, k) == 0) {
			size_t swap = k + 1;
			while (swap < n && m.at(swap, k) == 0)
				++swap;
			if (swap == n)
				return 0;
			for (size_t j = 0; j < n; ++j)
				std::swap(m.at(k, j), m.at(swap, j));
			sign = -sign;
		}
		for (size_t i = k + 1; i < n; ++i)
			for (size_t j = k + 1; j < n; ++j)
				m.at(i, j) = checked_sub(checked_mul(m.at(i, j), m.at(k, k)),
							 checked_mul(m.at(i, k), m.at(k, j))) /
					     prev;
		prev = m.at(k, k);
	}
	return sign * m.at(n - 1, n - 1);
}

namespace tu_detail {

inline uint64_t binomial(uint64_t n, uint64_t k)
{
	if (k > n)
		return 0;
	uint64_t r = 1;
	for (uint64_t i = 1; i <= k; ++i) {
		uint64_t next = saturating_mul(r, n - k + i);
		r = next == UINT64_MAX ? UINT64_MAX : next / i;
	}
	return r;
}

inline uint64_t square_submatrices(size_t rows, size_t cols)
{
	uint64_t total = 0;
	for (size_t k = 1; k <= std::min(rows, cols); ++k) {
		uint64_t add = saturating_mul(binomial(rows, k), binomial(cols, k));
		total = total + add < total ? UINT64_MAX : total + add;
	}
	return total;
}

// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order;
// stops early when fn returns false.
template <typename Fn>
bool for_each_subset(size_t n, size_t k, Fn &&fn)
{
	std::vector<size_t> s(k);
	for (size_t i = 0; i < k; ++i)
		s[i] = i;
	while (true) {
		if (!fn(static_cast<const std::vector<size_t> &>(s)))
			return false;
		size_t i = k;
		while (i > 0 && s[i - 1] == n - k + i - 1)
			--i;
		if (i == 0)
			return true;
		++s[i - 1];
		for (size_t j = i; j < k; ++j)
			s[j] = s[j - 1] + 1;
	}
}

} // namespace tu_detail

/// True iff every square submatrix has determinant -1, 0 or 1. Matrices
/// with an entry outside {-1, 0, 1} are rejected immediately. Allowed when
/// min(rows, cols) is within caps.tu_dim or the number of square submatrices
/// is within caps.tu_submatrices; otherwise ResourceLimit.
inline bool is_tu_bruteforce(const IntMatrix &m, const Caps &caps = default_caps())
{
	if (!m.entries_unit())
		return false;
	size_t small = std::min(m.rows, m.cols);
	uint64_t count = tu_detail::square_submatrices(m.rows, m.cols);
	if (small > static_cast<size_t>(caps.tu_dim) && count > caps.tu_submatrices)
		throw ResourceLimit("is_tu_bruteforce: " + std::to_string(count) +
				    " square submatrices exceed the cap; use is_tu_fastpath");
	for (size_t k = 2; k <= small; ++k) {
		IntMatrix sub(k, k);
		bool ok = tu_detail::for_each_subset(m.rows, k, [&](const std::vector<size_t> &rs) {
			return tu_detail::for_each_subset(m.cols, k, [&](const std::vector<size_t> &cs) {
				for (size_t i = 0; i < k; ++i)
					for (size_t j = 0; j < k; ++j)
						sub.at(i, j) = m.at(rs[i], cs[j]);
				int64_t det = determinant(sub);
				return det >= -1 && det <= 1;
			});
		});
		if (!ok)
			return false;
	}
	return true;
}

/// Sound but incomplete: repeatedly deletes rows and columns with at most one
/// nonzero, then accepts if every remaining column (or every remaining row)
/// has at most one +1 and at most one -1. Returns nullopt when undecided.
inline std::optional<bool> is_tu_fastpath(const IntMatrix &m)
{
	if (!m.entries_unit())
		return false;
	std::vector<bool> row_alive(m.rows, true), col_alive(m.cols, true);
	for (bool changed = true; changed;) {
		changed = false;
		for (size_t i = 0; i < m.rows; ++i) {
			if (!row_alive[i])
				continue;
			size_t nz = 0;
			for (size_t j = 0; j < m.cols; ++j)
				nz += col_alive[j] && m.at(i, j) != 0;
			if (nz <= 1) {
				row_alive[i] = false;
				changed = true;
			}
		}
		for (size_t j = 0; j < m.cols; ++j) {
			if (!col_alive[j])
				continue;
			size_t nz = 0;
			for (size_t i = 0; i < m.rows; ++i)
				nz += row_alive[i] && m.at(i, j) != 0;
			if (nz <= 1) {
				col_alive[j] = false;
				changed = true;
			}
		}
	}
	auto network = [&](bool by_column) {
		size_t outer = by_column ? m.cols : m.rows, inner = by_column ? m.rows : m.cols;
		for (size_t a = 0; a < outer; ++a) {
			if (!(by_column ? col_alive[a] : row_alive[a]))
				continue;
			int plus = 0, minus = 0;
			for (size_t b = 0; b < inner; ++b) {
				if (!(by_column ? row_alive[b] : col_alive[b]))
					continue;
				int64_t x = by_column ? m.at(b, a) : m.at(a, b);
				plus += x == 1;
				minus += x == -1;
			}
			if (plus > 1 || minus > 1)
				return false;
		}
		return true;
	};
	if (network(true) || network(false))
		return true;
	return std::nullopt;
}

/// Fast path first, brute force when it is undecided.
inline bool is_tu(const IntMatrix &m, const Caps &caps = default_caps())
{
	if (auto fast = is_tu_fastpath(m))
		return *fast;
	return is_tu_bruteforce(m, caps);
}

/// Constraint matrix of the residual system left after fixing the boundary:
/// the normalized rows restricted to the non-boundary columns.
inline IntMatrix residual_matrix(const BoundariedIlp &bilp)
{
	std::vector<std::pair<VarIndex, int64_t>> fixed;
	for (VarIndex v : bilp.boundary)
		fixed.emplace_back(v, bilp.ilp.domain(v).lo);
	return constraint_matrix(normalize(substitute_variables(bilp.ilp, fixed).ilp));
}

/// Feasible boundary tuples of a system whose residual matrix is totally
/// unimodular: each tuple is substituted and the LP relaxation of the
/// residual (domain rows included) decides it.
inline BoundarySet feasible_boundary_tu(const BoundariedIlp &bilp, unsigned threads = 1,
					const Caps &caps = default_caps())
{
	if (!is_tu(residual_matrix(bilp), caps))
		throw InvalidInput("residual system is not totally unimodular");
	std::vector<Tuple> box;
	auto doms = bilp.boundary_domains();
	if (box_size(doms) > caps.oracle_box)
		throw ResourceLimit("boundary box of " + std::to_string(box_size(doms)) + " tuples exceeds the cap of " +
				    std::to_string(caps.oracle_box));
	for_each_in_box(doms, [&](const Tuple &t) { box.push_back(t); });
	std::vector<char> feasible(box.size(), 0);
	parallel_for(box.size(), threads, [&](size_t i) {
		std::vector<std::pair<VarIndex, int64_t>> fixed;
		for (size_t k = 0; k < bilp.boundary.size(); ++k)
			fixed.emplace_back(bilp.boundary[k], box[i][k]);
		feasible[i] = lp_feasible(lp_relaxation(substitute_variables(bilp.ilp, fixed).ilp)).feasible;
	});
	BoundarySet out{bilp.arity(), {}};
	for (size_t i = 0; i < box.size(); ++i)
		if (feasible[i])
			out.tuples.insert(box[i]);
	return out;
}

inline BoundariedIlp replace_boundaried_tu(const BoundariedIlp &bilp, unsigned threads = 1,
					   const Caps &caps = default_caps())
{
	auto feasible = feasible_boundary_tu(bilp, threads, caps);
	auto doms = bilp.boundary_domains();
	return build_blocking_gadget(doms, complement_in_box(doms, feasible));
}

/// For a single boundary variable over a TU residual the feasible values form
/// an interval; returns its endpoints, or nullopt if there are none.
inline std::optional<std::pair<int64_t, int64_t>> tu_boundary_interval(const BoundariedIlp &bilp,
								       const Caps &caps = default_caps())
{
	if (bilp.arity() != 1)
		throw InvalidInput("tu_boundary_interval needs exactly one boundary variable");
	auto set = feasible_boundary_tu(bilp, 1, caps);
	if (set.tuples.empty())
		return std::nullopt;
	return std::pair{set.tuples.begin()->front(), set.tuples.rbegin()->front()};
}

} // namespace ilpk
