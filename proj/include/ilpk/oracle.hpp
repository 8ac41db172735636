#pragma once

// Brute-force ground truth. Deliberately dumb: it enumerates domain boxes and
// evaluates rows directly, and uses nothing but the core data model.

#include <numeric>
#include <vector>

#include "boundary.hpp"
#include "ilp.hpp"

namespace ilpk {

namespace oracle_detail {

inline bool satisfies(const Constraint &c, const Assignment &a)
{
	__int128 sum = 0;
	for (const auto &t : c.terms)
		sum += static_cast<__int128>(t.coeff) * a[t.var];
	switch (c.rel) {
	case Relation::le:
		return sum <= c.rhs;
	case Relation::ge:
		return sum >= c.rhs;
	case Relation::eq:
		return sum == c.rhs;
	}
	return false;
}

inline bool satisfies_all(const std::vector<const Constraint *> &rows, const Assignment &a)
{
	for (const auto *c : rows)
		if (!satisfies(*c, a))
			return false;
	return true;
}

// Enumerates the box of `vars` (others fixed in `a`) in lexicographic order
// and stops at the first point satisfying `rows`; `a` then holds it.
inline bool search(const Ilp &ilp, const std::vector<VarIndex> &vars,
		   const std::vector<const Constraint *> &rows, Assignment &a)
{
	for (VarIndex v : vars)
		a[v] = ilp.domain(v).lo;
	while (true) {
		if (satisfies_all(rows, a))
			return true;
		size_t i = vars.size();
		while (true) {
			if (i == 0)
				return false;
			--i;
			VarIndex v = vars[i];
			if (a[v] < ilp.domain(v).hi) {
				++a[v];
				break;
			}
			a[v] = ilp.domain(v).lo;
		}
	}
}

inline uint64_t box_of(const Ilp &ilp, const std::vector<VarIndex> &vars)
{
	uint64_t n = 1;
	for (VarIndex v : vars)
		n = saturating_mul(n, ilp.domain(v).size());
	return n;
}

inline void require_box(uint64_t box, const Caps &caps)
{
	if (box > caps.oracle_box)
		throw ResourceLimit("brute force: domain box of " + std::to_string(box) +
				    " points exceeds the oracle cap of " + std::to_string(caps.oracle_box));
}

// Connected groups of `free_vars` linked by shared rows.
inline std::vector<std::vector<VarIndex>> components(const Ilp &ilp, const std::vector<bool> &is_free)
{
	std::vector<VarIndex> parent(ilp.num_vars());
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](VarIndex v) {
		while (parent[v] != v)
			v = parent[v] = parent[parent[v]];
		return v;
	};
	for (const auto &c : ilp.constraints()) {
		std::optional<VarIndex> first;
		for (const auto &t : c.terms) {
			if (!is_free[t.var])
				continue;
			if (!first)
				first = t.var;
			else
				parent[find(t.var)] = find(*first);
		}
	}
	std::vector<std::vector<VarIndex>> groups;
	std::vector<std::optional<size_t>> group_of(ilp.num_vars());
	for (VarIndex v = 0; v < ilp.num_vars(); ++v) {
		if (!is_free[v])
			continue;
		VarIndex root = find(v);
		if (!group_of[root]) {
			group_of[root] = groups.size();
			groups.emplace_back();
		}
		groups[*group_of[root]].push_back(v);
	}
	return groups;
}

} // namespace oracle_detail

/// Exhaustive feasibility check. Returns the lexicographically first feasible
/// point as witness. Throws ResourceLimit when the box exceeds the cap.
inline FeasibilityResult brute_feasible(const Ilp &ilp, const Caps &caps = default_caps())
{
	oracle_detail::require_box(box_size(ilp), caps);
	std::vector<VarIndex> vars(ilp.num_vars());
	std::iota(vars.begin(), vars.end(), 0);
	std::vector<const Constraint *> rows;
	for (const auto &c : ilp.constraints())
		rows.push_back(&c);
	Assignment a(ilp.num_vars());
	if (oracle_detail::search(ilp, vars, rows, a))
		return {true, a};
	return {false, std::nullopt};
}

/// Exact set of boundary tuples that have a feasible completion.
inline BoundarySet brute_boundary_set(const BoundariedIlp &bilp, const Caps &caps = default_caps())
{
	const Ilp &ilp = bilp.ilp;
	oracle_detail::require_box(box_size(ilp), caps);
	BoundarySet out{bilp.arity(), {}};
	std::vector<VarIndex> vars(ilp.num_vars());
	std::iota(vars.begin(), vars.end(), 0);
	std::vector<const Constraint *> rows;
	for (const auto &c : ilp.constraints())
		rows.push_back(&c);
	Assignment a(ilp.num_vars());
	for (VarIndex v : vars)
		a[v] = ilp.domain(v).lo;
	while (true) {
		if (oracle_detail::satisfies_all(rows, a)) {
			Tuple t;
			for (VarIndex v : bilp.boundary)
				t.push_back(a[v]);
			out.tuples.insert(std::move(t));
		}
		size_t i = vars.size();
		while (true) {
			if (i == 0)
				return out;
			--i;
			if (a[i] < ilp.domain(i).hi) {
				++a[i];
				break;
			}
			a[i] = ilp.domain(i).lo;
		}
	}
}

/// Brute force over the box of `pivot`; for each pivot point the remaining
/// variables fall apart into groups that share no row, and each group is
/// enumerated on its own. Same answer as brute_feasible, but usable on
/// instances such as blocking gadgets whose full box is far beyond the cap.
inline FeasibilityResult brute_feasible_split(const Ilp &ilp, const std::vector<VarIndex> &pivot,
					      const Caps &caps = default_caps())
{
	std::vector<bool> is_free(ilp.num_vars(), true);
	for (VarIndex v : pivot) {
		if (v >= ilp.num_vars())
			throw InvalidInput("brute_feasible_split: no variable " + std::to_string(v));
		is_free[v] = false;
	}
	oracle_detail::require_box(oracle_detail::box_of(ilp, pivot), caps);
	auto groups = oracle_detail::components(ilp, is_free);
	std::vector<std::vector<const Constraint *>> group_rows(groups.size());
	std::vector<const Constraint *> pivot_rows;
	std::vector<size_t> group_of(ilp.num_vars(), groups.size());
	for (size_t g = 0; g < groups.size(); ++g) {
		oracle_detail::require_box(oracle_detail::box_of(ilp, groups[g]), caps);
		for (VarIndex v : groups[g])
			group_of[v] = g;
	}
	for (const auto &c : ilp.constraints()) {
		size_t g = groups.size();
		for (const auto &t : c.terms)
			if (is_free[t.var])
				g = group_of[t.var];
		(g == groups.size() ? pivot_rows : group_rows[g]).push_back(&c);
	}

	Assignment a(ilp.num_vars());
	for (VarIndex v = 0; v < ilp.num_vars(); ++v)
		a[v] = ilp.domain(v).lo;
	std::vector<VarIndex> ordered_pivot = pivot;
	std::sort(ordered_pivot.begin(), ordered_pivot.end());
	std::vector<DomainInterval> pivot_box;
	for (VarIndex v : ordered_pivot)
		pivot_box.push_back(ilp.domain(v));

	FeasibilityResult result;
	for_each_in_box(pivot_box, [&](const Tuple &t) {
		if (result.feasible)
			return;
		for (size_t i = 0; i < ordered_pivot.size(); ++i)
			a[ordered_pivot[i]] = t[i];
		if (!oracle_detail::satisfies_all(pivot_rows, a))
			return;
		for (size_t g = 0; g < groups.size(); ++g)
			if (!oracle_detail::search(ilp, groups[g], group_rows[g], a))
				return;
		result = {true, a};
	});
	return result;
}

/// Boundary set computed by pivoting on the boundary variables and brute
/// forcing every independent group of the remaining variables.
inline BoundarySet brute_boundary_set_split(const BoundariedIlp &bilp, const Caps &caps = default_caps())
{
	const Ilp &ilp = bilp.ilp;
	BoundarySet out{bilp.arity(), {}};
	auto box = bilp.boundary_domains();
	oracle_detail::require_box(box_size(box), caps);
	for_each_in_box(box, [&](const Tuple &t) {
		Ilp pinned = ilp;
		for (size_t i = 0; i < t.size(); ++i)
			pinned = pin_variable(pinned, bilp.boundary[i], t[i]);
		if (brute_feasible_split(pinned, bilp.boundary, caps).feasible)
			out.tuples.insert(t);
	});
	return out;
}

} // namespace ilpk
