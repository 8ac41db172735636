#pragma once

// Feasibility by dynamic programming over a nice Gaifman decomposition,
// boundary-set enumeration, and branching over a modulator.

#include <algorithm>
#include <vector>

#include "boundary.hpp"
#include "error.hpp"
#include "gaifman.hpp"
#include "ilp.hpp"
#include "parallel.hpp"

namespace ilpk {

/// F_i for one node: a bit per assignment of the bag, bag variables in
/// ascending index order, first variable most significant.
struct DpTable {
	std::vector<VarIndex> bag;
	std::vector<DomainInterval> domains;
	std::vector<uint64_t> strides;
	std::vector<bool> entries;

	uint64_t index_of(const Tuple &t) const
	{
		uint64_t idx = 0;
		for (size_t i = 0; i < bag.size(); ++i)
			idx += static_cast<uint64_t>(t[i] - domains[i].lo) * strides[i];
		return idx;
	}

	bool at(const Tuple &t) const { return entries[index_of(t)]; }

	Tuple tuple_at(uint64_t idx) const
	{
		Tuple t(bag.size());
		for (size_t i = 0; i < bag.size(); ++i) {
			t[i] = domains[i].lo + static_cast<int64_t>(idx / strides[i]);
			idx %= strides[i];
		}
		return t;
	}
};

namespace dp_detail {

inline bool row_holds(const Constraint &c, const Assignment &a)
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

inline DpTable empty_table(const Ilp &ilp, const std::vector<VarIndex> &bag)
{
	DpTable t;
	t.bag = bag;
	t.strides.assign(bag.size(), 1);
	for (VarIndex v : bag)
		t.domains.push_back(ilp.domain(v));
	uint64_t cells = 1;
	for (size_t i = bag.size(); i-- > 0;) {
		t.strides[i] = cells;
		cells *= t.domains[i].size();
	}
	t.entries.assign(cells, false);
	return t;
}

// Index of the current scratch assignment in `t`.
inline uint64_t index_in(const DpTable &t, const Assignment &scratch)
{
	uint64_t idx = 0;
	for (size_t i = 0; i < t.bag.size(); ++i)
		idx += static_cast<uint64_t>(scratch[t.bag[i]] - t.domains[i].lo) * t.strides[i];
	return idx;
}

// Writes the bag tuple with index `idx` into the scratch assignment.
inline void load(const DpTable &t, uint64_t idx, Assignment &scratch)
{
	for (size_t i = 0; i < t.bag.size(); ++i) {
		scratch[t.bag[i]] = t.domains[i].lo + static_cast<int64_t>(idx / t.strides[i]);
		idx %= t.strides[i];
	}
}

inline uint64_t total_cells(const Ilp &ilp, const NiceGaifmanDecomposition &ngd)
{
	uint64_t total = 0;
	for (const auto &node : ngd.nodes) {
		uint64_t cells = 1;
		for (VarIndex v : node.bag)
			cells = saturating_mul(cells, ilp.domain(v).size());
		total = total + cells < total ? UINT64_MAX : total + cells;
	}
	return total;
}

inline void require_valid(const Ilp &ilp, const NiceGaifmanDecomposition &ngd)
{
	auto report = validate_nice(ilp, ngd, false);
	if (!report.ok())
		throw InvalidInput("invalid nice decomposition: " + report.summary());
}

// All tables, bottom-up. Assumes a structurally valid decomposition.
inline std::vector<DpTable> run(const Ilp &ilp, const NiceGaifmanDecomposition &ngd, const Caps &caps)
{
	uint64_t cells = total_cells(ilp, ngd);
	if (cells > caps.dp_cells)
		throw ResourceLimit("dynamic program needs " + std::to_string(cells) +
				    " table cells, above the cap of " + std::to_string(caps.dp_cells));
	std::vector<DpTable> tables(ngd.nodes.size());
	Assignment scratch(ilp.num_vars(), 0);
	for (size_t id : ngd.post_order()) {
		const auto &node = ngd.nodes[id];
		DpTable t = empty_table(ilp, node.bag);
		uint64_t size = t.entries.size();
		switch (node.kind) {
		case NodeKind::leaf:
			t.entries.assign(size, true);
			break;
		case NodeKind::introduce: {
			const auto &child = tables[node.children[0]];
			for (uint64_t i = 0; i < size; ++i) {
				load(t, i, scratch);
				t.entries[i] = child.entries[index_in(child, scratch)];
			}
			break;
		}
		case NodeKind::forget: {
			const auto &child = tables[node.children[0]];
			VarIndex gone = 0;
			for (VarIndex v : child.bag)
				if (!detail::bag_contains(node.bag, v))
					gone = v;
			const auto &dom = ilp.domain(gone);
			for (uint64_t i = 0; i < size; ++i) {
				load(t, i, scratch);
				bool any = false;
				for (int64_t x = dom.lo; !any; ++x) {
					scratch[gone] = x;
					any = child.entries[index_in(child, scratch)];
					if (x == dom.hi)
						break;
				}
				t.entries[i] = any;
			}
			break;
		}
		case NodeKind::join: {
			const auto &left = tables[node.children[0]];
			const auto &right = tables[node.children[1]];
			for (uint64_t i = 0; i < size; ++i)
				t.entries[i] = left.entries[i] && right.entries[i];
			break;
		}
		case NodeKind::constraint: {
			const auto &child = tables[node.children[0]];
			const auto &row = ilp.constraint(*node.row);
			for (uint64_t i = 0; i < size; ++i) {
				if (!child.entries[i])
					continue;
				load(t, i, scratch);
				t.entries[i] = row_holds(row, scratch);
			}
			break;
		}
		}
		tables[id] = std::move(t);
	}
	return tables;
}

// Top-down witness reconstruction from a root entry that is true.
inline Assignment trace(const Ilp &ilp, const NiceGaifmanDecomposition &ngd, const std::vector<DpTable> &tables,
			uint64_t root_entry)
{
	Assignment a(ilp.num_vars(), 0);
	load(tables[ngd.root], root_entry, a);
	std::vector<size_t> stack{ngd.root};
	while (!stack.empty()) {
		size_t id = stack.back();
		stack.pop_back();
		const auto &node = ngd.nodes[id];
		if (node.kind == NodeKind::forget) {
			const auto &child = tables[node.children[0]];
			VarIndex gone = 0;
			for (VarIndex v : child.bag)
				if (!detail::bag_contains(node.bag, v))
					gone = v;
			const auto &dom = ilp.domain(gone);
			for (int64_t x = dom.lo;; ++x) {
				a[gone] = x;
				if (child.entries[index_in(child, a)] || x == dom.hi)
					break;
			}
		}
		for (size_t c : node.children)
			stack.push_back(c);
	}
	return a;
}

inline FeasibilityResult solve_without_variables(const Ilp &ilp)
{
	Assignment empty;
	for (const auto &c : ilp.constraints())
		if (!row_holds(c, empty))
			return {false, std::nullopt};
	return {true, empty};
}

// solve_dp minus the validation step.
inline FeasibilityResult solve_unchecked(const Ilp &ilp, const NiceGaifmanDecomposition &ngd, const Caps &caps)
{
	if (ilp.num_vars() == 0)
		return solve_without_variables(ilp);
	auto tables = run(ilp, ngd, caps);
	const auto &root = tables[ngd.root].entries;
	auto it = std::find(root.begin(), root.end(), true);
	if (it == root.end())
		return {false, std::nullopt};
	return {true, trace(ilp, ngd, tables, static_cast<uint64_t>(it - root.begin()))};
}

} // namespace dp_detail

/// Every node's table, indexed by node id. `ilp` must be normalized and
/// `ngd` structurally valid for it.
inline std::vector<DpTable> compute_tables(const Ilp &ilp, const NiceGaifmanDecomposition &ngd,
					   const Caps &caps = default_caps())
{
	dp_detail::require_valid(ilp, ngd);
	if (ilp.num_vars() == 0)
		return {};
	return dp_detail::run(ilp, ngd, caps);
}

/// Decides feasibility of the normalized instance `ilp`. A feasible verdict
/// comes with a witness: the lowest true root entry, completed top-down by
/// picking the lowest feasible value at every forget node.
inline FeasibilityResult solve_dp(const Ilp &ilp, const NiceGaifmanDecomposition &ngd, const Caps &caps = default_caps())
{
	dp_detail::require_valid(ilp, ngd);
	return dp_detail::solve_unchecked(ilp, ngd, caps);
}

/// Feasible boundary tuples of `bilp`, found by pinning each tuple of the
/// boundary box and running the dynamic program. Pins are spread over
/// `threads` workers; the result does not depend on the thread count.
inline BoundarySet enumerate_feasible_boundary(const BoundariedIlp &bilp, const NiceGaifmanDecomposition &ngd,
					       unsigned threads = 1, const Caps &caps = default_caps())
{
	dp_detail::require_valid(bilp.ilp, ngd);
	std::vector<Tuple> box;
	auto doms = bilp.boundary_domains();
	if (box_size(doms) > caps.oracle_box)
		throw ResourceLimit("boundary box of " + std::to_string(box_size(doms)) + " tuples exceeds the cap of " +
				    std::to_string(caps.oracle_box));
	for_each_in_box(doms, [&](const Tuple &t) { box.push_back(t); });

	std::vector<char> feasible(box.size(), 0);
	auto check = [&](size_t i) {
		Ilp pinned = bilp.ilp;
		for (size_t k = 0; k < bilp.boundary.size(); ++k)
			pinned = pin_variable(pinned, bilp.boundary[k], box[i][k]);
		feasible[i] = dp_detail::solve_unchecked(pinned, ngd, caps).feasible;
	};

	parallel_for(box.size(), threads, check);

	BoundarySet out{bilp.arity(), {}};
	for (size_t i = 0; i < box.size(); ++i)
		if (feasible[i])
			out.tuples.insert(box[i]);
	return out;
}

/// Exact decomposition when every component fits the exact cap, min-fill otherwise.
inline NiceGaifmanDecomposition decompose(const Ilp &normalized, const Caps &caps = default_caps())
{
	auto g = build_gaifman(normalized);
	TreeDecomposition td;
	try {
		td = treewidth_exact(g, caps).td;
	} catch (const ResourceLimit &) {
		td = treewidth_heuristic(g).td;
	}
	return make_nice(normalized, td);
}

/// Normalizes, decomposes and solves any instance; the witness refers to the
/// variables of `ilp`.
inline FeasibilityResult solve(const Ilp &ilp, const Caps &caps = default_caps())
{
	Ilp norm = normalize(ilp);
	if (norm.num_vars() == 0)
		return dp_detail::solve_without_variables(norm);
	return dp_detail::solve_unchecked(norm, decompose(norm, caps), caps);
}

/// Branches over every value tuple of `mod_vars` (lexicographically, in
/// ascending variable order) and solves each residual instance by dynamic
/// programming. All residuals share one decomposition, computed exactly
/// once; a residual component beyond the exact-treewidth cap is an error.
inline FeasibilityResult solve_with_modulator(const Ilp &ilp, std::vector<VarIndex> mod_vars,
					      const Caps &caps = default_caps())
{
	std::sort(mod_vars.begin(), mod_vars.end());
	mod_vars.erase(std::unique(mod_vars.begin(), mod_vars.end()), mod_vars.end());
	for (VarIndex v : mod_vars)
		if (v >= ilp.num_vars())
			throw InvalidInput("modulator names variable " + std::to_string(v) + " which does not exist");
	Ilp norm = normalize(ilp);

	std::vector<std::pair<VarIndex, int64_t>> fixed;
	std::vector<DomainInterval> box;
	for (VarIndex v : mod_vars) {
		fixed.emplace_back(v, norm.domain(v).lo);
		box.push_back(norm.domain(v));
	}
	auto shape = substitute_variables(norm, fixed);
	NiceGaifmanDecomposition ngd;
	if (shape.ilp.num_vars() > 0)
		ngd = make_nice(shape.ilp, treewidth_exact(build_gaifman(shape.ilp), caps).td);

	FeasibilityResult result;
	for_each_in_box(box, [&](const Tuple &t) {
		if (result.feasible)
			return;
		for (size_t i = 0; i < mod_vars.size(); ++i)
			fixed[i].second = t[i];
		auto residual = substitute_variables(norm, fixed);
		auto sub = dp_detail::solve_unchecked(residual.ilp, ngd, caps);
		if (!sub.feasible)
			return;
		Assignment a(ilp.num_vars(), 0);
		for (size_t i = 0; i < mod_vars.size(); ++i)
			a[mod_vars[i]] = t[i];
		for (size_t i = 0; i < residual.kept.size(); ++i)
			a[residual.kept[i]] = (*sub.witness)[i];
		result = {true, std::move(a)};
	});
	return result;
}

} // namespace ilpk
