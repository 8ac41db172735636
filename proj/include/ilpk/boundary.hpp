#pragma once

// Boundaried ILPs and their sets of feasible boundary assignments.

#include <set>
#include <string>
#include <vector>

#include "ilp.hpp"

namespace ilpk {

using Tuple = std::vector<int64_t>;

/// An ILP with r distinct distinguished variables through which it talks to
/// the rest of an instance.
struct BoundariedIlp {
	Ilp ilp;
	std::vector<VarIndex> boundary;

	BoundariedIlp() = default;
	BoundariedIlp(Ilp system, std::vector<VarIndex> b) : ilp(std::move(system)), boundary(std::move(b))
	{
		std::set<VarIndex> seen;
		for (VarIndex v : boundary) {
			if (v >= ilp.num_vars())
				throw InvalidInput("boundary variable " + std::to_string(v) + " does not exist");
			if (!seen.insert(v).second)
				throw InvalidInput("boundary variable " + std::to_string(v) + " listed twice");
		}
	}

	size_t arity() const { return boundary.size(); }

	std::vector<DomainInterval> boundary_domains() const
	{
		std::vector<DomainInterval> doms;
		for (VarIndex v : boundary)
			doms.push_back(ilp.domain(v));
		return doms;
	}
};

/// Feasible boundary tuples, kept in lexicographic order.
struct BoundarySet {
	size_t r = 0;
	std::set<Tuple> tuples;

	bool contains(const Tuple &t) const { return tuples.count(t) != 0; }
	size_t size() const { return tuples.size(); }

	friend bool operator==(const BoundarySet &, const BoundarySet &) = default;
};

/// Calls `fn(tuple)` for every point of the box, lexicographically
/// (first coordinate slowest). The empty box has exactly one point, `()`.
template <typename Fn>
void for_each_in_box(const std::vector<DomainInterval> &box, Fn &&fn)
{
	Tuple t;
	for (const auto &d : box)
		t.push_back(d.lo);
	while (true) {
		fn(static_cast<const Tuple &>(t));
		size_t i = box.size();
		while (i > 0) {
			--i;
			if (t[i] < box[i].hi) {
				++t[i];
				break;
			}
			t[i] = box[i].lo;
			if (i == 0)
				return;
		}
		if (box.empty())
			return;
	}
}

inline uint64_t box_size(const std::vector<DomainInterval> &box)
{
	uint64_t n = 1;
	for (const auto &d : box)
		n = saturating_mul(n, d.size());
	return n;
}

/// Box points not in `feasible`: the list of boundary assignments to block.
inline BoundarySet complement_in_box(const std::vector<DomainInterval> &box, const BoundarySet &feasible)
{
	BoundarySet out{box.size(), {}};
	for_each_in_box(box, [&](const Tuple &t) {
		if (!feasible.contains(t))
			out.tuples.insert(t);
	});
	return out;
}

} // namespace ilpk
