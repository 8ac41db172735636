#pragma once

// Protrusion decompositions, the blocking gadget, replacement of boundaried
// subsystems of small treewidth, and reduction of whole instances.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "dp_solver.hpp"
#include "gaifman.hpp"
#include "ilp.hpp"

namespace ilpk {

/// Partition Y0, Y1..Yl of the variables where every part only neighbours Y0.
struct ProtrusionDecomposition {
	std::vector<VarIndex> y0;
	std::vector<std::vector<VarIndex>> parts;
	int r = 1;
	size_t alpha = 0;

	friend bool operator==(const ProtrusionDecomposition &, const ProtrusionDecomposition &) = default;
};

/// N_G(part): vertices outside `part` adjacent to it, ascending.
inline std::vector<VarIndex> neighborhood(const GaifmanGraph &g, const std::vector<VarIndex> &part)
{
	std::set<VarIndex> inside(part.begin(), part.end()), out;
	for (VarIndex v : part)
		for (VarIndex w : g.neighbors(v))
			if (!inside.count(w))
				out.insert(w);
	return {out.begin(), out.end()};
}

/// Vertices of `x` with a neighbour outside `x`, ascending.
inline std::vector<VarIndex> boundary_of(const GaifmanGraph &g, const std::vector<VarIndex> &x)
{
	std::set<VarIndex> inside(x.begin(), x.end());
	std::vector<VarIndex> out;
	for (VarIndex v : inside)
		for (VarIndex w : g.neighbors(v))
			if (!inside.count(w)) {
				out.push_back(v);
				break;
			}
	return out;
}

/// Checks the partition, N(Y_i) within Y0, the alpha bound, and that each
/// Y_i + N(Y_i) is an r-protrusion (boundary at most r, treewidth at most
/// r - 1). Treewidth checks beyond the exact cap are listed as unchecked.
inline ValidationReport validate_protrusion_decomposition(const Ilp &ilp, const ProtrusionDecomposition &pd,
							  const Caps &caps = default_caps())
{
	ValidationReport report;
	size_t n = ilp.num_vars();
	auto g = build_gaifman(ilp);
	std::vector<int> owner(n, -2); // -2 unassigned, -1 Y0, i part i
	auto claim = [&](VarIndex v, int who, const std::string &where) {
		if (v >= n) {
			report.add("partition", where + " names unknown variable " + std::to_string(v));
			return;
		}
		if (owner[v] != -2)
			report.add("partition", "variable " + std::to_string(v) + " appears twice (again in " + where + ")");
		owner[v] = who;
	};
	for (VarIndex v : pd.y0)
		claim(v, -1, "Y0");
	for (size_t i = 0; i < pd.parts.size(); ++i)
		for (VarIndex v : pd.parts[i])
			claim(v, static_cast<int>(i), "part " + std::to_string(i + 1));
	for (VarIndex v = 0; v < n; ++v)
		if (owner[v] == -2)
			report.add("partition", "variable " + std::to_string(v) + " is in no set");
	if (!report.ok())
		return report;

	if (std::max(pd.parts.size(), pd.y0.size()) > pd.alpha)
		report.add("alpha", "max(l, |Y0|) = " + std::to_string(std::max(pd.parts.size(), pd.y0.size())) +
					    " exceeds alpha = " + std::to_string(pd.alpha));
	if (pd.r < 0)
		report.add("boundary-size", "r must be non-negative");

	for (size_t i = 0; i < pd.parts.size(); ++i) {
		std::string id = "part " + std::to_string(i + 1);
		auto nb = neighborhood(g, pd.parts[i]);
		for (VarIndex w : nb)
			if (owner[w] != -1)
				report.add("neighborhood", id + " is adjacent to variable " + std::to_string(w) +
								   " outside Y0");
		std::vector<VarIndex> closed = pd.parts[i];
		closed.insert(closed.end(), nb.begin(), nb.end());
		std::sort(closed.begin(), closed.end());
		auto border = boundary_of(g, closed);
		if (static_cast<long>(border.size()) > pd.r)
			report.add("boundary-size", id + " has " + std::to_string(border.size()) +
							    " boundary vertices, more than r = " + std::to_string(pd.r));
		try {
			int tw = treewidth_exact(g.induced(closed), caps).width;
			if (tw > pd.r - 1)
				report.add("treewidth", id + " has treewidth " + std::to_string(tw) +
								" above r - 1 = " + std::to_string(pd.r - 1));
		} catch (const ResourceLimit &) {
			report.unchecked.push_back("treewidth unchecked for " + id);
		}
	}
	return report;
}

/// r-boundaried system whose feasible boundary tuples are exactly the box
/// minus `blocked`. For each blocked tuple a and each coordinate i it adds
/// u in [0, d_i - 1], v in {0, 1} and x'_i = a_i + u - d_i v (as two rows),
/// then sum_i u >= 1 (as -sum u <= -1); d_i is the size of x'_i's domain.
/// Domain rows are explicit, giving r + 2r|L| variables and 2r + (6r+1)|L|
/// rows. With r = 0 a blocked empty tuple becomes the single row 0 <= -1.
inline BoundariedIlp build_blocking_gadget(const std::vector<DomainInterval> &boundary_domains,
					   const BoundarySet &blocked)
{
	size_t r = boundary_domains.size();
	Ilp g;
	std::vector<VarIndex> boundary;
	for (size_t i = 0; i < r; ++i) {
		if (boundary_domains[i].lo > boundary_domains[i].hi)
			throw InvalidInput("gadget: empty boundary domain");
		boundary.push_back(g.add_variable("x" + std::to_string(i + 1), boundary_domains[i]));
	}
	for (VarIndex v : boundary)
		for (auto &row : domain_rows(g, {v}))
			g.add_constraint(std::move(row));

	size_t j = 0;
	for (const auto &a : blocked.tuples) {
		++j;
		if (a.size() != r)
			throw InvalidInput("gadget: blocked tuple has arity " + std::to_string(a.size()) + ", expected " +
					   std::to_string(r));
		for (size_t i = 0; i < r; ++i)
			if (!boundary_domains[i].contains(a[i]))
				throw InvalidInput("gadget: blocked tuple lies outside the boundary box");
		std::vector<Term> sum_u;
		for (size_t i = 0; i < r; ++i) {
			uint64_t size = boundary_domains[i].size();
			if (size > static_cast<uint64_t>(INT64_MAX))
				throw Overflow("gadget: boundary domain too large");
			int64_t d = static_cast<int64_t>(size);
			std::string tag = std::to_string(j) + "_" + std::to_string(i + 1);
			VarIndex u = g.add_variable("u" + tag, {0, d - 1});
			VarIndex v = g.add_variable("v" + tag, {0, 1});
			for (auto &row : domain_rows(g, {u, v}))
				g.add_constraint(std::move(row));
			VarIndex x = boundary[i];
			g.add_constraint(Constraint({{x, 1}, {u, -1}, {v, d}}, Relation::le, a[i]));
			g.add_constraint(Constraint({{x, -1}, {u, 1}, {v, -d}}, Relation::le, checked_neg(a[i])));
			sum_u.push_back({u, -1});
		}
		g.add_constraint(Constraint(std::move(sum_u), Relation::le, -1));
	}
	return BoundariedIlp(std::move(g), std::move(boundary));
}

/// Equivalent boundaried system built from the feasible boundary set of
/// `bilp`, which the dynamic program enumerates over `ngd`.
inline BoundariedIlp replace_boundaried_tw(const BoundariedIlp &bilp, const NiceGaifmanDecomposition &ngd,
					   unsigned threads = 1, const Caps &caps = default_caps())
{
	auto feasible = enumerate_feasible_boundary(bilp, ngd, threads, caps);
	auto doms = bilp.boundary_domains();
	return build_blocking_gadget(doms, complement_in_box(doms, feasible));
}

/// Per-part outcome of a reduction.
struct PartReport {
	size_t part = 0;
	size_t boundary = 0;
	size_t blocked = 0;
	size_t gadget_vars = 0; // excluding boundary copies
	size_t gadget_rows = 0;
};

struct Reduction {
	Ilp ilp;
	std::vector<PartReport> parts;
};

/// Subsystem of one part: every row touching the part plus domain rows for
/// its neighbourhood. Variables are Y_i + N(Y_i) in ascending original index;
/// `original` maps back, the boundary is N(Y_i).
struct PartSystem {
	BoundariedIlp bilp;
	std::vector<VarIndex> original;
};

inline PartSystem extract_part(const Ilp &normalized, const GaifmanGraph &g, const std::vector<VarIndex> &part)
{
	auto nb = neighborhood(g, part);
	std::vector<VarIndex> vars = part;
	vars.insert(vars.end(), nb.begin(), nb.end());
	std::sort(vars.begin(), vars.end());
	std::vector<size_t> local(normalized.num_vars(), SIZE_MAX);
	Ilp sub;
	for (VarIndex v : vars)
		local[v] = sub.add_variable(normalized.var(v).name, normalized.domain(v));
	std::set<VarIndex> in_part(part.begin(), part.end());
	for (const auto &c : normalized.constraints()) {
		bool touches = std::any_of(c.terms.begin(), c.terms.end(),
					   [&](const Term &t) { return in_part.count(t.var) != 0; });
		if (!touches)
			continue;
		std::vector<Term> terms;
		for (const auto &t : c.terms)
			terms.push_back({local[t.var], t.coeff});
		sub.add_constraint(Constraint(std::move(terms), c.rel, c.rhs));
	}
	std::vector<VarIndex> boundary;
	for (VarIndex w : nb)
		boundary.push_back(local[w]);
	for (auto &row : domain_rows(sub, boundary))
		sub.add_constraint(std::move(row));
	return {BoundariedIlp(std::move(sub), std::move(boundary)), std::move(vars)};
}

/// Replaces every part of `pd` by a blocking gadget over its neighbourhood.
/// The output holds Y0 (ascending, original names), then each part's gadget
/// variables named "p<i>:<name>"; its rows are the normalized rows supported
/// inside Y0 followed by the gadget rows, part by part. Feasibility is
/// preserved.
inline Reduction reduce_instance_report(const Ilp &ilp, const ProtrusionDecomposition &pd, unsigned threads = 1,
					const Caps &caps = default_caps())
{
	auto report = validate_protrusion_decomposition(ilp, pd, caps);
	if (!report.ok())
		throw InvalidInput("invalid protrusion decomposition: " + report.summary());
	Ilp norm = normalize(ilp);
	auto g = build_gaifman(norm);

	Reduction out;
	std::vector<VarIndex> y0 = pd.y0;
	std::sort(y0.begin(), y0.end());
	std::vector<size_t> new_index(norm.num_vars(), SIZE_MAX);
	for (VarIndex v : y0)
		new_index[v] = out.ilp.add_variable(norm.var(v).name, norm.domain(v));
	for (const auto &c : norm.constraints()) {
		bool inside = std::all_of(c.terms.begin(), c.terms.end(),
					  [&](const Term &t) { return new_index[t.var] != SIZE_MAX; });
		if (!inside)
			continue;
		std::vector<Term> terms;
		for (const auto &t : c.terms)
			terms.push_back({new_index[t.var], t.coeff});
		out.ilp.add_constraint(Constraint(std::move(terms), c.rel, c.rhs));
	}

	for (size_t i = 0; i < pd.parts.size(); ++i) {
		auto sys = extract_part(norm, g, pd.parts[i]);
		auto ngd = decompose(sys.bilp.ilp, caps);
		auto feasible = enumerate_feasible_boundary(sys.bilp, ngd, threads, caps);
		auto doms = sys.bilp.boundary_domains();
		auto blocked = complement_in_box(doms, feasible);
		auto gadget = build_blocking_gadget(doms, blocked);

		std::vector<size_t> map(gadget.ilp.num_vars(), SIZE_MAX);
		for (size_t k = 0; k < gadget.boundary.size(); ++k)
			map[gadget.boundary[k]] = new_index[sys.original[sys.bilp.boundary[k]]];
		std::string prefix = "p" + std::to_string(i + 1) + ":";
		for (VarIndex v = 0; v < gadget.ilp.num_vars(); ++v)
			if (map[v] == SIZE_MAX)
				map[v] = out.ilp.add_variable(prefix + gadget.ilp.var(v).name, gadget.ilp.domain(v));
		for (const auto &c : gadget.ilp.constraints()) {
			std::vector<Term> terms;
			for (const auto &t : c.terms)
				terms.push_back({map[t.var], t.coeff});
			out.ilp.add_constraint(Constraint(std::move(terms), c.rel, c.rhs));
		}
		out.parts.push_back({i + 1, gadget.arity(), blocked.size(), gadget.ilp.num_vars() - gadget.arity(),
				     gadget.ilp.num_constraints()});
	}
	return out;
}

inline Ilp reduce_instance(const Ilp &ilp, const ProtrusionDecomposition &pd, unsigned threads = 1,
			   const Caps &caps = default_caps())
{
	return reduce_instance_report(ilp, pd, threads, caps).ilp;
}

} // namespace ilpk
