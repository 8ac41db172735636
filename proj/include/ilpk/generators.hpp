#pragma once

// Instance generators: the reductions from Subset Sum, Hitting Set and an
// OR of Independent Set instances, plus random protrusion-structured
// instances. Each packages the structural certificate it is built around.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "gaifman.hpp"
#include "ilp.hpp"
#include "protrusion.hpp"

namespace ilpk {

/// Undirected simple graph on vertices 0..n-1.
struct SimpleGraph {
	size_t n = 0;
	std::vector<std::pair<size_t, size_t>> edges;

	bool has_edge(size_t u, size_t v) const
	{
		return std::any_of(edges.begin(), edges.end(), [&](const auto &e) {
			return (e.first == u && e.second == v) || (e.first == v && e.second == u);
		});
	}
};

struct SubsetSumInstance {
	Ilp ilp;
	TreeDecomposition td;
};

/// x_1..x_n in {0,1}, then partial sums y_1..y_n with y_1 = a_1 x_1,
/// y_j = a_j x_j + y_{j-1} and y_n = target. The y domains span the
/// attainable partial sums. The packaged path decomposition has bags
/// {x_1, y_1} and {x_j, y_{j-1}, y_j}, rooted at the last bag.
inline SubsetSumInstance gen_subset_sum(const std::vector<int64_t> &items, int64_t target)
{
	size_t n = items.size();
	if (n == 0)
		throw InvalidInput("gen_subset_sum: need at least one item");
	int64_t neg = 0, pos = 0;
	for (int64_t a : items) {
		if (a < 0)
			neg = checked_add(neg, a);
		else
			pos = checked_add(pos, a);
	}
	SubsetSumInstance out;
	for (size_t j = 0; j < n; ++j)
		out.ilp.add_variable("x" + std::to_string(j + 1), {0, 1});
	for (size_t j = 0; j < n; ++j)
		out.ilp.add_variable("y" + std::to_string(j + 1), {neg, pos});
	auto x = [](size_t j) { return j; };
	auto y = [n](size_t j) { return n + j; };
	for (size_t j = 0; j < n; ++j) {
		std::vector<Term> terms{{y(j), 1}};
		if (items[j] != 0)
			terms.push_back({x(j), checked_neg(items[j])});
		if (j > 0)
			terms.push_back({y(j - 1), -1});
		out.ilp.add_constraint(Constraint(std::move(terms), Relation::eq, 0));
	}
	out.ilp.add_constraint(Constraint({{y(n - 1), 1}}, Relation::eq, target));

	for (size_t j = 0; j < n; ++j) {
		std::vector<VarIndex> bag{x(j), y(j)};
		if (j > 0)
			bag.push_back(y(j - 1));
		std::sort(bag.begin(), bag.end());
		out.td.bags.push_back(std::move(bag));
		out.td.parent.push_back(j + 1 < n ? j + 1 : no_parent);
	}
	out.td.root = n - 1;
	return out;
}

struct HittingSetInstance {
	Ilp ilp;
	/// (row, column) positions holding -|family|; zeroing them leaves a
	/// totally unimodular matrix.
	std::vector<std::pair<size_t, size_t>> modified_entries;
};

/// 0/1 variables x_{u,F} (element-major) followed by x_u. Rows, all <=:
/// one covering row -sum_{u in F} x_{u,F} <= -1 per set, one row
/// sum_F x_{u,F} - |family| x_u <= 0 per element, and sum_u x_u <= k.
/// Domains are the variables' intervals; no domain rows are emitted.
inline HittingSetInstance gen_hitting_set(size_t universe_size, const std::vector<std::vector<size_t>> &family,
					  int64_t k)
{
	if (family.empty())
		throw InvalidInput("gen_hitting_set: the family must contain at least one set");
	for (const auto &f : family) {
		if (f.empty())
			throw InvalidInput("gen_hitting_set: empty set in the family cannot be hit");
		for (size_t u : f)
			if (u >= universe_size)
				throw InvalidInput("gen_hitting_set: element " + std::to_string(u) + " outside the universe");
	}
	size_t nu = universe_size, nf = family.size();
	HittingSetInstance out;
	for (size_t u = 0; u < nu; ++u)
		for (size_t f = 0; f < nf; ++f)
			out.ilp.add_variable("x_u" + std::to_string(u + 1) + "_F" + std::to_string(f + 1), {0, 1});
	for (size_t u = 0; u < nu; ++u)
		out.ilp.add_variable("x_u" + std::to_string(u + 1), {0, 1});
	auto pair_var = [nf](size_t u, size_t f) { return u * nf + f; };
	auto elem_var = [nu, nf](size_t u) { return nu * nf + u; };

	for (size_t f = 0; f < nf; ++f) {
		std::set<size_t> members(family[f].begin(), family[f].end());
		std::vector<Term> terms;
		for (size_t u : members)
			terms.push_back({pair_var(u, f), -1});
		out.ilp.add_constraint(Constraint(std::move(terms), Relation::le, -1));
	}
	for (size_t u = 0; u < nu; ++u) {
		std::vector<Term> terms;
		for (size_t f = 0; f < nf; ++f)
			terms.push_back({pair_var(u, f), 1});
		terms.push_back({elem_var(u), -static_cast<int64_t>(nf)});
		size_t row = out.ilp.add_constraint(Constraint(std::move(terms), Relation::le, 0));
		out.modified_entries.emplace_back(row, elem_var(u));
	}
	std::vector<Term> total;
	for (size_t u = 0; u < nu; ++u)
		total.push_back({elem_var(u), 1});
	out.ilp.add_constraint(Constraint(std::move(total), Relation::le, k));
	return out;
}

struct ProtrusionInstance {
	Ilp ilp;
	ProtrusionDecomposition pd;
};

/// Instance that is feasible iff some G_s has an independent set of size at
/// least k. Core: x_1..x_n, y_{i,j} (pairs in lexicographic order) and the
/// selector s in [1, t]. For every pair, d_p and c_p (p = 1..t, interleaved)
/// form one protrusion with neighbourhood {s, y_{i,j}}; d_p = 0 exactly when
/// s = p, and y_{i,j} then carries the edge bit of G_p.
inline ProtrusionInstance gen_or_composition(const std::vector<SimpleGraph> &graphs, int64_t k)
{
	if (graphs.empty())
		throw InvalidInput("gen_or_composition: need at least one graph");
	size_t n = graphs.front().n;
	for (const auto &g : graphs)
		if (g.n != n)
			throw InvalidInput("gen_or_composition: all graphs must have the same number of vertices");
	int64_t t = static_cast<int64_t>(graphs.size());

	ProtrusionInstance out;
	Ilp &ilp = out.ilp;
	std::vector<VarIndex> x(n);
	for (size_t i = 0; i < n; ++i)
		x[i] = ilp.add_variable("x" + std::to_string(i + 1), {0, 1});
	std::vector<std::pair<size_t, size_t>> pairs;
	std::vector<VarIndex> y;
	for (size_t i = 0; i < n; ++i)
		for (size_t j = i + 1; j < n; ++j) {
			pairs.emplace_back(i, j);
			y.push_back(ilp.add_variable("y" + std::to_string(i + 1) + "_" + std::to_string(j + 1), {0, 1}));
		}
	VarIndex s = ilp.add_variable("s", {1, t});

	std::vector<Term> size_terms;
	for (VarIndex v : x)
		size_terms.push_back({v, 1});
	ilp.add_constraint(Constraint(std::move(size_terms), Relation::ge, k));
	for (size_t e = 0; e < pairs.size(); ++e)
		ilp.add_constraint(
			Constraint({{x[pairs[e].first], 1}, {x[pairs[e].second], 1}, {y[e], 1}}, Relation::le, 2));

	out.pd.y0.resize(ilp.num_vars());
	std::iota(out.pd.y0.begin(), out.pd.y0.end(), 0);
	for (size_t e = 0; e < pairs.size(); ++e) {
		std::string tag = std::to_string(pairs[e].first + 1) + "_" + std::to_string(pairs[e].second + 1);
		std::vector<VarIndex> d, c, part;
		for (int64_t p = 1; p <= t; ++p) {
			d.push_back(ilp.add_variable("d" + tag + "_" + std::to_string(p), {0, 1}));
			c.push_back(ilp.add_variable("c" + tag + "_" + std::to_string(p), {0, 1}));
			part.push_back(d.back());
			part.push_back(c.back());
		}
		for (auto &row : domain_rows(ilp, part))
			ilp.add_constraint(std::move(row));
		for (int64_t p = 1; p <= t; ++p) {
			VarIndex dp = d[p - 1], cp = c[p - 1];
			ilp.add_constraint(Constraint({{s, 1}, {dp, t}}, Relation::ge, p));
			ilp.add_constraint(Constraint({{s, 1}, {dp, -t}}, Relation::le, p));
			if (p == 1)
				ilp.add_constraint(Constraint({{cp, 1}, {dp, -1}}, Relation::eq, 0));
			else
				ilp.add_constraint(Constraint({{cp, 1}, {c[p - 2], -1}, {dp, -1}}, Relation::eq, -1));
			bool edge = graphs[p - 1].has_edge(pairs[e].first, pairs[e].second);
			if (edge)
				ilp.add_constraint(Constraint({{y[e], 1}, {dp, 1}}, Relation::ge, 1));
			else
				ilp.add_constraint(Constraint({{y[e], 1}, {dp, -1}}, Relation::le, 0));
		}
		ilp.add_constraint(Constraint({{c.back(), 1}}, Relation::eq, 0));
		out.pd.parts.push_back(std::move(part));
	}
	out.pd.r = 5;
	out.pd.alpha = std::max(out.pd.y0.size(), out.pd.parts.size());
	return out;
}

/// Seeded random source; same seed, same stream on every platform.
class SeededRng {
public:
	explicit SeededRng(uint64_t seed) : engine_(seed) {}

	/// Uniform-ish integer in [0, n).
	uint64_t below(uint64_t n) { return n == 0 ? 0 : engine_() % n; }
	int64_t between(int64_t lo, int64_t hi) { return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1)); }
	bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

	template <typename T>
	void shuffle(std::vector<T> &v)
	{
		for (size_t i = v.size(); i > 1; --i)
			std::swap(v[i - 1], v[below(i)]);
	}

	template <typename T>
	std::vector<T> sample(std::vector<T> pool, size_t count)
	{
		shuffle(pool);
		pool.resize(std::min(count, pool.size()));
		std::sort(pool.begin(), pool.end());
		return pool;
	}

private:
	std::mt19937_64 engine_;
};

namespace gen_detail {

// Row on `support` with random nonzero coefficients in [-2, 2]; the
// right-hand side is placed around the activity at the planted point so
// that instances come out feasible and infeasible in useful proportions.
inline Constraint planted_row(SeededRng &rng, const std::vector<VarIndex> &support, const Assignment &planted)
{
	std::vector<Term> terms;
	int64_t activity = 0;
	for (VarIndex v : support) {
		int64_t c = rng.between(1, 2) * (rng.chance(1, 2) ? 1 : -1);
		terms.push_back({v, c});
		activity += c * planted[v];
	}
	switch (rng.below(3)) {
	case 0:
		return Constraint(std::move(terms), Relation::le, activity + rng.between(-1, 1));
	case 1:
		return Constraint(std::move(terms), Relation::ge, activity + rng.between(-1, 1));
	default:
		return Constraint(std::move(terms), Relation::eq, activity + (rng.chance(1, 4) ? 1 : 0));
	}
}

} // namespace gen_detail

/// Random instance with a valid protrusion decomposition: Y0 of k variables
/// with a few rows inside it, and `parts` parts, each grown from a boundary
/// of at most r variables of Y0 by attaching new variables to at most r - 1
/// variables of an existing bag (so every part plus its neighbourhood has
/// treewidth at most r - 1). Variables are shuffled. Domains are [0, d - 1].
inline ProtrusionInstance gen_random_protrusion(size_t k, int r, int64_t d, size_t parts, uint64_t seed,
						size_t max_part_size = 3)
{
	if (r < 1)
		throw InvalidInput("gen_random_protrusion: r must be at least 1");
	if (d < 2)
		throw InvalidInput("gen_random_protrusion: d must be at least 2");
	if (max_part_size < 1)
		throw InvalidInput("gen_random_protrusion: parts need at least one variable");
	SeededRng rng(seed);

	// Build in a scratch labelling (Y0 first), shuffle at the end.
	std::vector<std::vector<VarIndex>> part_vars(parts);
	std::vector<std::vector<VarIndex>> supports;
	size_t count = k;
	std::vector<VarIndex> y0(k);
	std::iota(y0.begin(), y0.end(), 0);

	for (size_t e = 0, rows = rng.below(k + 1); e < rows && k > 0; ++e) {
		auto support = rng.sample(y0, 1 + rng.below(std::min<size_t>(k, 2)));
		supports.push_back(support);
	}
	for (size_t i = 0; i < parts; ++i) {
		size_t width = std::min<size_t>(k, static_cast<size_t>(r));
		std::vector<std::vector<VarIndex>> bags{rng.sample(y0, width == 0 ? 0 : 1 + rng.below(width))};
		size_t size = 1 + rng.below(max_part_size);
		for (size_t a = 0; a < size; ++a) {
			VarIndex v = count++;
			part_vars[i].push_back(v);
			const auto &host = bags[rng.below(bags.size())];
			auto attach = rng.sample(host, rng.below(std::min<size_t>(host.size(), r - 1) + 1));
			auto bag = attach;
			bag.push_back(v);
			std::sort(bag.begin(), bag.end());
			bags.push_back(bag);
			supports.push_back(bag);
			if (bag.size() > 1 && rng.chance(1, 3))
				supports.push_back(rng.sample(bag, 1 + rng.below(bag.size())));
		}
	}

	std::vector<VarIndex> label(count);
	std::iota(label.begin(), label.end(), 0);
	rng.shuffle(label);
	Assignment planted(count);
	for (auto &p : planted)
		p = rng.between(0, d - 1);

	std::vector<VarIndex> scratch_of(count);
	for (VarIndex v = 0; v < count; ++v)
		scratch_of[label[v]] = v;
	ProtrusionInstance out;
	for (VarIndex v = 0; v < count; ++v) {
		VarIndex orig = scratch_of[v];
		std::string name = orig < k ? "z" + std::to_string(orig + 1) : "w" + std::to_string(orig - k + 1);
		out.ilp.add_variable(name, {0, d - 1});
	}
	for (const auto &support : supports) {
		Constraint c = gen_detail::planted_row(rng, support, planted);
		for (auto &t : c.terms)
			t.var = label[t.var];
		out.ilp.add_constraint(Constraint(std::move(c.terms), c.rel, c.rhs));
	}

	for (VarIndex v : y0)
		out.pd.y0.push_back(label[v]);
	std::sort(out.pd.y0.begin(), out.pd.y0.end());
	for (auto &p : part_vars) {
		std::vector<VarIndex> mapped;
		for (VarIndex v : p)
			mapped.push_back(label[v]);
		std::sort(mapped.begin(), mapped.end());
		out.pd.parts.push_back(std::move(mapped));
	}
	out.pd.r = r;
	out.pd.alpha = std::max(k, parts);
	return out;
}

} // namespace ilpk
