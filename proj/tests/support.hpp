#pragma once

// Seeded instance generators and combinatorial brute forces shared by the
// unit tests and the acceptance runner.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ilpk/boundary.hpp"
#include "ilpk/generators.hpp"
#include "ilpk/ilp.hpp"

namespace ilpk::testing {

struct RandomIlpOptions {
	size_t min_vars = 1;
	size_t max_vars = 8;
	int64_t max_domain = 3;  // domain sizes are drawn from [1, max_domain]
	int64_t min_lo = 0;
	int64_t max_lo = 1;
	size_t max_attach = 3;   // new variables attach to at most this many bag members
	size_t max_rows = 10;
	int64_t max_coeff = 2;
};

// Random instance whose Gaifman graph has treewidth at most max_attach: every
// new variable joins a subset of an existing bag, and every row lives inside
// one bag. Right-hand sides are centred on the activity at a random point so
// that roughly half of the instances are feasible.
inline Ilp random_bounded_tw_ilp(SeededRng &rng, const RandomIlpOptions &opt = {})
{
	size_t n = static_cast<size_t>(rng.between(static_cast<int64_t>(opt.min_vars), static_cast<int64_t>(opt.max_vars)));
	Ilp ilp;
	Assignment planted;
	std::vector<std::vector<VarIndex>> bags;
	for (size_t v = 0; v < n; ++v) {
		int64_t lo = rng.between(opt.min_lo, opt.max_lo);
		int64_t size = rng.between(1, opt.max_domain);
		ilp.add_variable("v" + std::to_string(v), {lo, lo + size - 1});
		planted.push_back(rng.between(lo, lo + size - 1));
		std::vector<VarIndex> bag;
		if (!bags.empty()) {
			const auto &host = bags[rng.below(bags.size())];
			bag = rng.sample(host, rng.below(std::min(host.size(), opt.max_attach) + 1));
		}
		bag.push_back(v);
		bags.push_back(bag);
	}
	size_t rows = rng.below(opt.max_rows + 1);
	for (size_t e = 0; e < rows; ++e) {
		const auto &bag = bags[rng.below(bags.size())];
		auto support = rng.sample(bag, 1 + rng.below(bag.size()));
		std::vector<Term> terms;
		int64_t activity = 0;
		for (VarIndex v : support) {
			int64_t c = rng.between(1, opt.max_coeff) * (rng.chance(1, 2) ? 1 : -1);
			terms.push_back({v, c});
			activity += c * planted[v];
		}
		int64_t jitter = rng.between(-2, 1);
		switch (rng.below(3)) {
		case 0:
			ilp.add_constraint(Constraint(std::move(terms), Relation::le, activity + jitter));
			break;
		case 1:
			ilp.add_constraint(Constraint(std::move(terms), Relation::ge, activity - jitter));
			break;
		default:
			ilp.add_constraint(Constraint(std::move(terms), Relation::eq, activity + (rng.chance(1, 3) ? 1 : 0)));
		}
	}
	return ilp;
}

inline BoundariedIlp random_bilp(SeededRng &rng, size_t max_r, const RandomIlpOptions &opt = {})
{
	Ilp ilp = random_bounded_tw_ilp(rng, opt);
	std::vector<VarIndex> all(ilp.num_vars());
	for (size_t i = 0; i < all.size(); ++i)
		all[i] = i;
	size_t r = std::min(ilp.num_vars(), static_cast<size_t>(1 + rng.below(max_r)));
	auto boundary = all;
	rng.shuffle(boundary);
	boundary.resize(r);
	return BoundariedIlp(std::move(ilp), std::move(boundary));
}

// Network matrix of a random directed tree on rows + 1 nodes: one row per tree
// arc, one column per random node pair, entries +-1 along the tree path.
inline std::vector<std::vector<int64_t>> random_network_matrix(SeededRng &rng, size_t rows, size_t cols)
{
	size_t nodes = rows + 1;
	std::vector<size_t> parent(nodes, 0), depth(nodes, 0);
	std::vector<int64_t> dir(nodes, 1); // arc of node i points to its parent when +1
	for (size_t i = 1; i < nodes; ++i) {
		parent[i] = rng.below(i);
		depth[i] = depth[parent[i]] + 1;
		dir[i] = rng.chance(1, 2) ? 1 : -1;
	}
	std::vector<std::vector<int64_t>> m(rows, std::vector<int64_t>(cols, 0));
	for (size_t j = 0; j < cols; ++j) {
		size_t u = rng.below(nodes), w = rng.below(nodes);
		// walk u up (direction of travel: towards parent), w up (travel away from parent)
		while (u != w) {
			if (depth[u] >= depth[w]) {
				m[u - 1][j] = dir[u];
				u = parent[u];
			} else {
				m[w - 1][j] = -dir[w];
				w = parent[w];
			}
		}
	}
	return m;
}

// System over `cols` variables whose constraint matrix is a network matrix,
// with integral right-hand sides near a random point and random relations.
inline Ilp random_network_ilp(SeededRng &rng, size_t max_vars = 6, int64_t max_domain = 3)
{
	size_t cols = 1 + rng.below(max_vars);
	size_t rows = 1 + rng.below(4);
	auto m = random_network_matrix(rng, rows, cols);
	Ilp ilp;
	Assignment planted;
	for (size_t j = 0; j < cols; ++j) {
		int64_t size = rng.between(1, max_domain);
		ilp.add_variable("y" + std::to_string(j), {0, size - 1});
		planted.push_back(rng.between(0, size - 1));
	}
	for (size_t i = 0; i < rows; ++i) {
		std::vector<Term> terms;
		int64_t activity = 0;
		for (size_t j = 0; j < cols; ++j)
			if (m[i][j] != 0) {
				terms.push_back({j, m[i][j]});
				activity += m[i][j] * planted[j];
			}
		if (terms.empty())
			continue;
		int64_t jitter = rng.between(-2, 1);
		switch (rng.below(3)) {
		case 0:
			ilp.add_constraint(Constraint(std::move(terms), Relation::le, activity + jitter));
			break;
		case 1:
			ilp.add_constraint(Constraint(std::move(terms), Relation::ge, activity - jitter));
			break;
		default:
			ilp.add_constraint(Constraint(std::move(terms), Relation::eq, activity + (rng.chance(1, 4) ? 1 : 0)));
		}
	}
	return ilp;
}

// Boundaried system whose residual (non-boundary columns) is a network
// matrix; the r boundary columns carry arbitrary small coefficients.
inline BoundariedIlp random_tu_bilp(SeededRng &rng, size_t r, int64_t max_domain = 3)
{
	size_t cols = 1 + rng.below(4);
	size_t rows = 1 + rng.below(3);
	auto m = random_network_matrix(rng, rows, cols);
	Ilp ilp;
	Assignment planted;
	std::vector<VarIndex> boundary;
	for (size_t i = 0; i < r; ++i) {
		int64_t size = rng.between(2, max_domain);
		boundary.push_back(ilp.add_variable("b" + std::to_string(i), {0, size - 1}));
		planted.push_back(rng.between(0, size - 1));
	}
	for (size_t j = 0; j < cols; ++j) {
		int64_t size = rng.between(1, max_domain);
		ilp.add_variable("y" + std::to_string(j), {0, size - 1});
		planted.push_back(rng.between(0, size - 1));
	}
	for (size_t i = 0; i < rows; ++i) {
		std::vector<Term> terms;
		int64_t activity = 0;
		for (size_t k = 0; k < r; ++k) {
			int64_t c = rng.between(-2, 2);
			if (c != 0) {
				terms.push_back({k, c});
				activity += c * planted[k];
			}
		}
		for (size_t j = 0; j < cols; ++j)
			if (m[i][j] != 0) {
				terms.push_back({r + j, m[i][j]});
				activity += m[i][j] * planted[r + j];
			}
		if (terms.empty())
			continue;
		int64_t jitter = rng.between(-2, 1);
		switch (rng.below(3)) {
		case 0:
			ilp.add_constraint(Constraint(std::move(terms), Relation::le, activity + jitter));
			break;
		case 1:
			ilp.add_constraint(Constraint(std::move(terms), Relation::ge, activity - jitter));
			break;
		default:
			ilp.add_constraint(Constraint(std::move(terms), Relation::eq, activity));
		}
	}
	return BoundariedIlp(std::move(ilp), std::move(boundary));
}

inline VarIndex var_named(const Ilp &ilp, const std::string &name)
{
	for (VarIndex v = 0; v < ilp.num_vars(); ++v)
		if (ilp.var(v).name == name)
			return v;
	throw InvalidInput("no variable named " + name);
}

inline SimpleGraph random_graph(SeededRng &rng, size_t n)
{
	SimpleGraph g{n, {}};
	for (size_t u = 0; u < n; ++u)
		for (size_t v = u + 1; v < n; ++v)
			if (rng.chance(1, 2))
				g.edges.push_back({u, v});
	return g;
}

inline bool subset_sum_brute(const std::vector<int64_t> &items, int64_t target)
{
	for (uint64_t mask = 0; mask < (uint64_t{1} << items.size()); ++mask) {
		int64_t sum = 0;
		for (size_t i = 0; i < items.size(); ++i)
			if (mask >> i & 1)
				sum += items[i];
		if (sum == target)
			return true;
	}
	return false;
}

inline bool hitting_set_brute(size_t universe, const std::vector<std::vector<size_t>> &family, int64_t k)
{
	for (uint64_t mask = 0; mask < (uint64_t{1} << universe); ++mask) {
		if (static_cast<int64_t>(__builtin_popcountll(mask)) > k)
			continue;
		bool hits = std::all_of(family.begin(), family.end(), [&](const auto &set) {
			return std::any_of(set.begin(), set.end(), [&](size_t u) { return mask >> u & 1; });
		});
		if (hits)
			return true;
	}
	return false;
}

inline bool independent_set_brute(const SimpleGraph &g, int64_t k)
{
	for (uint64_t mask = 0; mask < (uint64_t{1} << g.n); ++mask) {
		if (static_cast<int64_t>(__builtin_popcountll(mask)) < k)
			continue;
		bool independent = std::none_of(g.edges.begin(), g.edges.end(),
						[&](const auto &e) { return (mask >> e.first & 1) && (mask >> e.second & 1); });
		if (independent)
			return true;
	}
	return false;
}

inline SimpleGraph complete_graph(size_t n)
{
	SimpleGraph g{n, {}};
	for (size_t u = 0; u < n; ++u)
		for (size_t v = u + 1; v < n; ++v)
			g.edges.push_back({u, v});
	return g;
}

// Set of integers {lo..hi} as a boundary set of arity one.
inline bool is_interval(const BoundarySet &s)
{
	if (s.tuples.empty())
		return true;
	int64_t lo = s.tuples.begin()->front(), hi = s.tuples.rbegin()->front();
	return static_cast<int64_t>(s.tuples.size()) == hi - lo + 1;
}

} // namespace ilpk::testing
