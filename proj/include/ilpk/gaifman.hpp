#pragma once

// Gaifman graphs of constraint matrices, tree decompositions (validation,
// exact and heuristic construction) and nice Gaifman decompositions, i.e.
// nice tree decompositions extended with one constraint node per row.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "ilp.hpp"

namespace ilpk {

class GaifmanGraph {
public:
	GaifmanGraph() = default;
	explicit GaifmanGraph(size_t n) : adj_(n) {}

	size_t num_vertices() const { return adj_.size(); }

	void add_edge(VarIndex u, VarIndex v)
	{
		if (u == v)
			return;
		auto insert = [](std::vector<VarIndex> &list, VarIndex x) {
			auto it = std::lower_bound(list.begin(), list.end(), x);
			if (it == list.end() || *it != x)
				list.insert(it, x);
		};
		insert(adj_.at(u), v);
		insert(adj_.at(v), u);
	}

	bool has_edge(VarIndex u, VarIndex v) const
	{
		const auto &list = adj_.at(u);
		return std::binary_search(list.begin(), list.end(), v);
	}

	const std::vector<VarIndex> &neighbors(VarIndex v) const { return adj_.at(v); }

	size_t num_edges() const
	{
		size_t e = 0;
		for (const auto &list : adj_)
			e += list.size();
		return e / 2;
	}

	std::vector<std::pair<VarIndex, VarIndex>> edges() const
	{
		std::vector<std::pair<VarIndex, VarIndex>> out;
		for (VarIndex u = 0; u < adj_.size(); ++u)
			for (VarIndex v : adj_[u])
				if (u < v)
					out.emplace_back(u, v);
		return out;
	}

	/// Subgraph induced by `vertices`, relabelled 0..k-1 in the given order.
	GaifmanGraph induced(const std::vector<VarIndex> &vertices) const
	{
		std::vector<size_t> pos(adj_.size(), SIZE_MAX);
		for (size_t i = 0; i < vertices.size(); ++i)
			pos[vertices[i]] = i;
		GaifmanGraph h(vertices.size());
		for (size_t i = 0; i < vertices.size(); ++i)
			for (VarIndex w : adj_[vertices[i]])
				if (pos[w] != SIZE_MAX)
					h.add_edge(i, pos[w]);
		return h;
	}

	friend bool operator==(const GaifmanGraph &, const GaifmanGraph &) = default;

private:
	std::vector<std::vector<VarIndex>> adj_;
};

/// Vertices are variables; two variables are adjacent iff some row has
/// nonzero coefficients on both. Each row's support becomes a clique.
inline GaifmanGraph build_gaifman(const Ilp &ilp)
{
	GaifmanGraph g(ilp.num_vars());
	for (const auto &c : ilp.constraints())
		for (size_t i = 0; i < c.terms.size(); ++i)
			for (size_t j = i + 1; j < c.terms.size(); ++j)
				g.add_edge(c.terms[i].var, c.terms[j].var);
	return g;
}

inline constexpr size_t no_parent = SIZE_MAX;

/// Rooted tree decomposition: one bag per node, parent links, a designated root.
struct TreeDecomposition {
	std::vector<std::vector<VarIndex>> bags;
	std::vector<size_t> parent;
	size_t root = 0;

	size_t num_nodes() const { return bags.size(); }

	int width() const
	{
		int w = -1;
		for (const auto &b : bags)
			w = std::max(w, static_cast<int>(b.size()) - 1);
		return w;
	}

	friend bool operator==(const TreeDecomposition &, const TreeDecomposition &) = default;
};

struct Violation {
	std::string rule;
	std::string detail;
};

struct ValidationReport {
	std::vector<Violation> violations;
	/// Checks that could not be carried out (e.g. exact treewidth beyond the cap).
	std::vector<std::string> unchecked;
	/// Width of the checked decomposition, when one was checked.
	std::optional<int> width;

	bool ok() const { return violations.empty(); }
	void add(std::string rule, std::string detail) { violations.push_back({std::move(rule), std::move(detail)}); }

	bool has(const std::string &rule) const
	{
		return std::any_of(violations.begin(), violations.end(),
				   [&](const Violation &v) { return v.rule == rule; });
	}

	std::string summary() const
	{
		std::string s;
		for (const auto &v : violations) {
			if (!s.empty())
				s += "; ";
			s += v.rule + ": " + v.detail;
		}
		return s;
	}
};

namespace detail {

// Checks parent links: single root, parents in range, no cycles.
inline void check_rooted_tree(const std::vector<size_t> &parent, size_t root, ValidationReport &report)
{
	size_t n = parent.size();
	if (n == 0)
		return;
	if (root >= n) {
		report.add("structure", "root " + std::to_string(root) + " out of range");
		return;
	}
	if (parent[root] != no_parent)
		report.add("structure", "root node has a parent");
	for (size_t i = 0; i < n; ++i) {
		if (i != root && parent[i] == no_parent)
			report.add("structure", "node " + std::to_string(i) + " has no parent but is not the root");
		else if (parent[i] != no_parent && parent[i] >= n)
			report.add("structure", "node " + std::to_string(i) + " has an out-of-range parent");
	}
	if (!report.ok())
		return;
	// Walking up from any node must reach the root within n steps.
	std::vector<int> state(n, 0); // 0 unknown, 1 on path, 2 reaches root
	state[root] = 2;
	for (size_t i = 0; i < n; ++i) {
		std::vector<size_t> path;
		size_t cur = i;
		while (state[cur] == 0) {
			state[cur] = 1;
			path.push_back(cur);
			cur = parent[cur];
		}
		if (state[cur] == 1) {
			report.add("structure", "parent links contain a cycle through node " + std::to_string(cur));
			return;
		}
		for (size_t p : path)
			state[p] = 2;
	}
}

} // namespace detail

/// Checks (i) vertex cover, (ii) edge cover, (iii) connectivity of each
/// vertex's occurrence set, plus the tree structure itself; reports width.
inline ValidationReport validate_tree_decomposition(const GaifmanGraph &g, const TreeDecomposition &td)
{
	ValidationReport report;
	size_t nodes = td.bags.size();
	if (td.parent.size() != nodes) {
		report.add("structure", "parent list has " + std::to_string(td.parent.size()) + " entries for " +
						std::to_string(nodes) + " bags");
		return report;
	}
	detail::check_rooted_tree(td.parent, td.root, report);
	if (!report.ok())
		return report;

	std::vector<std::vector<char>> in_bag(nodes);
	for (size_t i = 0; i < nodes; ++i) {
		in_bag[i].assign(g.num_vertices(), 0);
		for (VarIndex v : td.bags[i]) {
			if (v >= g.num_vertices()) {
				report.add("vertex-range", "bag " + std::to_string(i) + " contains unknown vertex " +
								   std::to_string(v));
				continue;
			}
			in_bag[i][v] = 1;
		}
	}
	if (!report.ok())
		return report;

	std::vector<size_t> occurrences(g.num_vertices(), 0), linked(g.num_vertices(), 0);
	for (size_t i = 0; i < nodes; ++i)
		for (VarIndex v = 0; v < g.num_vertices(); ++v)
			if (in_bag[i][v]) {
				++occurrences[v];
				if (td.parent[i] != no_parent && in_bag[td.parent[i]][v])
					++linked[v];
			}
	for (VarIndex v = 0; v < g.num_vertices(); ++v) {
		if (occurrences[v] == 0)
			report.add("cover", "vertex " + std::to_string(v) + " is in no bag");
		else if (occurrences[v] - linked[v] != 1)
			report.add("connected", "bags containing vertex " + std::to_string(v) +
							" do not form a connected subtree");
	}
	for (auto [u, v] : g.edges()) {
		bool covered = false;
		for (size_t i = 0; i < nodes && !covered; ++i)
			covered = in_bag[i][u] && in_bag[i][v];
		if (!covered)
			report.add("edge", "edge {" + std::to_string(u) + "," + std::to_string(v) + "} is in no bag");
	}
	report.width = td.width();
	return report;
}

/// Decomposition induced by eliminating vertices in `order`: node i holds the
/// i-th eliminated vertex and its not-yet-eliminated neighbours in the fill
/// graph, and hangs below the node of the earliest-eliminated such neighbour.
/// Component roots hang below the last node, which is the root.
inline TreeDecomposition decomposition_from_order(const GaifmanGraph &g, const std::vector<VarIndex> &order)
{
	size_t n = g.num_vertices();
	if (order.size() != n)
		throw InvalidInput("elimination order does not list every vertex exactly once");
	std::vector<size_t> pos(n, SIZE_MAX);
	for (size_t i = 0; i < n; ++i) {
		if (order[i] >= n || pos[order[i]] != SIZE_MAX)
			throw InvalidInput("elimination order does not list every vertex exactly once");
		pos[order[i]] = i;
	}
	std::vector<std::set<VarIndex>> adj(n);
	for (auto [u, v] : g.edges()) {
		adj[u].insert(v);
		adj[v].insert(u);
	}
	TreeDecomposition td;
	td.bags.resize(n);
	td.parent.assign(n, no_parent);
	for (size_t i = 0; i < n; ++i) {
		VarIndex v = order[i];
		std::vector<VarIndex> higher(adj[v].begin(), adj[v].end());
		for (size_t a = 0; a < higher.size(); ++a) {
			adj[higher[a]].erase(v);
			for (size_t b = a + 1; b < higher.size(); ++b) {
				adj[higher[a]].insert(higher[b]);
				adj[higher[b]].insert(higher[a]);
			}
		}
		adj[v].clear();
		td.bags[i] = higher;
		td.bags[i].push_back(v);
		std::sort(td.bags[i].begin(), td.bags[i].end());
		size_t first = SIZE_MAX;
		for (VarIndex h : higher)
			first = std::min(first, pos[h]);
		td.parent[i] = first == SIZE_MAX ? no_parent : first;
	}
	if (n > 0) {
		td.root = n - 1;
		for (size_t i = 0; i + 1 < n; ++i)
			if (td.parent[i] == no_parent)
				td.parent[i] = n - 1;
	}
	return td;
}

struct TreewidthResult {
	int width = -1;
	TreeDecomposition td;
	std::vector<VarIndex> order;
};

/// Greedy min-fill elimination, ties broken by lowest vertex index. The
/// returned decomposition is valid; its width is an upper bound.
inline TreewidthResult treewidth_heuristic(const GaifmanGraph &g)
{
	size_t n = g.num_vertices();
	std::vector<std::set<VarIndex>> adj(n);
	for (auto [u, v] : g.edges()) {
		adj[u].insert(v);
		adj[v].insert(u);
	}
	std::vector<bool> gone(n, false);
	std::vector<VarIndex> order;
	for (size_t step = 0; step < n; ++step) {
		VarIndex best = SIZE_MAX;
		size_t best_fill = SIZE_MAX;
		for (VarIndex v = 0; v < n; ++v) {
			if (gone[v])
				continue;
			std::vector<VarIndex> nb(adj[v].begin(), adj[v].end());
			size_t fill = 0;
			for (size_t a = 0; a < nb.size() && fill < best_fill; ++a)
				for (size_t b = a + 1; b < nb.size(); ++b)
					if (!adj[nb[a]].count(nb[b]))
						++fill;
			if (fill < best_fill) {
				best_fill = fill;
				best = v;
			}
		}
		std::vector<VarIndex> nb(adj[best].begin(), adj[best].end());
		for (size_t a = 0; a < nb.size(); ++a) {
			adj[nb[a]].erase(best);
			for (size_t b = a + 1; b < nb.size(); ++b) {
				adj[nb[a]].insert(nb[b]);
				adj[nb[b]].insert(nb[a]);
			}
		}
		adj[best].clear();
		gone[best] = true;
		order.push_back(best);
	}
	TreewidthResult result;
	result.td = decomposition_from_order(g, order);
	result.width = result.td.width();
	result.order = std::move(order);
	return result;
}

namespace detail {

// Exact treewidth of a small connected graph (k <= 30 vertices, adjacency as
// bitmasks) by dynamic programming over vertex subsets: tw(S) is the best
// width of eliminating S first, tw(S) = min_v max(tw(S-v), |Q(S-v, v)|) where
// Q(S, v) are the vertices outside S+v reachable from v through S.
// Returns the width and an optimal elimination order of all k vertices.
inline std::pair<int, std::vector<size_t>> exact_subset_dp(const std::vector<uint32_t> &adj)
{
	size_t k = adj.size();
	if (k == 0)
		return {-1, {}};
	uint32_t full = k == 32 ? ~uint32_t{0} : (uint32_t{1} << k) - 1;

	auto q_size = [&](uint32_t s, size_t v) {
		uint32_t comp = uint32_t{1} << v;
		uint32_t frontier = comp;
		uint32_t reach = 0;
		while (frontier) {
			uint32_t next = 0;
			for (uint32_t f = frontier; f; f &= f - 1)
				next |= adj[__builtin_ctz(f)];
			reach |= next;
			next &= s & ~comp;
			comp |= next;
			frontier = next;
		}
		return __builtin_popcount(reach & ~comp & ~s);
	};

	std::vector<uint8_t> tw(size_t{1} << k, 0);
	for (uint64_t s = 1; s <= full; ++s) {
		int best = 255;
		for (uint32_t rest = static_cast<uint32_t>(s); rest; rest &= rest - 1) {
			size_t v = __builtin_ctz(rest);
			uint32_t without = static_cast<uint32_t>(s) & ~(uint32_t{1} << v);
			int sub = tw[without];
			if (sub >= best)
				continue;
			best = std::min(best, std::max(sub, q_size(without, v)));
		}
		tw[s] = static_cast<uint8_t>(best);
	}

	std::vector<size_t> reversed;
	uint32_t s = full;
	while (s) {
		for (uint32_t rest = s; rest; rest &= rest - 1) {
			size_t v = __builtin_ctz(rest);
			uint32_t without = s & ~(uint32_t{1} << v);
			if (std::max<int>(tw[without], q_size(without, v)) == tw[s]) {
				reversed.push_back(v);
				s = without;
				break;
			}
		}
	}
	return {tw[full], std::vector<size_t>(reversed.rbegin(), reversed.rend())};
}

} // namespace detail

/// Exact treewidth with a witnessing decomposition.
///
/// Simplicial vertices are eliminated first (this never increases the width);
/// the remaining graph is split into connected components and each is solved
/// by subset dynamic programming. Throws ResourceLimit ("instance too large
/// for exact mode") when a remaining component exceeds the vertex cap.
/// The empty graph has width -1 and an empty decomposition.
inline TreewidthResult treewidth_exact(const GaifmanGraph &g, const Caps &caps = default_caps())
{
	size_t n = g.num_vertices();
	std::vector<std::set<VarIndex>> adj(n);
	for (auto [u, v] : g.edges()) {
		adj[u].insert(v);
		adj[v].insert(u);
	}
	std::vector<bool> gone(n, false);
	std::vector<VarIndex> order;

	auto is_simplicial = [&](VarIndex v) {
		std::vector<VarIndex> nb(adj[v].begin(), adj[v].end());
		for (size_t a = 0; a < nb.size(); ++a)
			for (size_t b = a + 1; b < nb.size(); ++b)
				if (!adj[nb[a]].count(nb[b]))
					return false;
		return true;
	};
	for (bool progress = true; progress;) {
		progress = false;
		for (VarIndex v = 0; v < n; ++v) {
			if (gone[v] || !is_simplicial(v))
				continue;
			for (VarIndex w : adj[v])
				adj[w].erase(v);
			adj[v].clear();
			gone[v] = true;
			order.push_back(v);
			progress = true;
		}
	}

	std::vector<bool> seen(n, false);
	for (VarIndex start = 0; start < n; ++start) {
		if (gone[start] || seen[start])
			continue;
		std::vector<VarIndex> comp{start};
		seen[start] = true;
		for (size_t i = 0; i < comp.size(); ++i)
			for (VarIndex w : adj[comp[i]])
				if (!seen[w]) {
					seen[w] = true;
					comp.push_back(w);
				}
		std::sort(comp.begin(), comp.end());
		if (comp.size() > static_cast<size_t>(caps.exact_tw_vertices) || comp.size() > 30)
			throw ResourceLimit("instance too large for exact mode: a component of " +
					    std::to_string(comp.size()) + " vertices exceeds the exact-treewidth cap of " +
					    std::to_string(caps.exact_tw_vertices));
		std::vector<uint32_t> mask(comp.size(), 0);
		for (size_t i = 0; i < comp.size(); ++i)
			for (size_t j = 0; j < comp.size(); ++j)
				if (adj[comp[i]].count(comp[j]))
					mask[i] |= uint32_t{1} << j;
		auto [w, local] = detail::exact_subset_dp(mask);
		for (size_t i : local)
			order.push_back(comp[i]);
	}

	TreewidthResult result;
	result.td = decomposition_from_order(g, order);
	result.width = result.td.width();
	result.order = std::move(order);
	return result;
}

enum class NodeKind { leaf, join, introduce, forget, constraint };

inline const char *node_kind_name(NodeKind k)
{
	switch (k) {
	case NodeKind::leaf:
		return "leaf";
	case NodeKind::join:
		return "join";
	case NodeKind::introduce:
		return "introduce";
	case NodeKind::forget:
		return "forget";
	case NodeKind::constraint:
		return "constraint";
	}
	return "?";
}

struct NiceNode {
	NodeKind kind = NodeKind::leaf;
	std::vector<VarIndex> bag; // ascending
	std::vector<size_t> children;
	std::optional<size_t> row; // constraint nodes only

	friend bool operator==(const NiceNode &, const NiceNode &) = default;
};

/// Nice tree decomposition of the Gaifman graph with constraint nodes.
/// `row_node[j]` is the constraint node that owns row j of the normalized
/// instance. An instance without variables has an empty decomposition.
struct NiceGaifmanDecomposition {
	std::vector<NiceNode> nodes;
	size_t root = 0;
	std::vector<size_t> row_node;

	int width() const
	{
		int w = -1;
		for (const auto &node : nodes)
			w = std::max(w, static_cast<int>(node.bag.size()) - 1);
		return w;
	}

	std::vector<size_t> parents() const
	{
		std::vector<size_t> parent(nodes.size(), no_parent);
		for (size_t i = 0; i < nodes.size(); ++i)
			for (size_t c : nodes[i].children)
				if (c < nodes.size())
					parent[c] = i;
		return parent;
	}

	TreeDecomposition as_tree_decomposition() const
	{
		TreeDecomposition td;
		for (const auto &node : nodes)
			td.bags.push_back(node.bag);
		td.parent = parents();
		td.root = root;
		return td;
	}

	/// Node ids with children before parents.
	std::vector<size_t> post_order() const
	{
		std::vector<size_t> out;
		if (nodes.empty())
			return out;
		std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
		while (!stack.empty()) {
			auto &[node, next] = stack.back();
			if (next < nodes[node].children.size()) {
				size_t child = nodes[node].children[next++];
				stack.push_back({child, 0});
			} else {
				out.push_back(node);
				stack.pop_back();
			}
		}
		return out;
	}

	friend bool operator==(const NiceGaifmanDecomposition &, const NiceGaifmanDecomposition &) = default;
};

namespace detail {

inline bool bag_contains(const std::vector<VarIndex> &bag, VarIndex v)
{
	return std::binary_search(bag.begin(), bag.end(), v);
}

inline std::vector<VarIndex> bag_with(std::vector<VarIndex> bag, VarIndex v)
{
	bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
	return bag;
}

inline std::vector<VarIndex> bag_without(std::vector<VarIndex> bag, VarIndex v)
{
	bag.erase(std::lower_bound(bag.begin(), bag.end(), v));
	return bag;
}

inline bool subset_of(const std::vector<VarIndex> &a, const std::vector<VarIndex> &b)
{
	return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Builds the nice tree (without constraint nodes) bottom-up. Pieces are
// either still-unmaterialized chains of leaf/introduce/forget steps or a
// materialized node followed by such steps. Child chains are threaded
// through one another whenever that keeps bags within the width, which
// avoids join nodes and the repeated introductions they cause.
class NiceBuilder {
public:
	NiceBuilder(std::vector<std::vector<VarIndex>> bags, std::vector<std::vector<size_t>> children, size_t width_bound)
		: bags_(std::move(bags)), children_(std::move(children)), max_bag_(width_bound)
	{
	}

	std::vector<NiceNode> nodes;

	size_t build(size_t root) { return materialize(process(root)); }

private:
	enum class Step { leaf, intro, forget };
	struct Op {
		Step step;
		VarIndex v;
	};
	struct Piece {
		std::optional<size_t> base;
		std::vector<Op> ops;
	};

	std::vector<std::vector<VarIndex>> bags_;
	std::vector<std::vector<size_t>> children_;
	size_t max_bag_;

	size_t add(NodeKind kind, std::vector<VarIndex> bag, std::vector<size_t> children)
	{
		nodes.push_back({kind, std::move(bag), std::move(children), std::nullopt});
		return nodes.size() - 1;
	}

	size_t materialize(const Piece &piece)
	{
		std::optional<size_t> cur = piece.base;
		for (const auto &op : piece.ops) {
			switch (op.step) {
			case Step::leaf:
				cur = add(NodeKind::leaf, {op.v}, {});
				break;
			case Step::intro:
				cur = add(NodeKind::introduce, bag_with(nodes[*cur].bag, op.v), {*cur});
				break;
			case Step::forget:
				cur = add(NodeKind::forget, bag_without(nodes[*cur].bag, op.v), {*cur});
				break;
			}
		}
		return *cur;
	}

	// Largest bag seen when replaying `ops` on top of `bag`.
	static size_t replay_width(std::vector<VarIndex> bag, const std::vector<Op> &ops)
	{
		size_t widest = bag.size();
		for (const auto &op : ops) {
			if (op.step == Step::forget) {
				if (bag_contains(bag, op.v))
					bag = bag_without(bag, op.v);
			} else if (!bag_contains(bag, op.v)) {
				bag = bag_with(bag, op.v);
			}
			widest = std::max(widest, bag.size());
		}
		return widest;
	}

	static void append_on(std::vector<Op> &out, std::vector<VarIndex> bag, const std::vector<Op> &ops)
	{
		for (const auto &op : ops) {
			if (op.step == Step::forget) {
				bag = bag_without(bag, op.v);
				out.push_back(op);
			} else if (!bag_contains(bag, op.v)) {
				bag = bag_with(bag, op.v);
				out.push_back({Step::intro, op.v});
			}
		}
	}

	Piece process(size_t node)
	{
		const auto &bag = bags_[node];
		std::vector<Piece> pieces;
		for (size_t c : children_[node]) {
			Piece p = process(c);
			const auto &cbag = bags_[c];
			for (VarIndex v : cbag)
				if (!bag_contains(bag, v))
					p.ops.push_back({Step::forget, v});
			for (VarIndex v : bag)
				if (!bag_contains(cbag, v))
					p.ops.push_back({Step::intro, v});
			pieces.push_back(std::move(p));
		}
		if (pieces.empty()) {
			Piece p;
			p.ops.push_back({Step::leaf, bag.front()});
			for (size_t i = 1; i < bag.size(); ++i)
				p.ops.push_back({Step::intro, bag[i]});
			return p;
		}

		std::optional<Piece> spine;
		std::vector<Piece> chains;
		for (auto &p : pieces) {
			if (!p.base && !p.ops.empty()) {
				chains.push_back(std::move(p));
				continue;
			}
			size_t id = materialize(p);
			if (!spine)
				spine = Piece{id, {}};
			else
				spine = Piece{add(NodeKind::join, bag, {materialize(*spine), id}), {}};
		}
		for (auto &chain : chains) {
			if (!spine) {
				spine = std::move(chain);
				continue;
			}
			if (replay_width(bag, chain.ops) <= max_bag_) {
				append_on(spine->ops, bag, chain.ops);
			} else {
				size_t left = materialize(*spine);
				size_t right = materialize(chain);
				spine = Piece{add(NodeKind::join, bag, {left, right}), {}};
			}
		}
		return *spine;
	}
};

} // namespace detail

/// Turns a valid tree decomposition of G(ilp) into a nice Gaifman
/// decomposition of the same width. `ilp` must be normalized.
///
/// Bags contained in a neighbouring bag are merged away first; the nice tree
/// is then built bottom-up, and finally every row is attached through a
/// constraint node spliced directly above the first node (in post-order)
/// whose bag contains the row's support.
inline NiceGaifmanDecomposition make_nice(const Ilp &ilp, const TreeDecomposition &td)
{
	if (!ilp.is_normalized())
		throw InvalidInput("make_nice: instance must be normalized (all rows <=)");
	auto report = validate_tree_decomposition(build_gaifman(ilp), td);
	if (!report.ok())
		throw InvalidInput("make_nice: invalid tree decomposition: " + report.summary());

	NiceGaifmanDecomposition ngd;
	if (ilp.num_vars() == 0) {
		for (const auto &c : ilp.constraints())
			if (!c.terms.empty())
				throw InvalidInput("make_nice: row with support in an instance without variables");
		return ngd;
	}

	// Merge nodes whose bag is contained in a neighbour's bag.
	size_t n = td.bags.size();
	std::vector<std::vector<VarIndex>> bags(td.bags);
	for (auto &b : bags) {
		std::sort(b.begin(), b.end());
		b.erase(std::unique(b.begin(), b.end()), b.end());
	}
	std::vector<size_t> parent(td.parent);
	std::vector<bool> alive(n, true);
	size_t root = td.root;
	for (bool changed = true; changed;) {
		changed = false;
		for (size_t i = 0; i < n; ++i) {
			if (!alive[i] || i == root)
				continue;
			size_t p = parent[i];
			if (detail::subset_of(bags[i], bags[p])) {
				alive[i] = false;
				for (size_t j = 0; j < n; ++j)
					if (alive[j] && parent[j] == i)
						parent[j] = p;
				changed = true;
			} else if (detail::subset_of(bags[p], bags[i])) {
				// Parent is absorbed: the child takes its place.
				bags[p] = bags[i];
				alive[i] = false;
				for (size_t j = 0; j < n; ++j)
					if (alive[j] && parent[j] == i)
						parent[j] = p;
				changed = true;
			}
		}
	}
	if (bags[root].empty()) {
		// Only possible when the root has no children left, i.e. n == 0 vertices.
		throw InvalidInput("make_nice: decomposition has an empty root bag");
	}
	std::vector<std::vector<size_t>> children(n);
	for (size_t i = 0; i < n; ++i)
		if (alive[i] && i != root)
			children[parent[i]].push_back(i);

	size_t width_bound = 0;
	for (size_t i = 0; i < n; ++i)
		if (alive[i])
			width_bound = std::max(width_bound, bags[i].size());
	detail::NiceBuilder builder(std::move(bags), std::move(children), width_bound);
	ngd.root = builder.build(root);
	ngd.nodes = std::move(builder.nodes);

	// Splice constraint nodes.
	std::vector<size_t> parent_of = ngd.parents();
	std::vector<size_t> order = ngd.post_order();
	size_t m = ilp.num_constraints();
	ngd.row_node.assign(m, no_parent);
	std::vector<size_t> pending(m);
	for (size_t j = 0; j < m; ++j)
		pending[j] = j;
	for (size_t node : order) {
		if (pending.empty())
			break;
		std::vector<size_t> still;
		size_t top = node;
		for (size_t j : pending) {
			const auto &c = ilp.constraint(j);
			bool inside = std::all_of(c.terms.begin(), c.terms.end(), [&](const Term &t) {
				return detail::bag_contains(ngd.nodes[node].bag, t.var);
			});
			if (!inside) {
				still.push_back(j);
				continue;
			}
			NiceNode cn{NodeKind::constraint, ngd.nodes[node].bag, {top}, j};
			ngd.nodes.push_back(std::move(cn));
			size_t id = ngd.nodes.size() - 1;
			ngd.row_node[j] = id;
			top = id;
		}
		if (top != node) {
			size_t p = parent_of[node];
			if (p == no_parent) {
				ngd.root = top;
			} else {
				for (auto &c : ngd.nodes[p].children)
					if (c == node)
						c = top;
			}
		}
		pending = std::move(still);
	}
	if (!pending.empty())
		throw InvalidInput("make_nice: row " + std::to_string(pending.front()) +
				   " has a support contained in no bag");
	return ngd;
}

/// Checks every property of a nice Gaifman decomposition: the underlying tree
/// decomposition, the per-kind shape rules, that each row is owned by exactly
/// one constraint node whose bag holds the row's support, and (rule
/// "node-count") the size bound 4n + m. Pass `check_size = false` to skip the
/// size bound, which is not needed for the dynamic program to be correct.
inline ValidationReport validate_nice(const Ilp &ilp, const NiceGaifmanDecomposition &ngd, bool check_size = true)
{
	ValidationReport report;
	size_t n = ilp.num_vars(), m = ilp.num_constraints();
	if (!ilp.is_normalized())
		report.add("normalized", "instance has rows that are not <=");

	if (n == 0) {
		if (!ngd.nodes.empty())
			report.add("structure", "instance without variables must have an empty decomposition");
		for (size_t j = 0; j < m; ++j)
			if (!ilp.constraint(j).terms.empty())
				report.add("row-support", "row " + std::to_string(j) + " has variables");
		report.width = -1;
		return report;
	}

	size_t count = ngd.nodes.size();
	if (count == 0) {
		report.add("cover", "decomposition has no nodes");
		return report;
	}
	std::vector<size_t> parent(count, no_parent);
	for (size_t i = 0; i < count; ++i)
		for (size_t c : ngd.nodes[i].children) {
			if (c >= count) {
				report.add("structure", "node " + std::to_string(i) + " has an out-of-range child");
				return report;
			}
			if (parent[c] != no_parent) {
				report.add("structure", "node " + std::to_string(c) + " has two parents");
				return report;
			}
			parent[c] = i;
		}
	for (size_t i = 0; i < count; ++i) {
		const auto &bag = ngd.nodes[i].bag;
		if (!std::is_sorted(bag.begin(), bag.end()) || std::adjacent_find(bag.begin(), bag.end()) != bag.end())
			report.add("bag-format", "bag of node " + std::to_string(i) + " is not strictly ascending");
	}
	if (!report.ok())
		return report;

	auto td_report = validate_tree_decomposition(build_gaifman(ilp), ngd.as_tree_decomposition());
	for (auto &v : td_report.violations)
		report.violations.push_back(std::move(v));
	if (!report.ok())
		return report;
	report.width = td_report.width;

	for (size_t i = 0; i < count; ++i) {
		const auto &node = ngd.nodes[i];
		const auto &ch = node.children;
		std::string id = "node " + std::to_string(i);
		switch (node.kind) {
		case NodeKind::leaf:
			if (!ch.empty() || node.bag.size() != 1)
				report.add("shape-leaf", id + ": leaf needs no children and exactly one variable");
			break;
		case NodeKind::join:
			if (ch.size() != 2 || ngd.nodes[ch[0]].bag != node.bag || ngd.nodes[ch[1]].bag != node.bag)
				report.add("shape-join", id + ": join needs two children with equal bags");
			break;
		case NodeKind::introduce: {
			const auto *child = ch.size() == 1 ? &ngd.nodes[ch[0]].bag : nullptr;
			if (!child || node.bag.size() != child->size() + 1 || !detail::subset_of(*child, node.bag))
				report.add("shape-introduce", id + ": introduce must add exactly one variable to its child");
			break;
		}
		case NodeKind::forget: {
			const auto *child = ch.size() == 1 ? &ngd.nodes[ch[0]].bag : nullptr;
			if (!child || child->size() != node.bag.size() + 1 || !detail::subset_of(node.bag, *child))
				report.add("shape-forget", id + ": forget must drop exactly one variable of its child");
			break;
		}
		case NodeKind::constraint:
			if (ch.size() != 1 || ngd.nodes[ch[0]].bag != node.bag)
				report.add("shape-constraint", id + ": constraint node needs one child with an equal bag");
			if (!node.row || *node.row >= m) {
				report.add("shape-constraint", id + ": constraint node without a valid row");
			} else {
				for (const auto &t : ilp.constraint(*node.row).terms)
					if (!detail::bag_contains(node.bag, t.var)) {
						report.add("row-support", "row " + std::to_string(*node.row) +
										  " has a variable outside the bag of " + id);
						break;
					}
			}
			break;
		}
		if (node.kind != NodeKind::constraint && node.row)
			report.add("shape-constraint", id + ": only constraint nodes may own a row");
	}

	std::vector<size_t> owners(m, 0);
	for (const auto &node : ngd.nodes)
		if (node.kind == NodeKind::constraint && node.row && *node.row < m)
			++owners[*node.row];
	if (ngd.row_node.size() != m)
		report.add("row-coverage", "row map has " + std::to_string(ngd.row_node.size()) + " entries for " +
						   std::to_string(m) + " rows");
	for (size_t j = 0; j < m; ++j) {
		if (owners[j] != 1)
			report.add("row-coverage", "row " + std::to_string(j) + " is owned by " +
							   std::to_string(owners[j]) + " constraint nodes");
		else if (j < ngd.row_node.size() &&
			 (ngd.row_node[j] >= count || ngd.nodes[ngd.row_node[j]].row != j))
			report.add("row-coverage", "row map entry for row " + std::to_string(j) +
							   " does not point at its constraint node");
	}

	if (check_size && count > 4 * n + m)
		report.add("node-count", std::to_string(count) + " nodes exceed the bound 4n + m = " +
						 std::to_string(4 * n + m));
	return report;
}

} // namespace ilpk
