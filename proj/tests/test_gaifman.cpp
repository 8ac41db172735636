#include <gtest/gtest.h>

#include <numeric>

#include "ilpk/gaifman.hpp"
#include "support.hpp"

using namespace ilpk;

namespace {

GaifmanGraph graph_of(size_t n, const std::vector<std::pair<VarIndex, VarIndex>> &edges)
{
	GaifmanGraph g(n);
	for (auto [u, v] : edges)
		g.add_edge(u, v);
	return g;
}

GaifmanGraph cycle(size_t n)
{
	GaifmanGraph g(n);
	for (size_t i = 0; i < n; ++i)
		g.add_edge(i, (i + 1) % n);
	return g;
}

GaifmanGraph complete(size_t n)
{
	GaifmanGraph g(n);
	for (size_t u = 0; u < n; ++u)
		for (size_t v = u + 1; v < n; ++v)
			g.add_edge(u, v);
	return g;
}

GaifmanGraph random_graph(SeededRng &rng, size_t n, uint64_t num, uint64_t den)
{
	GaifmanGraph g(n);
	for (size_t u = 0; u < n; ++u)
		for (size_t v = u + 1; v < n; ++v)
			if (rng.chance(num, den))
				g.add_edge(u, v);
	return g;
}

// Treewidth as the best elimination order over all permutations.
int treewidth_by_orders(const GaifmanGraph &g)
{
	size_t n = g.num_vertices();
	if (n == 0)
		return -1;
	std::vector<VarIndex> order(n);
	std::iota(order.begin(), order.end(), 0);
	int best = static_cast<int>(n) - 1;
	do {
		std::vector<std::set<VarIndex>> adj(n);
		for (auto [u, v] : g.edges()) {
			adj[u].insert(v);
			adj[v].insert(u);
		}
		int width = 0;
		for (VarIndex v : order) {
			width = std::max(width, static_cast<int>(adj[v].size()));
			for (VarIndex a : adj[v])
				for (VarIndex b : adj[v])
					if (a != b)
						adj[a].insert(b);
			for (VarIndex a : adj[v])
				adj[a].erase(v);
			adj[v].clear();
		}
		best = std::min(best, width);
	} while (std::next_permutation(order.begin(), order.end()));
	return best;
}

Ilp single_row_ilp(size_t n, const std::vector<VarIndex> &support)
{
	Ilp ilp;
	for (size_t i = 0; i < n; ++i)
		ilp.add_variable("x" + std::to_string(i), {0, 1});
	std::vector<Term> terms;
	for (VarIndex v : support)
		terms.push_back({v, 1});
	ilp.add_constraint(Constraint(std::move(terms), Relation::le, 1));
	return ilp;
}

} // namespace

TEST(BuildGaifman, RowsBecomeCliques)
{
	Ilp ilp;
	for (int i = 0; i < 3; ++i)
		ilp.add_variable("x" + std::to_string(i), {0, 1});
	ilp.add_constraint(Constraint({{0, 1}, {1, 1}}, Relation::le, 1));
	ilp.add_constraint(Constraint({{1, 1}, {2, 1}}, Relation::le, 1));
	auto g = build_gaifman(ilp);
	EXPECT_EQ(g.edges(), (std::vector<std::pair<VarIndex, VarIndex>>{{0, 1}, {1, 2}}));

	auto tri = build_gaifman(single_row_ilp(3, {0, 1, 2}));
	EXPECT_EQ(tri.num_edges(), 3u);

	Ilp singles;
	singles.add_variable("a", {0, 1});
	singles.add_variable("b", {0, 1});
	singles.add_constraint(Constraint({{0, 1}}, Relation::le, 0));
	singles.add_constraint(Constraint({{1, -1}}, Relation::le, 0));
	EXPECT_EQ(build_gaifman(singles).num_edges(), 0u);
}

TEST(BuildGaifman, SupportSizeMatchesClique)
{
	SeededRng rng(21);
	for (int i = 0; i < 50; ++i) {
		Ilp ilp = ilpk::testing::random_bounded_tw_ilp(rng);
		auto g = build_gaifman(ilp);
		for (const auto &c : ilp.constraints()) {
			auto s = c.support();
			for (size_t a = 0; a < s.size(); ++a)
				for (size_t b = a + 1; b < s.size(); ++b)
					EXPECT_TRUE(g.has_edge(s[a], s[b]));
		}
	}
}

TEST(ValidateTreeDecomposition, SingleBag)
{
	auto g = complete(4);
	TreeDecomposition td{{{0, 1, 2, 3}}, {no_parent}, 0};
	auto rep = validate_tree_decomposition(g, td);
	EXPECT_TRUE(rep.ok()) << rep.summary();
	EXPECT_EQ(rep.width, 3);
}

TEST(ValidateTreeDecomposition, SlidingPathBags)
{
	auto g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
	TreeDecomposition td{{{0, 1}, {1, 2}, {2, 3}}, {1, 2, no_parent}, 2};
	auto rep = validate_tree_decomposition(g, td);
	EXPECT_TRUE(rep.ok()) << rep.summary();
	EXPECT_EQ(rep.width, 1);
}

TEST(ValidateTreeDecomposition, ReportsEachRule)
{
	auto g = graph_of(3, {{0, 1}, {1, 2}, {0, 2}});
	TreeDecomposition missing_edge{{{0, 1}, {1, 2}}, {1, no_parent}, 1};
	EXPECT_TRUE(validate_tree_decomposition(g, missing_edge).has("edge"));

	TreeDecomposition missing_vertex{{{0, 1}}, {no_parent}, 0};
	EXPECT_TRUE(validate_tree_decomposition(graph_of(3, {{0, 1}}), missing_vertex).has("cover"));

	TreeDecomposition disconnected{{{0}, {1}, {0}}, {1, 2, no_parent}, 2};
	EXPECT_TRUE(validate_tree_decomposition(GaifmanGraph(2), disconnected).has("connected"));

	TreeDecomposition out_of_range{{{0, 7}}, {no_parent}, 0};
	EXPECT_TRUE(validate_tree_decomposition(GaifmanGraph(2), out_of_range).has("vertex-range"));

	TreeDecomposition cyclic{{{0}, {1}}, {1, 0}, 0};
	EXPECT_TRUE(validate_tree_decomposition(GaifmanGraph(2), cyclic).has("structure"));
}

TEST(TreewidthExact, KnownGraphs)
{
	EXPECT_EQ(treewidth_exact(complete(4)).width, 3);
	EXPECT_EQ(treewidth_exact(cycle(5)).width, 2);
	EXPECT_EQ(treewidth_exact(GaifmanGraph(5)).width, 0);
	EXPECT_EQ(treewidth_exact(GaifmanGraph(0)).width, -1);
	// tree on 7 vertices
	auto tree = graph_of(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
	EXPECT_EQ(treewidth_exact(tree).width, 1);
	// 3x3 grid
	GaifmanGraph grid(9);
	for (size_t r = 0; r < 3; ++r)
		for (size_t c = 0; c < 3; ++c) {
			if (c + 1 < 3)
				grid.add_edge(3 * r + c, 3 * r + c + 1);
			if (r + 1 < 3)
				grid.add_edge(3 * r + c, 3 * (r + 1) + c);
		}
	EXPECT_EQ(treewidth_exact(grid).width, 3);
}

TEST(TreewidthExact, MatchesAllEliminationOrders)
{
	SeededRng rng(22);
	for (int i = 0; i < 60; ++i) {
		size_t n = 1 + rng.below(7);
		auto g = random_graph(rng, n, 1 + rng.below(3), 4);
		auto res = treewidth_exact(g);
		EXPECT_EQ(res.width, treewidth_by_orders(g));
		auto rep = validate_tree_decomposition(g, res.td);
		EXPECT_TRUE(rep.ok()) << rep.summary();
		EXPECT_EQ(rep.width, res.width);
	}
}

TEST(TreewidthExact, CapIsPerComponentAfterReduction)
{
	Caps caps;
	caps.exact_tw_vertices = 6;
	// a long path reduces away completely
	GaifmanGraph path(40);
	for (size_t i = 0; i + 1 < 40; ++i)
		path.add_edge(i, i + 1);
	EXPECT_EQ(treewidth_exact(path, caps).width, 1);
	// two disjoint 5-cycles stay within the cap
	GaifmanGraph two(10);
	for (size_t i = 0; i < 5; ++i) {
		two.add_edge(i, (i + 1) % 5);
		two.add_edge(5 + i, 5 + (i + 1) % 5);
	}
	EXPECT_EQ(treewidth_exact(two, caps).width, 2);
	EXPECT_THROW(treewidth_exact(cycle(8), caps), ResourceLimit);
	try {
		treewidth_exact(cycle(8), caps);
	} catch (const ResourceLimit &e) {
		EXPECT_NE(std::string(e.what()).find("instance too large for exact mode"), std::string::npos);
	}
}

TEST(TreewidthHeuristic, KnownGraphs)
{
	EXPECT_EQ(treewidth_heuristic(GaifmanGraph(4)).width, 0);
	EXPECT_EQ(treewidth_heuristic(cycle(5)).width, 2);
	EXPECT_EQ(treewidth_heuristic(complete(5)).width, 4);
}

TEST(TreewidthHeuristic, UpperBoundsExact)
{
	SeededRng rng(23);
	for (int i = 0; i < 80; ++i) {
		size_t n = 1 + rng.below(14);
		auto g = random_graph(rng, n, 1, 1 + rng.below(4));
		auto h = treewidth_heuristic(g);
		auto rep = validate_tree_decomposition(g, h.td);
		EXPECT_TRUE(rep.ok()) << rep.summary();
		EXPECT_EQ(rep.width, h.width);
		EXPECT_GE(h.width, treewidth_exact(g).width);
	}
}

TEST(DecompositionFromOrder, ValidForAnyOrder)
{
	SeededRng rng(24);
	for (int i = 0; i < 50; ++i) {
		size_t n = 1 + rng.below(9);
		auto g = random_graph(rng, n, 1, 3);
		std::vector<VarIndex> order(n);
		std::iota(order.begin(), order.end(), 0);
		rng.shuffle(order);
		EXPECT_TRUE(validate_tree_decomposition(g, decomposition_from_order(g, order)).ok());
	}
}

TEST(MakeNice, SingleVariable)
{
	Ilp ilp;
	ilp.add_variable("x", {0, 1});
	ilp.add_constraint(Constraint({{0, 1}}, Relation::le, 0));
	TreeDecomposition td{{{0}}, {no_parent}, 0};
	auto ngd = make_nice(ilp, td);
	auto rep = validate_nice(ilp, ngd);
	EXPECT_TRUE(rep.ok()) << rep.summary();
	EXPECT_EQ(ngd.width(), 0);
	size_t constraints = 0, leaves = 0;
	for (const auto &node : ngd.nodes) {
		constraints += node.kind == NodeKind::constraint;
		leaves += node.kind == NodeKind::leaf;
	}
	EXPECT_EQ(constraints, 1u);
	EXPECT_EQ(leaves, 1u);
}

TEST(MakeNice, RejectsInvalidInput)
{
	Ilp ilp = single_row_ilp(3, {0, 1, 2});
	TreeDecomposition bad{{{0, 1}, {1, 2}}, {1, no_parent}, 1};
	EXPECT_THROW(make_nice(ilp, bad), InvalidInput);
	Ilp eq;
	eq.add_variable("x", {0, 1});
	eq.add_constraint(Constraint({{0, 1}}, Relation::eq, 0));
	EXPECT_THROW(make_nice(eq, TreeDecomposition{{{0}}, {no_parent}, 0}), InvalidInput);
}

TEST(MakeNice, RandomInstancesValidateWithinSizeBound)
{
	SeededRng rng(25);
	ilpk::testing::RandomIlpOptions opt;
	opt.max_vars = 10;
	for (int i = 0; i < 200; ++i) {
		Ilp ilp = normalize(ilpk::testing::random_bounded_tw_ilp(rng, opt));
		auto g = build_gaifman(ilp);
		auto tw = rng.chance(1, 2) ? treewidth_exact(g) : treewidth_heuristic(g);
		auto ngd = make_nice(ilp, tw.td);
		auto rep = validate_nice(ilp, ngd);
		EXPECT_TRUE(rep.ok()) << rep.summary();
		EXPECT_EQ(ngd.width(), tw.width);
		EXPECT_LE(ngd.nodes.size(), 4 * ilp.num_vars() + ilp.num_constraints());
	}
}

TEST(MakeNice, EmptyInstance)
{
	Ilp ilp;
	auto ngd = make_nice(ilp, TreeDecomposition{});
	EXPECT_TRUE(ngd.nodes.empty());
	EXPECT_TRUE(validate_nice(ilp, ngd).ok());
}

TEST(ValidateNice, DetectsTampering)
{
	Ilp ilp = normalize(single_row_ilp(3, {0, 1, 2}));
	ilp.add_constraint(Constraint({{0, 1}, {1, 1}}, Relation::le, 1));
	auto ngd = make_nice(ilp, treewidth_exact(build_gaifman(ilp)).td);
	ASSERT_TRUE(validate_nice(ilp, ngd).ok());

	auto twice = ngd;
	twice.nodes[twice.row_node[1]].row = 0;
	EXPECT_TRUE(validate_nice(ilp, twice).has("row-coverage"));

	auto bad_leaf = ngd;
	for (auto &node : bad_leaf.nodes)
		if (node.kind == NodeKind::leaf) {
			node.kind = NodeKind::join;
			break;
		}
	EXPECT_TRUE(validate_nice(ilp, bad_leaf).has("shape-join"));

	auto shuffled = ngd;
	for (auto &node : shuffled.nodes)
		if (node.bag.size() >= 2) {
			std::reverse(node.bag.begin(), node.bag.end());
			break;
		}
	EXPECT_TRUE(validate_nice(ilp, shuffled).has("bag-format"));

	Ilp unnormalized;
	unnormalized.add_variable("x", {0, 1});
	unnormalized.add_constraint(Constraint({{0, 1}}, Relation::ge, 0));
	EXPECT_TRUE(validate_nice(unnormalized, NiceGaifmanDecomposition{}).has("normalized"));
}

TEST(NiceDecomposition, PostOrderVisitsChildrenFirst)
{
	SeededRng rng(26);
	Ilp ilp = normalize(ilpk::testing::random_bounded_tw_ilp(rng));
	auto ngd = make_nice(ilp, treewidth_exact(build_gaifman(ilp)).td);
	auto order = ngd.post_order();
	ASSERT_EQ(order.size(), ngd.nodes.size());
	std::vector<size_t> pos(order.size());
	for (size_t i = 0; i < order.size(); ++i)
		pos[order[i]] = i;
	for (size_t i = 0; i < ngd.nodes.size(); ++i)
		for (size_t c : ngd.nodes[i].children)
			EXPECT_LT(pos[c], pos[i]);
	EXPECT_EQ(order.back(), ngd.root);
}
