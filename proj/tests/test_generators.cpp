#include <gtest/gtest.h>

#include "ilpk/dp_solver.hpp"
#include "ilpk/io.hpp"
#include "ilpk/oracle.hpp"
#include "ilpk/tu.hpp"
#include "support.hpp"

using namespace ilpk;
using ilpk::testing::complete_graph;

TEST(GenSubsetSum, Examples)
{
	EXPECT_TRUE(solve(gen_subset_sum({3, 5}, 8).ilp).feasible);
	EXPECT_FALSE(solve(gen_subset_sum({3, 5}, 7).ilp).feasible);
	auto inst = gen_subset_sum({1, 2, 4}, 5);
	auto res = solve(inst.ilp);
	ASSERT_TRUE(res.feasible);
	EXPECT_EQ(Assignment(res.witness->begin(), res.witness->begin() + 3), (Assignment{1, 0, 1}));
}

TEST(GenSubsetSum, Layout)
{
	auto inst = gen_subset_sum({4, -2, 3}, 1);
	ASSERT_EQ(inst.ilp.num_vars(), 6u);
	EXPECT_EQ(inst.ilp.var(0).name, "x1");
	EXPECT_EQ(inst.ilp.var(3).name, "y1");
	EXPECT_EQ(inst.ilp.domain(4), (DomainInterval{-2, 7}));
	EXPECT_EQ(inst.ilp.num_constraints(), 4u);
	EXPECT_THROW(gen_subset_sum({}, 0), InvalidInput);
}

TEST(GenSubsetSum, MatchesBruteForceWithValidDecomposition)
{
	SeededRng rng(81);
	for (int i = 0; i < 60; ++i) {
		std::vector<int64_t> items(1 + rng.below(6));
		for (auto &a : items)
			a = rng.between(-6, 12);
		int64_t target = rng.between(-6, 30);
		auto inst = gen_subset_sum(items, target);
		auto rep = validate_tree_decomposition(build_gaifman(inst.ilp), inst.td);
		EXPECT_TRUE(rep.ok()) << rep.summary();
		EXPECT_LE(inst.td.width(), 2);
		EXPECT_EQ(solve(inst.ilp).feasible, ilpk::testing::subset_sum_brute(items, target));
		Ilp norm = normalize(inst.ilp);
		auto ngd = make_nice(norm, inst.td);
		EXPECT_TRUE(validate_nice(norm, ngd).ok());
		EXPECT_EQ(solve_dp(norm, ngd).feasible, ilpk::testing::subset_sum_brute(items, target));
	}
}

TEST(GenHittingSet, Examples)
{
	auto no = gen_hitting_set(2, {{0}, {1}}, 1);
	EXPECT_FALSE(solve(no.ilp).feasible);
	auto yes = gen_hitting_set(2, {{0}, {1}}, 2);
	EXPECT_TRUE(solve(yes.ilp).feasible);
	EXPECT_EQ(yes.modified_entries.size(), 2u);
	for (auto [row, col] : yes.modified_entries)
		EXPECT_EQ(yes.ilp.constraint(row).coeff(col), -2);
}

TEST(GenHittingSet, RejectsBadFamilies)
{
	EXPECT_THROW(gen_hitting_set(2, {}, 1), InvalidInput);
	EXPECT_THROW(gen_hitting_set(2, {{0}, {}}, 1), InvalidInput);
	EXPECT_THROW(gen_hitting_set(2, {{2}}, 1), InvalidInput);
}

TEST(GenHittingSet, ZeroedMatrixIsTotallyUnimodular)
{
	SeededRng rng(82);
	for (int i = 0; i < 40; ++i) {
		size_t nu = 1 + rng.below(3);
		std::vector<std::vector<size_t>> family(1 + rng.below(3));
		for (auto &f : family) {
			std::vector<size_t> all(nu);
			std::iota(all.begin(), all.end(), 0);
			f = rng.sample(all, 1 + rng.below(nu));
		}
		int64_t k = rng.between(0, 3);
		auto inst = gen_hitting_set(nu, family, k);
		EXPECT_EQ(solve(inst.ilp).feasible, ilpk::testing::hitting_set_brute(nu, family, k));
		IntMatrix m = constraint_matrix(inst.ilp);
		for (auto [row, col] : inst.modified_entries)
			m.at(row, col) = 0;
		EXPECT_TRUE(is_tu_bruteforce(m));
		EXPECT_EQ(is_tu_fastpath(m), std::optional<bool>(true));
	}
}

TEST(GenOrComposition, Examples)
{
	SimpleGraph edge{2, {{0, 1}}};
	EXPECT_TRUE(solve(gen_or_composition({edge}, 1).ilp).feasible);
	EXPECT_FALSE(solve(gen_or_composition({edge}, 2).ilp).feasible);

	SimpleGraph empty{4, {}};
	auto mixed = gen_or_composition({complete_graph(4), empty}, 2);
	auto res = solve(mixed.ilp);
	ASSERT_TRUE(res.feasible);
	EXPECT_EQ((*res.witness)[ilpk::testing::var_named(mixed.ilp, "s")], 2);

	EXPECT_FALSE(solve(gen_or_composition({complete_graph(4), complete_graph(4)}, 3).ilp).feasible);
	EXPECT_THROW(gen_or_composition({edge, empty}, 1), InvalidInput);
	EXPECT_THROW(gen_or_composition({}, 1), InvalidInput);
}

TEST(GenOrComposition, PackagedDecompositionValidates)
{
	SeededRng rng(83);
	for (int i = 0; i < 10; ++i) {
		size_t n = 2 + rng.below(3);
		std::vector<SimpleGraph> graphs;
		for (size_t g = 0, t = 1 + rng.below(3); g < t; ++g)
			graphs.push_back(ilpk::testing::random_graph(rng, n));
		auto inst = gen_or_composition(graphs, rng.between(1, 3));
		auto rep = validate_protrusion_decomposition(inst.ilp, inst.pd);
		EXPECT_TRUE(rep.ok()) << rep.summary();
		EXPECT_TRUE(rep.unchecked.empty());
		EXPECT_EQ(inst.pd.r, 5);
	}
}

TEST(GenRandomProtrusion, DeterministicAndValid)
{
	for (uint64_t seed = 1; seed <= 30; ++seed) {
		auto a = gen_random_protrusion(3, 2, 2, 3, seed);
		auto b = gen_random_protrusion(3, 2, 2, 3, seed);
		EXPECT_EQ(a.ilp, b.ilp);
		EXPECT_EQ(a.pd, b.pd);
		InstanceDocument doc;
		doc.ilp = a.ilp;
		doc.protrusion_decomposition = a.pd;
		InstanceDocument again;
		again.ilp = b.ilp;
		again.protrusion_decomposition = b.pd;
		EXPECT_EQ(serialize_instance(doc), serialize_instance(again));
		auto rep = validate_protrusion_decomposition(a.ilp, a.pd);
		EXPECT_TRUE(rep.ok()) << "seed " << seed << ": " << rep.summary();
	}
	EXPECT_NE(gen_random_protrusion(3, 2, 2, 3, 1).ilp, gen_random_protrusion(3, 2, 2, 3, 2).ilp);
}

TEST(GenRandomProtrusion, RejectsBadParameters)
{
	EXPECT_THROW(gen_random_protrusion(2, 0, 2, 1, 1), InvalidInput);
	EXPECT_THROW(gen_random_protrusion(2, 1, 1, 1, 1), InvalidInput);
}

TEST(SeededRng, StableStream)
{
	SeededRng a(7), b(7);
	for (int i = 0; i < 20; ++i)
		EXPECT_EQ(a.below(1000), b.below(1000));
	SeededRng c(7);
	auto s = c.sample(std::vector<int>{5, 1, 4, 2, 3}, 3);
	EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
	EXPECT_EQ(s.size(), 3u);
}
