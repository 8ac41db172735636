#include <gtest/gtest.h>

#include "ilpk/exact_lp.hpp"
#include "ilpk/oracle.hpp"
#include "support.hpp"

using namespace ilpk;

namespace {

LpSystem one_var(std::vector<std::pair<int64_t, int64_t>> rows)
{
	LpSystem sys;
	sys.num_vars = 1;
	for (auto [a, b] : rows)
		sys.add_row({Rational(a)}, Rational(b));
	return sys;
}

} // namespace

TEST(LpFeasible, SingleVariableExamples)
{
	auto res = lp_feasible(one_var({{1, 1}, {-1, 0}}));
	ASSERT_TRUE(res.feasible);
	ASSERT_TRUE(res.witness);
	EXPECT_GE((*res.witness)[0], 0);
	EXPECT_LE((*res.witness)[0], 1);
	EXPECT_FALSE(lp_feasible(one_var({{1, -1}, {-1, 0}})).feasible);
}

TEST(LpFeasible, NegativeBoundsAndEqualities)
{
	// x in [-3, -1], y in [2, 5], x + y = 0, 2x - y <= -7
	LpSystem sys;
	sys.num_vars = 2;
	sys.add_row({1, 0}, -1);
	sys.add_row({-1, 0}, 3);
	sys.add_row({0, 1}, 5);
	sys.add_row({0, -1}, -2);
	sys.add_row({1, 1}, 0);
	sys.add_row({-1, -1}, 0);
	sys.add_row({2, -1}, -7);
	auto res = lp_feasible(sys);
	ASSERT_TRUE(res.feasible);
	EXPECT_TRUE(sys.satisfied_by(*res.witness));
	sys.add_row({-2, 1}, 6); // 2x - y >= -6 contradicts the previous row
	EXPECT_FALSE(lp_feasible(sys).feasible);
}

TEST(LpFeasible, FractionalOnlyPoint)
{
	// 2x = 1 with 0 <= x <= 1: feasible as an LP, infeasible over integers
	LpSystem sys;
	sys.num_vars = 1;
	sys.add_row({2}, 1);
	sys.add_row({-2}, -1);
	sys.add_row({1}, 1);
	sys.add_row({-1}, 0);
	auto res = lp_feasible(sys);
	ASSERT_TRUE(res.feasible);
	EXPECT_EQ((*res.witness)[0], Rational(1, 2));
}

TEST(LpFeasible, RequiresBoundedVariables)
{
	EXPECT_THROW(lp_feasible(one_var({{1, 4}})), InvalidInput);
	LpSystem sys;
	sys.num_vars = 2;
	sys.add_row({1, 0}, 1);
	sys.add_row({-1, 0}, 0);
	sys.add_row({1, 1}, 3);
	EXPECT_THROW(lp_feasible(sys), InvalidInput);
	EXPECT_THROW(sys.add_row({1}, 0), InvalidInput);
}

TEST(LpRelaxation, IncludesDomainRows)
{
	Ilp ilp;
	ilp.add_variable("x", {1, 4});
	ilp.add_constraint(Constraint({{0, 1}}, Relation::eq, 2));
	auto sys = lp_relaxation(ilp);
	EXPECT_EQ(sys.num_vars, 1u);
	EXPECT_EQ(sys.a.size(), 4u);
	EXPECT_TRUE(sys.satisfied_by({Rational(2)}));
	EXPECT_FALSE(sys.satisfied_by({Rational(3)}));
}

TEST(LpFeasible, WitnessesAreExact)
{
	SeededRng rng(61);
	for (int i = 0; i < 150; ++i) {
		Ilp ilp = ilpk::testing::random_bounded_tw_ilp(rng);
		auto sys = lp_relaxation(ilp);
		auto res = lp_feasible(sys);
		if (res.feasible) {
			EXPECT_TRUE(sys.satisfied_by(*res.witness));
		}
		// an integer point is also a rational one
		if (brute_feasible(ilp).feasible) {
			EXPECT_TRUE(res.feasible);
		}
	}
}

TEST(LpFeasible, AddingRowsKeepsInfeasibility)
{
	SeededRng rng(62);
	for (int i = 0; i < 100; ++i) {
		Ilp ilp = ilpk::testing::random_bounded_tw_ilp(rng);
		auto sys = lp_relaxation(ilp);
		bool before = lp_feasible(sys).feasible;
		std::vector<Rational> row(sys.num_vars);
		for (auto &x : row)
			x = rng.between(-2, 2);
		sys.add_row(row, rng.between(-3, 3));
		if (!before) {
			EXPECT_FALSE(lp_feasible(sys).feasible);
		}
	}
}

TEST(LpFeasible, NetworkSystemsAreIntegral)
{
	SeededRng rng(63);
	int feasible = 0;
	for (int i = 0; i < 200; ++i) {
		Ilp ilp = ilpk::testing::random_network_ilp(rng);
		bool lp = lp_feasible(lp_relaxation(ilp)).feasible;
		bool ip = brute_feasible(ilp).feasible;
		ASSERT_EQ(lp, ip) << "instance " << i;
		feasible += ip;
	}
	EXPECT_GT(feasible, 30);
	EXPECT_LT(feasible, 190);
}
