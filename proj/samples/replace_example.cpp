// Library walk-through: solve an instance, then swap one of its protrusions
// for a blocking gadget and check that nothing observable changed.

#include <iostream>

#include "ilpk/oracle.hpp"
#include "ilpk/pipeline.hpp"

int main()
{
	using namespace ilpk;

	// x + y = 2 and a chain y - z1 <= 0, z1 - z2 <= 0, z2 <= 1 hanging off y
	Ilp ilp;
	VarIndex x = ilp.add_variable("x", {0, 2});
	VarIndex y = ilp.add_variable("y", {0, 2});
	VarIndex z1 = ilp.add_variable("z1", {0, 2});
	VarIndex z2 = ilp.add_variable("z2", {0, 2});
	ilp.add_constraint(Constraint({{x, 1}, {y, 1}}, Relation::eq, 2));
	ilp.add_constraint(Constraint({{y, 1}, {z1, -1}}, Relation::le, 0));
	ilp.add_constraint(Constraint({{z1, 1}, {z2, -1}}, Relation::le, 0));
	ilp.add_constraint(Constraint({{z2, 1}}, Relation::le, 1));

	auto res = solve(ilp);
	std::cout << (res.feasible ? "feasible\n" + format_assignment(ilp, *res.witness) : "infeasible\n");

	// the chain only talks to the rest through y
	ProtrusionDecomposition pd{{x, y}, {{z1, z2}}, 2, 2};
	auto red = reduce_instance_report(ilp, pd);
	for (const auto &p : red.parts)
		std::cout << "part " << p.part << ": " << p.blocked << " blocked value(s), " << p.gadget_vars
			  << " gadget variables\n";

	bool same = brute_feasible(red.ilp).feasible == res.feasible;
	std::cout << "reduced instance has " << red.ilp.num_vars() << " variables, verdict "
		  << (same ? "unchanged" : "CHANGED") << "\n";
	return same ? 0 : 1;
}
