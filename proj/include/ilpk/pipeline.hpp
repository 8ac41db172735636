#pragma once

// Document-level pipelines shared by the command-line tool and the tests:
// solve, kernelize, generate, verify and analyze, each producing text.

#include <sstream>
#include <string>
#include <vector>

#include "dp_solver.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "protrusion.hpp"
#include "tu.hpp"

namespace ilpk {

/// Usage-level problem with a pipeline request (missing certificate, bad option).
class UsageError : public Error {
public:
	using Error::Error;
};

inline std::string format_assignment(const Ilp &ilp, const Assignment &a)
{
	std::string out;
	for (VarIndex v = 0; v < ilp.num_vars(); ++v)
		out += ilp.var(v).name + " = " + std::to_string(a[v]) + "\n";
	return out;
}

inline VarIndex variable_named(const Ilp &ilp, const std::string &name)
{
	for (VarIndex v = 0; v < ilp.num_vars(); ++v)
		if (ilp.var(v).name == name)
			return v;
	throw UsageError("unknown variable '" + name + "'");
}

struct SolveOutcome {
	FeasibilityResult result;
	std::string text; // verdict line plus witness
};

/// Solves by dynamic programming, or by branching over `modulator` names when given.
inline SolveOutcome solve_document(const InstanceDocument &doc, const std::vector<std::string> &modulator = {},
				   const Caps &caps = default_caps())
{
	SolveOutcome out;
	if (modulator.empty()) {
		out.result = solve(doc.ilp, caps);
	} else {
		std::vector<VarIndex> mod;
		for (const auto &name : modulator)
			mod.push_back(variable_named(doc.ilp, name));
		out.result = solve_with_modulator(doc.ilp, mod, caps);
	}
	out.text = out.result.feasible ? "feasible\n" + format_assignment(doc.ilp, *out.result.witness) : "infeasible\n";
	return out;
}

enum class KernelMode { tw, tu };

struct KernelizeOutcome {
	InstanceDocument doc;
	std::string report; // human-readable size report
};

namespace pipeline_detail {

// Gadget as a document whose boundary variables carry the original names.
inline InstanceDocument gadget_document(const BoundariedIlp &original, const BoundariedIlp &gadget)
{
	InstanceDocument out;
	std::vector<std::string> names(gadget.ilp.num_vars());
	for (VarIndex v = 0; v < gadget.ilp.num_vars(); ++v)
		names[v] = "gadget:" + gadget.ilp.var(v).name;
	for (size_t i = 0; i < gadget.boundary.size(); ++i)
		names[gadget.boundary[i]] = original.ilp.var(original.boundary[i]).name;
	for (VarIndex v = 0; v < gadget.ilp.num_vars(); ++v)
		out.ilp.add_variable(names[v], gadget.ilp.domain(v));
	for (const auto &c : gadget.ilp.constraints())
		out.ilp.add_constraint(c);
	out.boundary = gadget.boundary;
	return out;
}

} // namespace pipeline_detail

/// tw: reduce along the protrusion decomposition if the document has one,
/// otherwise replace the boundaried system given by `boundary`.
/// tu: replace the boundaried system given by `boundary` using LP checks.
inline KernelizeOutcome kernelize_document(const InstanceDocument &doc, KernelMode mode, unsigned threads = 1,
					   const Caps &caps = default_caps())
{
	KernelizeOutcome out;
	std::ostringstream rep;
	rep << "before: " << doc.ilp.num_vars() << " variables, " << doc.ilp.num_constraints() << " constraints\n";
	if (mode == KernelMode::tw && doc.protrusion_decomposition) {
		auto red = reduce_instance_report(doc.ilp, *doc.protrusion_decomposition, threads, caps);
		out.doc.ilp = std::move(red.ilp);
		rep << "gadgets: " << red.parts.size() << "\n";
		for (const auto &p : red.parts)
			rep << "  part " << p.part << ": boundary " << p.boundary << ", |L| = " << p.blocked << ", "
			    << p.gadget_vars << " new variables, " << p.gadget_rows << " rows\n";
	} else {
		if (!doc.boundary)
			throw UsageError(mode == KernelMode::tw
						 ? "kernelize --mode tw needs a protrusion_decomposition or a boundary"
						 : "kernelize --mode tu needs a boundary");
		BoundariedIlp bilp(doc.ilp, *doc.boundary);
		BoundariedIlp gadget;
		size_t blocked;
		if (mode == KernelMode::tw) {
			Ilp norm = normalize(bilp.ilp);
			BoundariedIlp nb(norm, bilp.boundary);
			auto feasible = enumerate_feasible_boundary(nb, decompose(norm, caps), threads, caps);
			auto doms = bilp.boundary_domains();
			auto L = complement_in_box(doms, feasible);
			blocked = L.size();
			gadget = build_blocking_gadget(doms, L);
		} else {
			auto feasible = feasible_boundary_tu(bilp, threads, caps);
			auto doms = bilp.boundary_domains();
			auto L = complement_in_box(doms, feasible);
			blocked = L.size();
			gadget = build_blocking_gadget(doms, L);
		}
		out.doc = pipeline_detail::gadget_document(bilp, gadget);
		rep << "gadgets: 1\n  boundary " << gadget.arity() << ", |L| = " << blocked << ", "
		    << gadget.ilp.num_vars() - gadget.arity() << " new variables, " << gadget.ilp.num_constraints()
		    << " rows\n";
	}
	rep << "after: " << out.doc.ilp.num_vars() << " variables, " << out.doc.ilp.num_constraints()
	    << " constraints\n";
	out.report = rep.str();
	return out;
}

struct GenerateRequest {
	std::string kind; // subset-sum | hitting-set | or-composition | random
	std::vector<int64_t> items;
	int64_t target = 0;
	size_t universe = 0;
	std::vector<std::vector<size_t>> sets; // 0-based
	int64_t k = 0;
	std::vector<SimpleGraph> graphs;
	int r = 2;
	int64_t d = 2;
	size_t parts = 2;
	uint64_t seed = 1;
};

inline InstanceDocument generate_document(const GenerateRequest &req)
{
	InstanceDocument doc;
	if (req.kind == "subset-sum") {
		auto g = gen_subset_sum(req.items, req.target);
		doc.ilp = std::move(g.ilp);
		doc.tree_decomposition = std::move(g.td);
	} else if (req.kind == "hitting-set") {
		auto g = gen_hitting_set(req.universe, req.sets, req.k);
		doc.ilp = std::move(g.ilp);
		doc.tu_modified_entries = std::move(g.modified_entries);
	} else if (req.kind == "or-composition") {
		auto g = gen_or_composition(req.graphs, req.k);
		doc.ilp = std::move(g.ilp);
		doc.protrusion_decomposition = std::move(g.pd);
	} else if (req.kind == "random") {
		if (req.k < 0)
			throw UsageError("--k must be non-negative");
		auto g = gen_random_protrusion(static_cast<size_t>(req.k), req.r, req.d, req.parts, req.seed);
		doc.ilp = std::move(g.ilp);
		doc.protrusion_decomposition = std::move(g.pd);
	} else {
		throw UsageError("unknown generator '" + req.kind + "'");
	}
	return doc;
}

struct VerifyOutcome {
	bool ok = true;
	std::string text;
};

/// Oracle cross-check of the solver plus validation of every certificate.
inline VerifyOutcome verify_document(const InstanceDocument &doc, unsigned threads = 1,
				     const Caps &caps = default_caps())
{
	VerifyOutcome out;
	std::ostringstream txt;
	auto note = [&](const std::string &what, bool good, const std::string &detail = "") {
		txt << (good ? "ok   " : "FAIL ") << what << (detail.empty() ? "" : ": " + detail) << "\n";
		out.ok = out.ok && good;
	};

	auto oracle = brute_feasible(doc.ilp, caps);
	auto dp = solve(doc.ilp, caps);
	note("solver verdict matches oracle (" + std::string(oracle.feasible ? "feasible" : "infeasible") + ")",
	     oracle.feasible == dp.feasible);
	if (dp.feasible)
		note("solver witness", check_assignment(doc.ilp, *dp.witness));

	Ilp norm = normalize(doc.ilp);
	if (doc.tree_decomposition) {
		auto rep = validate_tree_decomposition(build_gaifman(doc.ilp), *doc.tree_decomposition);
		note("tree decomposition (width " + std::to_string(doc.tree_decomposition->width()) + ")", rep.ok(),
		     rep.summary());
	}
	if (doc.nice_decomposition) {
		auto rep = validate_nice(norm, *doc.nice_decomposition);
		note("nice decomposition", rep.ok(), rep.summary());
	}
	if (doc.protrusion_decomposition) {
		auto rep = validate_protrusion_decomposition(doc.ilp, *doc.protrusion_decomposition, caps);
		note("protrusion decomposition", rep.ok(), rep.summary());
		for (const auto &u : rep.unchecked)
			txt << "skip " << u << "\n";
	}
	if (doc.boundary) {
		BoundariedIlp bilp(norm, *doc.boundary);
		auto expected = brute_boundary_set(bilp, caps);
		auto got = enumerate_feasible_boundary(bilp, decompose(norm, caps), threads, caps);
		note("boundary set (" + std::to_string(expected.size()) + " feasible tuples)", expected == got);
	}
	if (doc.tu_modified_entries) {
		IntMatrix m = constraint_matrix(doc.ilp);
		for (auto [row, col] : *doc.tu_modified_entries)
			m.at(row, col) = 0;
		bool tu;
		try {
			tu = is_tu(m, caps);
		} catch (const ResourceLimit &e) {
			txt << "skip totally unimodular after zeroing modified entries: " << e.what() << "\n";
			tu = true;
		}
		note("totally unimodular after zeroing " + std::to_string(doc.tu_modified_entries->size()) + " entries",
		     tu);
	}
	out.text = txt.str();
	return out;
}

/// Gaifman graph statistics and treewidth bounds.
inline std::string analyze_document(const InstanceDocument &doc, const Caps &caps = default_caps())
{
	std::ostringstream txt;
	auto g = build_gaifman(doc.ilp);
	size_t max_degree = 0;
	for (VarIndex v = 0; v < g.num_vertices(); ++v)
		max_degree = std::max(max_degree, g.neighbors(v).size());
	txt << "variables: " << doc.ilp.num_vars() << "\n";
	txt << "constraints: " << doc.ilp.num_constraints() << "\n";
	txt << "domain size: " << domain_size(doc.ilp) << "\n";
	txt << "gaifman edges: " << g.num_edges() << "\n";
	txt << "max degree: " << max_degree << "\n";
	txt << "treewidth (min-fill upper bound): " << treewidth_heuristic(g).width << "\n";
	try {
		txt << "treewidth (exact): " << treewidth_exact(g, caps).width << "\n";
	} catch (const ResourceLimit &e) {
		txt << "treewidth (exact): unavailable, " << e.what() << "\n";
	}
	return txt.str();
}

} // namespace ilpk
