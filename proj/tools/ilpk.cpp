// ilpk: solve, kernelize, generate, verify and analyze ILP feasibility instances.
//
// Exit codes: 0 feasible / ok, 1 infeasible / check failed, 2 usage or input
// error, 3 resource cap exceeded.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "ilpk/pipeline.hpp"

namespace {

using namespace ilpk;

std::string read_input(const std::string &path)
{
	if (path == "-")
		return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw UsageError("cannot open '" + path + "'");
	return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string &path, const std::string &text)
{
	if (path.empty() || path == "-") {
		std::cout << text;
		return;
	}
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw UsageError("cannot write '" + path + "'");
	out << text;
}

std::vector<std::string> split(const std::string &s, char sep)
{
	std::vector<std::string> out;
	std::string item;
	std::istringstream in(s);
	while (std::getline(in, item, sep))
		if (!item.empty())
			out.push_back(item);
	return out;
}

int64_t to_int(const std::string &s, const char *what)
{
	try {
		size_t used = 0;
		int64_t v = std::stoll(s, &used);
		if (used == s.size())
			return v;
	} catch (const std::exception &) {
	}
	throw UsageError(std::string("bad ") + what + " '" + s + "'");
}

class Timer {
public:
	explicit Timer(std::string label) : label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
	~Timer()
	{
		auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
		std::cerr << "time " << label_ << ": " << std::fixed << std::setprecision(1) << ms << " ms\n";
	}

private:
	std::string label_;
	std::chrono::steady_clock::time_point start_;
};

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Bounded-domain ILP feasibility: tree-decomposition DP, protrusion replacement, TU replacement"};
	app.require_subcommand(1);

	std::string input = "-", output, modulator, mode = "tw", td_in, td_out;
	unsigned threads = 1;

	auto *solve_cmd = app.add_subcommand("solve", "decide feasibility by dynamic programming");
	solve_cmd->add_option("input", input, "instance document (- for stdin)");
	solve_cmd->add_option("--modulator", modulator, "comma-separated variable names to branch over");

	auto *kernel_cmd = app.add_subcommand("kernelize", "replace protrusions or a boundaried system by gadgets");
	kernel_cmd->add_option("input", input, "instance document (- for stdin)");
	kernel_cmd->add_option("--mode", mode, "tw (protrusion decomposition or boundary) or tu (boundary)")
		->check(CLI::IsMember({"tw", "tu"}));
	kernel_cmd->add_option("--threads", threads, "workers for boundary enumeration")->check(CLI::Range(1u, 256u));
	kernel_cmd->add_option("-o,--output", output, "output document (default stdout)");

	GenerateRequest gen;
	std::string items, sets, graph_files;
	auto *gen_cmd = app.add_subcommand("generate", "emit a generated instance with its certificate");
	gen_cmd->add_option("kind", gen.kind, "subset-sum | hitting-set | or-composition | random")
		->required()
		->check(CLI::IsMember({"subset-sum", "hitting-set", "or-composition", "random"}));
	gen_cmd->add_option("--items", items, "subset-sum: comma-separated integers");
	gen_cmd->add_option("--target", gen.target, "subset-sum: target sum");
	gen_cmd->add_option("--universe", gen.universe, "hitting-set: universe size");
	gen_cmd->add_option("--sets", sets, "hitting-set: sets of 1-based elements, e.g. 1,2;2,3");
	gen_cmd->add_option("--k", gen.k, "hitting-set budget, independent-set size, or |Y0| for random");
	gen_cmd->add_option("--graphs", graph_files, "or-composition: comma-separated edge-list files");
	gen_cmd->add_option("--r", gen.r, "random: protrusion order");
	gen_cmd->add_option("--d", gen.d, "random: domain size");
	gen_cmd->add_option("--parts", gen.parts, "random: number of parts");
	gen_cmd->add_option("--seed", gen.seed, "random: seed");
	gen_cmd->add_option("-o,--output", output, "output document (default stdout)");

	auto *verify_cmd = app.add_subcommand("verify", "cross-check against brute force and validate certificates");
	verify_cmd->add_option("input", input, "instance document (- for stdin)");
	verify_cmd->add_option("--threads", threads, "workers for boundary enumeration")->check(CLI::Range(1u, 256u));

	auto *analyze_cmd = app.add_subcommand("analyze", "Gaifman graph statistics and treewidth");
	analyze_cmd->add_option("input", input, "instance document (- for stdin)");
	analyze_cmd->add_option("--td", td_in, "validate a PACE .td decomposition of the Gaifman graph");
	analyze_cmd->add_option("--write-td", td_out, "write a minimum-width (or min-fill) decomposition as .td");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		if (*solve_cmd) {
			auto doc = parse_instance(read_input(input));
			Timer t("solve");
			auto out = solve_document(doc, split(modulator, ','));
			std::cout << out.text;
			return out.result.feasible ? 0 : 1;
		}
		if (*kernel_cmd) {
			auto doc = parse_instance(read_input(input));
			KernelizeOutcome out;
			{
				Timer t("kernelize");
				out = kernelize_document(doc, mode == "tu" ? KernelMode::tu : KernelMode::tw, threads);
			}
			std::cerr << out.report;
			write_output(output, serialize_instance(out.doc));
			return 0;
		}
		if (*gen_cmd) {
			for (const auto &s : split(items, ','))
				gen.items.push_back(to_int(s, "item"));
			for (const auto &set : split(sets, ';')) {
				std::vector<size_t> members;
				for (const auto &e : split(set, ',')) {
					int64_t u = to_int(e, "set element");
					if (u < 1)
						throw UsageError("set elements are 1-based");
					members.push_back(static_cast<size_t>(u - 1));
				}
				gen.sets.push_back(std::move(members));
			}
			for (const auto &file : split(graph_files, ','))
				gen.graphs.push_back(read_edge_list(read_input(file)));
			write_output(output, serialize_instance(generate_document(gen)));
			return 0;
		}
		if (*verify_cmd) {
			auto doc = parse_instance(read_input(input));
			Timer t("verify");
			auto out = verify_document(doc, threads);
			std::cout << out.text;
			return out.ok ? 0 : 1;
		}
		if (*analyze_cmd) {
			auto doc = parse_instance(read_input(input));
			std::cout << analyze_document(doc);
			auto g = build_gaifman(doc.ilp);
			int code = 0;
			if (!td_in.empty()) {
				size_t vertices = 0;
				auto td = read_td(read_input(td_in), &vertices);
				if (vertices != g.num_vertices())
					throw UsageError(".td declares " + std::to_string(vertices) + " vertices, instance has " +
							 std::to_string(g.num_vertices()));
				auto rep = validate_tree_decomposition(g, td);
				std::cout << "given decomposition: "
					  << (rep.ok() ? "valid, width " + std::to_string(*rep.width) : rep.summary()) << "\n";
				code = rep.ok() ? 0 : 1;
			}
			if (!td_out.empty()) {
				TreeDecomposition td;
				try {
					td = treewidth_exact(g).td;
				} catch (const ResourceLimit &) {
					td = treewidth_heuristic(g).td;
				}
				write_output(td_out, write_td(td, g.num_vertices()));
			}
			return code;
		}
	} catch (const ResourceLimit &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 3;
	} catch (const Error &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	return 2;
}
