#pragma once

// Serialization: the JSON instance document with optional certificates,
// PACE-style .td tree decompositions, and edge-list graphs.

#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "error.hpp"
#include "gaifman.hpp"
#include "generators.hpp"
#include "ilp.hpp"
#include "protrusion.hpp"

namespace ilpk {

inline constexpr int format_version = 1;

/// An instance plus whatever certificates travel with it. Nice
/// decompositions refer to rows of the normalized instance.
struct InstanceDocument {
	Ilp ilp;
	std::optional<TreeDecomposition> tree_decomposition;
	std::optional<NiceGaifmanDecomposition> nice_decomposition;
	std::optional<ProtrusionDecomposition> protrusion_decomposition;
	std::optional<std::vector<VarIndex>> boundary;
	std::optional<std::vector<std::pair<size_t, VarIndex>>> tu_modified_entries;

	friend bool operator==(const InstanceDocument &, const InstanceDocument &) = default;
};

namespace io_detail {

using json = nlohmann::json;

class Reader {
public:
	explicit Reader(const Ilp *ilp = nullptr) : ilp_(ilp)
	{
		if (ilp_)
			for (VarIndex v = 0; v < ilp_->num_vars(); ++v)
				index_[ilp_->var(v).name] = v;
	}

	void set_ilp(const Ilp *ilp)
	{
		ilp_ = ilp;
		index_.clear();
		for (VarIndex v = 0; v < ilp_->num_vars(); ++v)
			index_[ilp_->var(v).name] = v;
	}

	[[noreturn]] static void fail(const std::string &path, const std::string &what)
	{
		throw InvalidInput("instance document, field " + path + ": " + what);
	}

	static const json &field(const json &obj, const char *key, const std::string &path)
	{
		if (!obj.is_object())
			fail(path, "expected an object");
		auto it = obj.find(key);
		if (it == obj.end())
			fail(path + "." + key, "missing");
		return *it;
	}

	static int64_t integer(const json &j, const std::string &path)
	{
		if (!j.is_number_integer())
			fail(path, "expected an integer");
		if (j.is_number_unsigned() && j.get<uint64_t>() > static_cast<uint64_t>(INT64_MAX))
			fail(path, "integer out of range");
		return j.get<int64_t>();
	}

	static size_t index(const json &j, const std::string &path)
	{
		int64_t v = integer(j, path);
		if (v < 0)
			fail(path, "expected a non-negative integer");
		return static_cast<size_t>(v);
	}

	static const json &array(const json &j, const std::string &path)
	{
		if (!j.is_array())
			fail(path, "expected an array");
		return j;
	}

	VarIndex var(const json &j, const std::string &path) const
	{
		if (!j.is_string())
			fail(path, "expected a variable name");
		auto it = index_.find(j.get<std::string>());
		if (it == index_.end())
			fail(path, "unknown variable '" + j.get<std::string>() + "'");
		return it->second;
	}

	std::vector<VarIndex> vars(const json &j, const std::string &path) const
	{
		std::vector<VarIndex> out;
		const auto &arr = array(j, path);
		for (size_t i = 0; i < arr.size(); ++i)
			out.push_back(var(arr[i], path + "[" + std::to_string(i) + "]"));
		return out;
	}

private:
	const Ilp *ilp_;
	std::map<std::string, VarIndex> index_;
};

inline json names(const Ilp &ilp, const std::vector<VarIndex> &vars)
{
	json out = json::array();
	for (VarIndex v : vars)
		out.push_back(ilp.var(v).name);
	return out;
}

inline Relation relation_from(const json &j, const std::string &path)
{
	if (j == "<=")
		return Relation::le;
	if (j == ">=")
		return Relation::ge;
	if (j == "=")
		return Relation::eq;
	Reader::fail(path, "relation must be \"<=\", \">=\" or \"=\"");
}

inline NodeKind kind_from(const json &j, const std::string &path)
{
	for (NodeKind k : {NodeKind::leaf, NodeKind::join, NodeKind::introduce, NodeKind::forget, NodeKind::constraint})
		if (j == node_kind_name(k))
			return k;
	Reader::fail(path, "unknown node kind");
}

// "line L, column C" for a byte offset into `text`.
inline std::string position(std::string_view text, size_t offset)
{
	size_t line = 1, col = 1;
	for (size_t i = 0; i < offset && i < text.size(); ++i) {
		if (text[i] == '\n') {
			++line;
			col = 1;
		} else {
			++col;
		}
	}
	return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace io_detail

inline InstanceDocument parse_instance(std::string_view text)
{
	using io_detail::json;
	using io_detail::Reader;
	json doc;
	try {
		doc = json::parse(text.begin(), text.end());
	} catch (const json::parse_error &e) {
		throw InvalidInput("instance document is not valid JSON at " + io_detail::position(text, e.byte) + ": " +
				   e.what());
	}
	if (!doc.is_object())
		Reader::fail("(root)", "expected an object");
	for (auto it = doc.begin(); it != doc.end(); ++it) {
		static const std::set<std::string> known{"format_version",	   "variables",	       "constraints",
							 "tree_decomposition",	   "nice_decomposition", "protrusion_decomposition",
							 "boundary",		   "tu_modified_entries"};
		if (!known.count(it.key()))
			Reader::fail(it.key(), "unknown field");
	}
	if (Reader::integer(Reader::field(doc, "format_version", ""), "format_version") != format_version)
		Reader::fail("format_version", "unsupported version (expected " + std::to_string(format_version) + ")");

	InstanceDocument out;
	std::set<std::string> seen;
	const auto &vars = Reader::array(Reader::field(doc, "variables", ""), "variables");
	for (size_t i = 0; i < vars.size(); ++i) {
		std::string path = "variables[" + std::to_string(i) + "]";
		const auto &name = Reader::field(vars[i], "name", path);
		if (!name.is_string() || name.get<std::string>().empty())
			Reader::fail(path + ".name", "expected a non-empty string");
		if (!seen.insert(name.get<std::string>()).second)
			Reader::fail(path + ".name", "duplicate variable '" + name.get<std::string>() + "'");
		int64_t lo = Reader::integer(Reader::field(vars[i], "lo", path), path + ".lo");
		int64_t hi = Reader::integer(Reader::field(vars[i], "hi", path), path + ".hi");
		if (lo > hi)
			Reader::fail(path, "lo > hi");
		out.ilp.add_variable(name.get<std::string>(), {lo, hi});
	}
	Reader reader(&out.ilp);

	const auto &rows = Reader::array(Reader::field(doc, "constraints", ""), "constraints");
	for (size_t i = 0; i < rows.size(); ++i) {
		std::string path = "constraints[" + std::to_string(i) + "]";
		const auto &coeffs = Reader::field(rows[i], "coeffs", path);
		if (!coeffs.is_object())
			Reader::fail(path + ".coeffs", "expected an object of name: coefficient");
		std::vector<Term> terms;
		for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
			std::string cpath = path + ".coeffs." + it.key();
			int64_t c = Reader::integer(it.value(), cpath);
			if (c == 0)
				Reader::fail(cpath, "zero coefficients are not allowed");
			terms.push_back({reader.var(json(it.key()), cpath), c});
		}
		Relation rel = io_detail::relation_from(Reader::field(rows[i], "rel", path), path + ".rel");
		int64_t rhs = Reader::integer(Reader::field(rows[i], "rhs", path), path + ".rhs");
		out.ilp.add_constraint(Constraint(std::move(terms), rel, rhs));
	}

	if (doc.contains("tree_decomposition")) {
		const auto &j = doc["tree_decomposition"];
		std::string path = "tree_decomposition";
		TreeDecomposition td;
		const auto &bags = Reader::array(Reader::field(j, "bags", path), path + ".bags");
		for (size_t i = 0; i < bags.size(); ++i) {
			auto bag = reader.vars(bags[i], path + ".bags[" + std::to_string(i) + "]");
			std::sort(bag.begin(), bag.end());
			td.bags.push_back(std::move(bag));
		}
		const auto &parent = Reader::array(Reader::field(j, "parent", path), path + ".parent");
		for (size_t i = 0; i < parent.size(); ++i)
			td.parent.push_back(parent[i].is_null()
						    ? no_parent
						    : Reader::index(parent[i], path + ".parent[" + std::to_string(i) + "]"));
		td.root = Reader::index(Reader::field(j, "root", path), path + ".root");
		out.tree_decomposition = std::move(td);
	}

	if (doc.contains("nice_decomposition")) {
		const auto &j = doc["nice_decomposition"];
		std::string path = "nice_decomposition";
		NiceGaifmanDecomposition ngd;
		const auto &nodes = Reader::array(Reader::field(j, "nodes", path), path + ".nodes");
		for (size_t i = 0; i < nodes.size(); ++i) {
			std::string npath = path + ".nodes[" + std::to_string(i) + "]";
			NiceNode node;
			node.kind = io_detail::kind_from(Reader::field(nodes[i], "kind", npath), npath + ".kind");
			node.bag = reader.vars(Reader::field(nodes[i], "bag", npath), npath + ".bag");
			std::sort(node.bag.begin(), node.bag.end());
			const auto &children = Reader::array(Reader::field(nodes[i], "children", npath), npath + ".children");
			for (size_t c = 0; c < children.size(); ++c)
				node.children.push_back(
					Reader::index(children[c], npath + ".children[" + std::to_string(c) + "]"));
			if (nodes[i].contains("row"))
				node.row = Reader::index(nodes[i]["row"], npath + ".row");
			ngd.nodes.push_back(std::move(node));
		}
		ngd.root = Reader::index(Reader::field(j, "root", path), path + ".root");
		const auto &map = Reader::array(Reader::field(j, "row_node", path), path + ".row_node");
		for (size_t i = 0; i < map.size(); ++i)
			ngd.row_node.push_back(Reader::index(map[i], path + ".row_node[" + std::to_string(i) + "]"));
		out.nice_decomposition = std::move(ngd);
	}

	if (doc.contains("protrusion_decomposition")) {
		const auto &j = doc["protrusion_decomposition"];
		std::string path = "protrusion_decomposition";
		ProtrusionDecomposition pd;
		pd.y0 = reader.vars(Reader::field(j, "Y0", path), path + ".Y0");
		const auto &parts = Reader::array(Reader::field(j, "parts", path), path + ".parts");
		for (size_t i = 0; i < parts.size(); ++i)
			pd.parts.push_back(reader.vars(parts[i], path + ".parts[" + std::to_string(i) + "]"));
		int64_t r = Reader::integer(Reader::field(j, "r", path), path + ".r");
		if (r < 0 || r > 1000)
			Reader::fail(path + ".r", "out of range");
		pd.r = static_cast<int>(r);
		pd.alpha = Reader::index(Reader::field(j, "alpha", path), path + ".alpha");
		out.protrusion_decomposition = std::move(pd);
	}

	if (doc.contains("boundary")) {
		auto b = reader.vars(doc["boundary"], "boundary");
		BoundariedIlp check(out.ilp, b);
		out.boundary = std::move(b);
	}

	if (doc.contains("tu_modified_entries")) {
		std::vector<std::pair<size_t, VarIndex>> entries;
		const auto &arr = Reader::array(doc["tu_modified_entries"], "tu_modified_entries");
		for (size_t i = 0; i < arr.size(); ++i) {
			std::string path = "tu_modified_entries[" + std::to_string(i) + "]";
			size_t row = Reader::index(Reader::field(arr[i], "row", path), path + ".row");
			if (row >= out.ilp.num_constraints())
				Reader::fail(path + ".row", "no such constraint");
			entries.emplace_back(row, reader.var(Reader::field(arr[i], "var", path), path + ".var"));
		}
		out.tu_modified_entries = std::move(entries);
	}
	return out;
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
inline std::string serialize_instance(const InstanceDocument &doc)
{
	using io_detail::json;
	const Ilp &ilp = doc.ilp;
	json out;
	out["format_version"] = format_version;
	json vars = json::array();
	for (const auto &v : ilp.vars())
		vars.push_back({{"name", v.name}, {"lo", v.domain.lo}, {"hi", v.domain.hi}});
	out["variables"] = std::move(vars);
	json rows = json::array();
	for (const auto &c : ilp.constraints()) {
		json coeffs = json::object();
		for (const auto &t : c.terms)
			coeffs[ilp.var(t.var).name] = t.coeff;
		rows.push_back({{"coeffs", std::move(coeffs)}, {"rel", relation_symbol(c.rel)}, {"rhs", c.rhs}});
	}
	out["constraints"] = std::move(rows);

	if (doc.tree_decomposition) {
		const auto &td = *doc.tree_decomposition;
		json bags = json::array(), parent = json::array();
		for (const auto &b : td.bags)
			bags.push_back(io_detail::names(ilp, b));
		for (size_t p : td.parent)
			parent.push_back(p == no_parent ? json(nullptr) : json(p));
		out["tree_decomposition"] = {{"bags", bags}, {"parent", parent}, {"root", td.root}};
	}
	if (doc.nice_decomposition) {
		const auto &ngd = *doc.nice_decomposition;
		json nodes = json::array();
		for (const auto &node : ngd.nodes) {
			json j = {{"kind", node_kind_name(node.kind)},
				  {"bag", io_detail::names(ilp, node.bag)},
				  {"children", node.children}};
			if (node.row)
				j["row"] = *node.row;
			nodes.push_back(std::move(j));
		}
		out["nice_decomposition"] = {{"nodes", nodes}, {"root", ngd.root}, {"row_node", ngd.row_node}};
	}
	if (doc.protrusion_decomposition) {
		const auto &pd = *doc.protrusion_decomposition;
		json parts = json::array();
		for (const auto &p : pd.parts)
			parts.push_back(io_detail::names(ilp, p));
		out["protrusion_decomposition"] = {
			{"Y0", io_detail::names(ilp, pd.y0)}, {"parts", parts}, {"r", pd.r}, {"alpha", pd.alpha}};
	}
	if (doc.boundary)
		out["boundary"] = io_detail::names(ilp, *doc.boundary);
	if (doc.tu_modified_entries) {
		json entries = json::array();
		for (const auto &[row, var] : *doc.tu_modified_entries)
			entries.push_back({{"row", row}, {"var", ilp.var(var).name}});
		out["tu_modified_entries"] = std::move(entries);
	}
	return out.dump(2) + "\n";
}

/// PACE .td text: "s td <bags> <max bag size> <vertices>", one
/// "b <id> <vertices...>" line per bag and one line per tree edge, all
/// 1-based. Written edges run child to parent; on reading, bag 1 is the root.
inline std::string write_td(const TreeDecomposition &td, size_t num_vertices)
{
	std::ostringstream out;
	out << "s td " << td.bags.size() << " " << td.width() + 1 << " " << num_vertices << "\n";
	for (size_t i = 0; i < td.bags.size(); ++i) {
		out << "b " << i + 1;
		for (VarIndex v : td.bags[i])
			out << " " << v + 1;
		out << "\n";
	}
	for (size_t i = 0; i < td.bags.size(); ++i)
		if (td.parent[i] != no_parent)
			out << i + 1 << " " << td.parent[i] + 1 << "\n";
	return out.str();
}

inline TreeDecomposition read_td(std::string_view text, size_t *num_vertices = nullptr)
{
	std::istringstream in{std::string(text)};
	std::string line;
	size_t lineno = 0, bags = 0, vertices = 0;
	bool header = false;
	std::vector<std::vector<VarIndex>> bag_list;
	std::vector<std::vector<size_t>> adj;
	auto fail = [&](const std::string &what) -> void {
		throw InvalidInput(".td line " + std::to_string(lineno) + ": " + what);
	};
	while (std::getline(in, line)) {
		++lineno;
		std::istringstream ls(line);
		std::string head;
		if (!(ls >> head) || head == "c")
			continue;
		if (head == "s") {
			std::string td;
			size_t width;
			if (header || !(ls >> td >> bags >> width >> vertices) || td != "td")
				fail("malformed solution line");
			header = true;
			bag_list.assign(bags, {});
			adj.assign(bags, {});
		} else if (head == "b") {
			size_t id;
			if (!header || !(ls >> id) || id == 0 || id > bags)
				fail("malformed bag line");
			for (size_t v; ls >> v;) {
				if (v == 0 || v > vertices)
					fail("vertex out of range");
				bag_list[id - 1].push_back(v - 1);
			}
			std::sort(bag_list[id - 1].begin(), bag_list[id - 1].end());
		} else {
			size_t a, b;
			std::istringstream es(line);
			if (!header || !(es >> a >> b) || a == 0 || b == 0 || a > bags || b > bags)
				fail("malformed tree edge");
			adj[a - 1].push_back(b - 1);
			adj[b - 1].push_back(a - 1);
		}
	}
	if (!header)
		throw InvalidInput(".td input has no solution line");
	TreeDecomposition td;
	td.bags = std::move(bag_list);
	td.parent.assign(bags, no_parent);
	if (bags > 0) {
		std::vector<bool> seen(bags, false);
		std::vector<size_t> queue{0};
		seen[0] = true;
		for (size_t i = 0; i < queue.size(); ++i)
			for (size_t w : adj[queue[i]])
				if (!seen[w]) {
					seen[w] = true;
					td.parent[w] = queue[i];
					queue.push_back(w);
				}
		if (queue.size() != bags)
			throw InvalidInput(".td tree is not connected");
		size_t edges = 0;
		for (const auto &a : adj)
			edges += a.size();
		if (edges / 2 != bags - 1)
			throw InvalidInput(".td tree edges do not form a tree");
	}
	if (num_vertices)
		*num_vertices = vertices;
	return td;
}

/// Edge list: first non-comment line is the vertex count, then one 1-based
/// "u v" pair per line. Lines starting with '#' are comments.
inline SimpleGraph read_edge_list(std::string_view text)
{
	std::istringstream in{std::string(text)};
	std::string line;
	size_t lineno = 0;
	std::optional<size_t> n;
	SimpleGraph g;
	while (std::getline(in, line)) {
		++lineno;
		auto first = line.find_first_not_of(" \t\r");
		if (first == std::string::npos || line[first] == '#')
			continue;
		std::istringstream ls(line);
		if (!n) {
			size_t count;
			if (!(ls >> count))
				throw InvalidInput("edge list line " + std::to_string(lineno) + ": expected the vertex count");
			n = count;
			g.n = count;
			continue;
		}
		size_t u, v;
		if (!(ls >> u >> v) || u == 0 || v == 0 || u > *n || v > *n || u == v)
			throw InvalidInput("edge list line " + std::to_string(lineno) + ": expected two distinct vertices in 1.." +
					   std::to_string(*n));
		if (!g.has_edge(u - 1, v - 1))
			g.edges.emplace_back(u - 1, v - 1);
	}
	if (!n)
		throw InvalidInput("edge list is empty");
	return g;
}

inline std::string write_edge_list(const SimpleGraph &g)
{
	std::ostringstream out;
	out << g.n << "\n";
	for (auto [u, v] : g.edges)
		out << u + 1 << " " << v + 1 << "\n";
	return out.str();
}

} // namespace ilpk
