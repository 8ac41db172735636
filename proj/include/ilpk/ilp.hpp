#pragma once

// Core data model: variables with integer interval domains and sparse
// integer linear constraints, plus the elementary transformations every
// other module builds on.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ilpk {

using VarIndex = std::size_t;

enum class Relation { le, ge, eq };

inline const char *relation_symbol(Relation rel)
{
	switch (rel) {
	case Relation::le:
		return "<=";
	case Relation::ge:
		return ">=";
	case Relation::eq:
		return "=";
	}
	return "?";
}

struct DomainInterval {
	int64_t lo = 0;
	int64_t hi = 0;

	uint64_t size() const { return static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1; }
	bool contains(int64_t v) const { return lo <= v && v <= hi; }

	friend bool operator==(const DomainInterval &, const DomainInterval &) = default;
};

struct Variable {
	std::string name;
	DomainInterval domain;

	friend bool operator==(const Variable &, const Variable &) = default;
};

struct Term {
	VarIndex var = 0;
	int64_t coeff = 0;

	friend bool operator==(const Term &, const Term &) = default;
};

/// One row `sum coeff * x {<=,>=,=} rhs`. Terms are kept sorted by variable
/// index, each index at most once, every coefficient nonzero.
struct Constraint {
	std::vector<Term> terms;
	Relation rel = Relation::le;
	int64_t rhs = 0;

	Constraint() = default;
	Constraint(std::vector<Term> t, Relation r, int64_t b) : terms(std::move(t)), rel(r), rhs(b)
	{
		std::sort(terms.begin(), terms.end(),
			  [](const Term &a, const Term &b) { return a.var < b.var; });
		for (size_t i = 0; i < terms.size(); ++i) {
			if (terms[i].coeff == 0)
				throw InvalidInput("constraint has a zero coefficient on variable " +
						   std::to_string(terms[i].var));
			if (i > 0 && terms[i].var == terms[i - 1].var)
				throw InvalidInput("constraint mentions variable " + std::to_string(terms[i].var) +
						   " twice");
		}
	}

	int64_t coeff(VarIndex v) const
	{
		auto it = std::lower_bound(terms.begin(), terms.end(), v,
					   [](const Term &t, VarIndex x) { return t.var < x; });
		return it != terms.end() && it->var == v ? it->coeff : 0;
	}

	std::vector<VarIndex> support() const
	{
		std::vector<VarIndex> s;
		s.reserve(terms.size());
		for (const auto &t : terms)
			s.push_back(t.var);
		return s;
	}

	friend bool operator==(const Constraint &, const Constraint &) = default;
};

/// Total assignment, one value per variable index.
using Assignment = std::vector<int64_t>;

struct FeasibilityResult {
	bool feasible = false;
	std::optional<Assignment> witness;
};

class Ilp {
public:
	Ilp() = default;

	Ilp(std::vector<Variable> vars, std::vector<Constraint> rows)
	{
		for (auto &v : vars)
			add_variable(std::move(v.name), v.domain);
		for (auto &c : rows)
			add_constraint(std::move(c));
	}

	VarIndex add_variable(std::string name, DomainInterval domain)
	{
		if (domain.lo > domain.hi)
			throw InvalidInput("variable '" + name + "' has an empty domain [" +
					   std::to_string(domain.lo) + ", " + std::to_string(domain.hi) + "]");
		vars_.push_back({std::move(name), domain});
		return vars_.size() - 1;
	}

	size_t add_constraint(Constraint c)
	{
		for (const auto &t : c.terms)
			if (t.var >= vars_.size())
				throw InvalidInput("constraint references variable " + std::to_string(t.var) +
						   " but only " + std::to_string(vars_.size()) + " exist");
		rows_.push_back(std::move(c));
		return rows_.size() - 1;
	}

	size_t num_vars() const { return vars_.size(); }
	size_t num_constraints() const { return rows_.size(); }

	const std::vector<Variable> &vars() const { return vars_; }
	const Variable &var(VarIndex v) const { return vars_.at(v); }
	const DomainInterval &domain(VarIndex v) const { return vars_.at(v).domain; }

	const std::vector<Constraint> &constraints() const { return rows_; }
	const Constraint &constraint(size_t i) const { return rows_.at(i); }

	bool is_normalized() const
	{
		return std::all_of(rows_.begin(), rows_.end(),
				   [](const Constraint &c) { return c.rel == Relation::le; });
	}

	friend bool operator==(const Ilp &, const Ilp &) = default;

private:
	friend Ilp pin_variable(const Ilp &, VarIndex, int64_t);

	std::vector<Variable> vars_;
	std::vector<Constraint> rows_;
};

inline Constraint negated(const Constraint &c)
{
	std::vector<Term> terms = c.terms;
	for (auto &t : terms)
		t.coeff = checked_neg(t.coeff);
	Relation rel = c.rel == Relation::le ? Relation::ge : c.rel == Relation::ge ? Relation::le : Relation::eq;
	return Constraint(std::move(terms), rel, checked_neg(c.rhs));
}

/// Rewrites every row as `<=`: GE rows are negated, EQ rows become the row
/// itself plus its negation. Row order is kept; domains are untouched.
inline Ilp normalize(const Ilp &ilp)
{
	Ilp out;
	for (const auto &v : ilp.vars())
		out.add_variable(v.name, v.domain);
	for (const auto &c : ilp.constraints()) {
		switch (c.rel) {
		case Relation::le:
			out.add_constraint(c);
			break;
		case Relation::ge:
			out.add_constraint(negated(c));
			break;
		case Relation::eq: {
			Constraint le = c;
			le.rel = Relation::le;
			out.add_constraint(le);
			Constraint neg = negated(c);
			neg.rel = Relation::le;
			out.add_constraint(std::move(neg));
			break;
		}
		}
	}
	return out;
}

/// Left-hand side of a row under a total assignment, with checked arithmetic.
inline int64_t row_activity(const Constraint &c, const Assignment &a)
{
	int64_t sum = 0;
	for (const auto &t : c.terms)
		sum = checked_add(sum, checked_mul(t.coeff, a[t.var]));
	return sum;
}

inline bool row_satisfied(const Constraint &c, int64_t activity)
{
	switch (c.rel) {
	case Relation::le:
		return activity <= c.rhs;
	case Relation::ge:
		return activity >= c.rhs;
	case Relation::eq:
		return activity == c.rhs;
	}
	return false;
}

/// True iff `a` satisfies every row and every domain bound of `ilp`.
/// Throws InvalidInput when `a` is not total.
inline bool check_assignment(const Ilp &ilp, const Assignment &a)
{
	if (a.size() != ilp.num_vars())
		throw InvalidInput("assignment has " + std::to_string(a.size()) + " values for " +
				   std::to_string(ilp.num_vars()) + " variables");
	for (VarIndex v = 0; v < ilp.num_vars(); ++v)
		if (!ilp.domain(v).contains(a[v]))
			return false;
	for (const auto &c : ilp.constraints())
		if (!row_satisfied(c, row_activity(c, a)))
			return false;
	return true;
}

/// Largest domain size over all variables; 0 for an instance without variables.
inline uint64_t domain_size(const Ilp &ilp)
{
	uint64_t d = 0;
	for (const auto &v : ilp.vars())
		d = std::max(d, v.domain.size());
	return d;
}

/// Restricts the domain of `v` to the single value `value`. Rows are kept, so
/// the Gaifman graph and any decomposition of the instance stay valid.
inline Ilp pin_variable(const Ilp &ilp, VarIndex v, int64_t value)
{
	if (v >= ilp.num_vars())
		throw InvalidInput("pin_variable: no variable " + std::to_string(v));
	if (!ilp.domain(v).contains(value))
		throw InvalidInput("pin_variable: value " + std::to_string(value) + " outside the domain of '" +
				   ilp.var(v).name + "'");
	Ilp out = ilp;
	out.vars_[v].domain = {value, value};
	return out;
}

/// Result of substituting fixed values: the reduced instance and, for each of
/// its variables, the index it had in the original instance.
struct Substitution {
	Ilp ilp;
	std::vector<VarIndex> kept;
};

/// Substitutes several variables at once. Every row is kept (possibly with an
/// empty support); its right-hand side absorbs the fixed contributions.
inline Substitution substitute_variables(const Ilp &ilp, const std::vector<std::pair<VarIndex, int64_t>> &fixed)
{
	std::vector<std::optional<int64_t>> value(ilp.num_vars());
	for (const auto &[v, x] : fixed) {
		if (v >= ilp.num_vars())
			throw InvalidInput("substitute: no variable " + std::to_string(v));
		if (!ilp.domain(v).contains(x))
			throw InvalidInput("substitute: value " + std::to_string(x) + " outside the domain of '" +
					   ilp.var(v).name + "'");
		if (value[v])
			throw InvalidInput("substitute: variable " + std::to_string(v) + " fixed twice");
		value[v] = x;
	}
	Substitution out;
	std::vector<VarIndex> new_index(ilp.num_vars(), 0);
	for (VarIndex v = 0; v < ilp.num_vars(); ++v) {
		if (value[v])
			continue;
		new_index[v] = out.ilp.add_variable(ilp.var(v).name, ilp.domain(v));
		out.kept.push_back(v);
	}
	for (const auto &c : ilp.constraints()) {
		int64_t rhs = c.rhs;
		std::vector<Term> terms;
		for (const auto &t : c.terms) {
			if (value[t.var])
				rhs = checked_sub(rhs, checked_mul(t.coeff, *value[t.var]));
			else
				terms.push_back({new_index[t.var], t.coeff});
		}
		out.ilp.add_constraint(Constraint(std::move(terms), c.rel, rhs));
	}
	return out;
}

/// Removes `v` by fixing it to `value`; later variables shift down by one.
inline Ilp substitute_variable(const Ilp &ilp, VarIndex v, int64_t value)
{
	return substitute_variables(ilp, {{v, value}}).ilp;
}

/// Single-variable rows `x <= hi` and `-x <= -lo` for each listed variable.
inline std::vector<Constraint> domain_rows(const Ilp &ilp, const std::vector<VarIndex> &vars)
{
	std::vector<Constraint> rows;
	for (VarIndex v : vars) {
		const auto &dom = ilp.domain(v);
		rows.emplace_back(std::vector<Term>{{v, 1}}, Relation::le, dom.hi);
		rows.emplace_back(std::vector<Term>{{v, -1}}, Relation::le, checked_neg(dom.lo));
	}
	return rows;
}

/// Number of points in the domain box, saturating.
inline uint64_t box_size(const Ilp &ilp)
{
	uint64_t n = 1;
	for (const auto &v : ilp.vars())
		n = saturating_mul(n, v.domain.size());
	return n;
}

} // namespace ilpk
