#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ilpk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed input: invalid instance, bad certificate, violated precondition.
class InvalidInput : public Error {
public:
	using Error::Error;
};

/// A configured resource cap (table cells, enumeration box, exact search size) was exceeded.
class ResourceLimit : public Error {
public:
	using Error::Error;
};

/// 64-bit arithmetic overflow in coefficient or right-hand-side computations.
class Overflow : public Error {
public:
	using Error::Error;
};

inline int64_t checked_add(int64_t a, int64_t b)
{
	int64_t r;
	if (__builtin_add_overflow(a, b, &r))
		throw Overflow("integer overflow in addition");
	return r;
}

inline int64_t checked_sub(int64_t a, int64_t b)
{
	int64_t r;
	if (__builtin_sub_overflow(a, b, &r))
		throw Overflow("integer overflow in subtraction");
	return r;
}

inline int64_t checked_mul(int64_t a, int64_t b)
{
	int64_t r;
	if (__builtin_mul_overflow(a, b, &r))
		throw Overflow("integer overflow in multiplication");
	return r;
}

inline int64_t checked_neg(int64_t a)
{
	if (a == std::numeric_limits<int64_t>::min())
		throw Overflow("integer overflow in negation");
	return -a;
}

/// Multiplies two sizes, saturating at the maximum instead of wrapping.
inline uint64_t saturating_mul(uint64_t a, uint64_t b)
{
	uint64_t r;
	if (__builtin_mul_overflow(a, b, &r))
		return std::numeric_limits<uint64_t>::max();
	return r;
}

/// Resource caps shared by the exhaustive parts of the library.
///
/// The defaults can be overridden process-wide through the ILPK_CAPS
/// environment variable, e.g. `ILPK_CAPS=exact_tw=16,dp_cells=1048576`.
/// Recognized keys: exact_tw, dp_cells, oracle_box, tu_dim, tu_submatrices.
struct Caps {
	/// Largest connected component (after simplicial reduction) handled by exact treewidth.
	int exact_tw_vertices = 20;
	/// Total number of DP table cells over all nodes of one solve.
	uint64_t dp_cells = uint64_t{1} << 28;
	/// Largest domain box the brute-force oracle enumerates.
	uint64_t oracle_box = uint64_t{1} << 24;
	/// Brute-force TU check is allowed when min(rows, cols) is at most this...
	int tu_dim = 6;
	/// ...or when the number of square submatrices is at most this.
	uint64_t tu_submatrices = uint64_t{1} << 24;

	static Caps from_string(std::string_view spec)
	{
		Caps caps;
		while (!spec.empty()) {
			auto comma = spec.find(',');
			auto item = spec.substr(0, comma);
			spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
			if (item.empty())
				continue;
			auto eq = item.find('=');
			if (eq == std::string_view::npos)
				throw InvalidInput("ILPK_CAPS: expected key=value, got '" + std::string(item) + "'");
			std::string key(item.substr(0, eq));
			std::string value(item.substr(eq + 1));
			uint64_t v;
			try {
				size_t used = 0;
				v = std::stoull(value, &used);
				if (used != value.size())
					throw std::invalid_argument(value);
			} catch (const std::exception &) {
				throw InvalidInput("ILPK_CAPS: bad value for " + key + ": '" + value + "'");
			}
			if (key == "exact_tw")
				caps.exact_tw_vertices = static_cast<int>(std::min<uint64_t>(v, 30));
			else if (key == "dp_cells")
				caps.dp_cells = v;
			else if (key == "oracle_box")
				caps.oracle_box = v;
			else if (key == "tu_dim")
				caps.tu_dim = static_cast<int>(std::min<uint64_t>(v, 64));
			else if (key == "tu_submatrices")
				caps.tu_submatrices = v;
			else
				throw InvalidInput("ILPK_CAPS: unknown key '" + key + "'");
		}
		return caps;
	}
};

/// Process-wide caps, read once from ILPK_CAPS.
inline const Caps &default_caps()
{
	static const Caps caps = [] {
		const char *env = std::getenv("ILPK_CAPS");
		return env ? Caps::from_string(env) : Caps{};
	}();
	return caps;
}

} // namespace ilpk
