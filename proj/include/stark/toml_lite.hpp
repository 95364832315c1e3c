#pragma once

// Minimal TOML reader for potential spec files: [table] headers,
// key = value pairs with numbers, booleans, basic strings and (possibly
// multi-line) arrays of numbers, and # comments.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "stark/potential.hpp"

namespace stark::toml {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

struct Entry {
    Value value;
    int line = 0;
};

/// table name -> key -> entry. Keys before any header live in table "".
using Document = std::map<std::string, std::map<std::string, Entry>>;

/// Throws ParseError with line and field.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace stark::toml

namespace stark {

/// Builds a Potential from the [potential] table. Recognized families:
/// zero, exp_decay (c, a), gaussian (c, center, width), compact_spline
/// (c, center, halfwidth), power_decay (c, s), tabulated (x, q, qprime0).
/// r defaults to 2. Every failure is a ParseError naming line and field.
Potential potential_from_toml(const toml::Document& doc);
Potential load_potential(const std::string& path);

}  // namespace stark
