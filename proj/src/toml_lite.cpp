#include "stark/toml_lite.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stark/errors.hpp"

namespace stark::toml {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& tok, double& out) {
    std::string t;
    for (char ch : tok)
        if (ch != '_') t.push_back(ch);
    if (t.empty()) return false;
    if (t == "inf" || t == "+inf" || t == "-inf" || t == "nan" || t == "+nan" || t == "-nan")
        return false;  // non-finite values are never meaningful here
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), out);
    return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

Value parse_value(const std::string& raw, int line, const std::string& key) {
    const std::string v = trim(raw);
    if (v.empty()) throw ParseError("missing value", line, key);
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw ParseError("unterminated string", line, key);
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') throw ParseError("unterminated array", line, key);
        std::vector<double> out;
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;  // trailing comma
            double d = 0.0;
            if (!parse_number(item, d))
                throw ParseError("array element '" + item + "' is not a finite number", line, key);
            out.push_back(d);
        }
        return out;
    }
    double d = 0.0;
    if (!parse_number(v, d)) throw ParseError("value '" + v + "' is not a finite number", line, key);
    return d;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char ch : k)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) return false;
    return true;
}

}  // namespace

Document parse(const std::string& text) {
    Document doc;
    doc[""];
    std::string table;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3 || line[1] == '[')
                throw ParseError("malformed table header", line_no, line);
            table = trim(line.substr(1, line.size() - 2));
            if (!valid_key(table)) throw ParseError("invalid table name", line_no, table);
            if (doc.count(table) && !doc[table].empty())
                throw ParseError("duplicate table", line_no, table);
            doc[table];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no, line);
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ParseError("invalid key", line_no, key);
        std::string value = trim(line.substr(eq + 1));
        const int start_line = line_no;
        // Multi-line arrays: keep reading until brackets balance.
        if (!value.empty() && value.front() == '[') {
            while (std::count(value.begin(), value.end(), '[') >
                   std::count(value.begin(), value.end(), ']')) {
                if (!std::getline(in, raw)) throw ParseError("unterminated array", start_line, key);
                ++line_no;
                value += " " + trim(strip_comment(raw));
            }
        }
        auto& tbl = doc[table];
        if (tbl.count(key)) throw ParseError("duplicate key", start_line, key);
        tbl[key] = Entry{parse_value(value, start_line, key), start_line};
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open potential file '" + path + "'", 0, "");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

}  // namespace stark::toml

namespace stark {
namespace {

struct Reader {
    const std::map<std::string, toml::Entry>& tbl;
    int header_line;
    std::set<std::string> used;

    const toml::Entry* find(const std::string& key) {
        used.insert(key);
        auto it = tbl.find(key);
        return it == tbl.end() ? nullptr : &it->second;
    }
    double number(const std::string& key) {
        const toml::Entry* e = find(key);
        if (!e) throw ParseError("missing required field", header_line, key);
        if (auto d = std::get_if<double>(&e->value)) return *d;
        throw ParseError("field must be a number", e->line, key);
    }
    double number_or(const std::string& key, double fallback) {
        return tbl.count(key) ? number(key) : (used.insert(key), fallback);
    }
    std::vector<double> array(const std::string& key) {
        const toml::Entry* e = find(key);
        if (!e) throw ParseError("missing required field", header_line, key);
        if (auto v = std::get_if<std::vector<double>>(&e->value)) return *v;
        throw ParseError("field must be an array of numbers", e->line, key);
    }
    std::string string(const std::string& key) {
        const toml::Entry* e = find(key);
        if (!e) throw ParseError("missing required field", header_line, key);
        if (auto s = std::get_if<std::string>(&e->value)) return *s;
        throw ParseError("field must be a string", e->line, key);
    }
    int line_of(const std::string& key) const {
        auto it = tbl.find(key);
        return it == tbl.end() ? header_line : it->second.line;
    }
    void reject_unknown() const {
        for (const auto& [k, e] : tbl)
            if (!used.count(k)) throw ParseError("unknown field", e.line, k);
    }
};

}  // namespace

Potential potential_from_toml(const toml::Document& doc) {
    auto it = doc.find("potential");
    if (it == doc.end()) throw ParseError("missing [potential] table", 0, "potential");
    int header_line = 0;
    for (const auto& [k, e] : it->second) header_line = header_line ? std::min(header_line, e.line) : e.line;
    Reader rd{it->second, header_line, {}};

    const std::string family = rd.string("family");
    const double r = rd.number_or("r", 2.0);
    // Library validation errors are mapped onto the field most likely at fault.
    auto wrap = [&](auto&& build, const std::string& field) -> Potential {
        try {
            return build();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), rd.line_of(field), field);
        }
    };

    Potential out;
    if (family == "zero") {
        out = wrap([&] { return Potential::zero(r); }, "r");
    } else if (family == "exp_decay") {
        const double c = rd.number("c"), a = rd.number("a");
        out = wrap([&] { return Potential::exp_decay(c, a, r); }, "a");
    } else if (family == "gaussian") {
        const double c = rd.number("c"), m = rd.number("center"), w = rd.number("width");
        out = wrap([&] { return Potential::gaussian(c, m, w, r); }, "width");
    } else if (family == "compact_spline") {
        const double c = rd.number("c"), m = rd.number("center"), h = rd.number("halfwidth");
        out = wrap([&] { return Potential::compact_spline(c, m, h, r); }, "halfwidth");
    } else if (family == "power_decay") {
        const double c = rd.number("c"), s = rd.number("s");
        out = wrap([&] { return Potential::power_decay(c, s, r); }, "s");
    } else if (family == "tabulated") {
        std::vector<double> xs = rd.array("x"), qs = rd.array("q");
        const double qp0 = rd.number("qprime0");
        if (xs.size() != qs.size())
            throw ParseError("x and q arrays differ in length", rd.line_of("q"), "q");
        if (!qs.empty() && std::abs(qs.back()) > 1e-9)
            throw ParseError("tabulated q must decay below 1e-9 at the last knot", rd.line_of("q"), "q");
        out = wrap([&] { return Potential::tabulated(xs, qs, qp0, r); }, "x");
    } else {
        throw ParseError("unknown family '" + family + "'", rd.line_of("family"), "family");
    }
    rd.reject_unknown();
    return out;
}

Potential load_potential(const std::string& path) { return potential_from_toml(toml::parse_file(path)); }

}  // namespace stark
