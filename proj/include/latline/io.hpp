#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "latline/block_function.hpp"
#include "latline/constructions.hpp"
#include "latline/eps_set.hpp"
#include "latline/errors.hpp"
#include "latline/hom.hpp"
#include "latline/polyline.hpp"
#include "latline/rational.hpp"

namespace latline {

// ---------------------------------------------------------------------
// scalars

inline Rational parse_rational(std::string_view s) {
    auto bad = [&]() -> void { throw_parse("invalid rational '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    std::size_t i = 0;
    bool neg = s[0] == '-';
    if (neg) i = 1;
    std::size_t num_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == num_start) bad();
    Integer num{std::string(s.substr(num_start, i - num_start))};
    Integer den = 1;
    if (i < s.size()) {
        if (s[i] != '/') bad();
        ++i;
        std::size_t den_start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == den_start || i != s.size()) bad();
        den = Integer{std::string(s.substr(den_start, i - den_start))};
        if (den == 0) throw_parse("zero denominator in '" + std::string(s) + "'");
    }
    Rational r(num, den);
    if (neg) r = -r;
    return r;
}

inline std::uint64_t parse_uint(std::string_view s) {
    if (s.empty()) throw_parse("expected a nonnegative integer");
    std::uint64_t v = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw_parse("invalid integer '" + std::string(s) + "'");
        if (v > (UINT64_MAX - static_cast<std::uint64_t>(ch - '0')) / 10)
            throw_parse("integer '" + std::string(s) + "' too large");
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

// Exact decimal rendering with the given number of fraction digits,
// rounding half away from zero. Plotting output only; everything the
// tests compare is exact.
inline std::string format_decimal(const Rational& x, unsigned precision) {
    Integer num = numerator(x), den = denominator(x);
    bool neg = num < 0;
    if (neg) num = -num;
    Integer p10 = 1;
    for (unsigned i = 0; i < precision; ++i) p10 *= 10;
    Integer scaled = (2 * num * p10 + den) / (2 * den);
    std::string out;
    if (neg && scaled != 0) out += '-';
    out += to_string(Integer(scaled / p10));
    if (precision > 0) {
        std::string frac = to_string(Integer(scaled % p10));
        out += '.';
        out += std::string(precision - frac.size(), '0');
        out += frac;
    }
    return out;
}

// ---------------------------------------------------------------------
// sets:  pre=<bits>;per=<bits>

inline EventuallyPeriodicSet parse_set_spec(std::string_view s) {
    auto semi = s.find(';');
    if (semi == std::string_view::npos || !s.starts_with("pre=") ||
        s.substr(semi + 1).substr(0, 4) != "per=")
        throw_parse("set spec must look like pre=<bits>;per=<bits>, got '" + std::string(s) + "'");
    auto bits = [](std::string_view b) {
        // validation walks one full joint cycle, so period lengths combine
        // multiplicatively; keep file-supplied sets reasonable
        if (b.size() > 4096) throw_parse("set bitstrings are limited to 4096 bits");
        std::vector<bool> out;
        out.reserve(b.size());
        for (char ch : b) {
            if (ch != '0' && ch != '1') throw_parse("set bitstrings may only contain 0 and 1");
            out.push_back(ch == '1');
        }
        return out;
    };
    std::vector<bool> pre = bits(s.substr(4, semi - 4));
    std::vector<bool> per = bits(s.substr(semi + 5));
    if (per.empty()) throw_parse("empty period in set spec");
    return EventuallyPeriodicSet(std::move(pre), std::move(per));
}

inline std::string format_set_spec(const EventuallyPeriodicSet& s) {
    std::string out = "pre=";
    for (bool b : s.preperiod()) out += b ? '1' : '0';
    out += ";per=";
    for (bool b : s.period()) out += b ? '1' : '0';
    return out;
}

// ---------------------------------------------------------------------
// homomorphism descriptors:
//   point:λ=p/q,t=p/q
//   filter:λ=p/q,c=p/q,set=pre=…;per=…
// "lambda=" is accepted as an ASCII spelling of "λ=".

namespace detail {

inline std::string_view field_value(std::string_view field, std::string_view expected) {
    if (field.starts_with(expected)) return field.substr(expected.size());
    if (expected == "\xce\xbb=" && field.starts_with("lambda=")) return field.substr(7);
    throw_parse("expected '" + std::string(expected) + "...' in homomorphism spec, got '" +
                std::string(field) + "'");
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        if (pos == std::string_view::npos) {
            out.push_back(s);
            return out;
        }
        out.push_back(s.substr(0, pos));
        s = s.substr(pos + 1);
    }
}

}  // namespace detail

inline HomSpec parse_hom_spec(std::string_view s) {
    if (s.starts_with("point:")) {
        auto fields = detail::split(s.substr(6), ',');
        if (fields.size() != 2) throw_parse("point spec needs exactly λ and t");
        Rational lambda = parse_rational(detail::field_value(fields[0], "\xce\xbb="));
        Rational t = parse_rational(detail::field_value(fields[1], "t="));
        return hom_point(std::move(lambda), std::move(t));
    }
    if (s.starts_with("filter:")) {
        auto fields = detail::split(s.substr(7), ',');
        if (fields.size() != 3) throw_parse("filter spec needs exactly λ, c and set");
        Rational lambda = parse_rational(detail::field_value(fields[0], "\xce\xbb="));
        Rational c = parse_rational(detail::field_value(fields[1], "c="));
        EventuallyPeriodicSet set = parse_set_spec(detail::field_value(fields[2], "set="));
        return hom_filter(std::move(lambda), std::move(c), std::move(set));
    }
    throw_parse("homomorphism spec must start with 'point:' or 'filter:'");
}

inline std::string format_hom_spec(const HomSpec& h) {
    if (std::holds_alternative<ZeroHom>(h)) return "zero";
    if (const auto* p = std::get_if<PointEval>(&h))
        return "point:\xce\xbb=" + to_string(p->lambda) + ",t=" + to_string(p->t);
    const auto& f = std::get<FilterLimit>(h);
    return "filter:\xce\xbb=" + to_string(f.lambda) + ",c=" + to_string(f.c) +
           ",set=" + format_set_spec(f.set);
}

// ---------------------------------------------------------------------
// function spec files: one document per function, line oriented.
//
//   driver pre=;per=10
//   template T0 c=1; a=1; b=0; d=0 | c=2; a=0; b=0; d=0
//   selector 10 -> T0
//   override n=3 -> T1
//
// Blank lines and lines starting with # are ignored. Selector bit i
// (leftmost character) is membership in the i-th driver line; a function
// without drivers uses the single row '-'. Integer sequence files add
//   override-int m=5 y=100
// lines on top of the same grammar.

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct FunctionSpecLines {
    std::vector<EventuallyPeriodicSet> drivers;
    std::vector<std::pair<std::string, BlockTemplate>> templates;
    std::vector<std::pair<std::string, std::string>> selector_rows;  // bits -> id
    std::vector<std::pair<std::uint64_t, std::string>> override_rows;
    std::map<std::uint64_t, Rational> integer_overrides;
};

inline BlockAnchor parse_anchor(std::string_view text, std::size_t line_no) {
    BlockAnchor anchor{Rational(0), {0, 0, 0}};
    bool have_c = false;
    for (std::string_view field : split(text, ';')) {
        field = trim(field);
        if (field.empty()) continue;
        auto eq = field.find('=');
        if (eq == std::string_view::npos)
            throw_parse("line " + std::to_string(line_no) + ": anchor field needs key=value");
        std::string_view key = trim(field.substr(0, eq));
        Rational value = parse_rational(trim(field.substr(eq + 1)));
        if (key == "c") {
            anchor.c = std::move(value);
            have_c = true;
        } else if (key == "a") {
            anchor.value.a = std::move(value);
        } else if (key == "b") {
            anchor.value.b = std::move(value);
        } else if (key == "d") {
            anchor.value.d = std::move(value);
        } else {
            throw_parse("line " + std::to_string(line_no) + ": unknown anchor field '" +
                        std::string(key) + "'");
        }
    }
    if (!have_c) throw_parse("line " + std::to_string(line_no) + ": anchor needs a position c");
    return anchor;
}

inline FunctionSpecLines parse_spec_lines(std::string_view text, bool allow_integer_overrides) {
    FunctionSpecLines out;
    std::size_t line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto space = line.find(' ');
        std::string_view head = line.substr(0, space);
        std::string_view rest =
            space == std::string_view::npos ? std::string_view{} : trim(line.substr(space + 1));
        if (head == "driver") {
            out.drivers.push_back(parse_set_spec(rest));
        } else if (head == "template") {
            auto id_end = rest.find(' ');
            if (id_end == std::string_view::npos)
                throw_parse("line " + std::to_string(line_no) + ": template needs an id and anchors");
            std::string id(rest.substr(0, id_end));
            std::vector<BlockAnchor> anchors;
            for (std::string_view part : split(rest.substr(id_end + 1), '|'))
                anchors.push_back(parse_anchor(part, line_no));
            out.templates.emplace_back(std::move(id), BlockTemplate(std::move(anchors)));
        } else if (head == "selector") {
            auto arrow = rest.find("->");
            if (arrow == std::string_view::npos)
                throw_parse("line " + std::to_string(line_no) + ": selector row needs 'bits -> id'");
            out.selector_rows.emplace_back(std::string(trim(rest.substr(0, arrow))),
                                           std::string(trim(rest.substr(arrow + 2))));
        } else if (head == "override") {
            auto arrow = rest.find("->");
            if (arrow == std::string_view::npos)
                throw_parse("line " + std::to_string(line_no) + ": override needs 'n=k -> id'");
            std::string_view lhs = trim(rest.substr(0, arrow));
            if (!lhs.starts_with("n="))
                throw_parse("line " + std::to_string(line_no) + ": override needs 'n=k -> id'");
            std::uint64_t n = parse_uint(trim(lhs.substr(2)));
            if (n > (std::uint64_t{1} << 20))
                throw_parse("line " + std::to_string(line_no) +
                            ": override block index too large (validation walks every earlier block)");
            out.override_rows.emplace_back(n, std::string(trim(rest.substr(arrow + 2))));
        } else if (head == "override-int" && allow_integer_overrides) {
            auto fields = split(rest, ' ');
            if (fields.size() != 2 || !trim(fields[0]).starts_with("m=") ||
                !trim(fields[1]).starts_with("y="))
                throw_parse("line " + std::to_string(line_no) + ": expected 'override-int m=K y=R'");
            std::uint64_t m = parse_uint(trim(fields[0]).substr(2));
            if (m < 1)
                throw_parse("line " + std::to_string(line_no) + ": integer overrides start at m=1");
            out.integer_overrides[m] = parse_rational(trim(fields[1]).substr(2));
        } else {
            throw_parse("line " + std::to_string(line_no) + ": unknown directive '" +
                        std::string(head) + "'");
        }
    }
    return out;
}

inline BlockFunction assemble_function(const FunctionSpecLines& lines) {
    BlockFunctionData d;
    d.drivers = lines.drivers;
    if (d.drivers.size() > 4)
        throw_parse("function files allow at most 4 driver sets, got " +
                    std::to_string(d.drivers.size()));
    std::map<std::string, std::size_t> ids;
    for (const auto& [id, t] : lines.templates) {
        if (ids.count(id)) throw_parse("duplicate template id '" + id + "'");
        ids[id] = d.templates.size();
        d.templates.push_back(t);
    }
    auto lookup = [&](const std::string& id) {
        auto it = ids.find(id);
        if (it == ids.end()) throw_parse("unknown template id '" + id + "'");
        return it->second;
    };
    const std::size_t rows = std::size_t{1} << d.drivers.size();
    d.selector.assign(rows, std::size_t(-1));
    for (const auto& [bits, id] : lines.selector_rows) {
        std::size_t v = 0;
        if (d.drivers.empty()) {
            if (bits != "-") throw_parse("a function without drivers uses the selector row '-'");
        } else {
            if (bits.size() != d.drivers.size())
                throw_parse("selector bits '" + bits + "' must have one bit per driver");
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i] != '0' && bits[i] != '1')
                    throw_parse("selector bits may only contain 0 and 1");
                if (bits[i] == '1') v |= std::size_t{1} << i;
            }
        }
        if (d.selector[v] != std::size_t(-1))
            throw_parse("duplicate selector row '" + bits + "'");
        d.selector[v] = lookup(id);
    }
    for (std::size_t v = 0; v < rows; ++v)
        if (d.selector[v] == std::size_t(-1))
            throw_parse("selector row missing for membership vector " + std::to_string(v));
    for (const auto& [n, id] : lines.override_rows) d.overrides[n] = lookup(id);
    return BlockFunction(std::move(d));
}

}  // namespace detail

inline BlockFunction parse_function_spec(std::string_view text) {
    return detail::assemble_function(detail::parse_spec_lines(text, false));
}

inline IntegerSequenceSpec parse_sequence_spec(std::string_view text) {
    detail::FunctionSpecLines lines = detail::parse_spec_lines(text, true);
    IntegerSequenceSpec g{detail::assemble_function(lines), lines.integer_overrides};
    return g;
}

inline std::string format_function_spec(const BlockFunction& f) {
    std::string out;
    for (const auto& s : f.drivers()) out += "driver " + format_set_spec(s) + "\n";
    for (std::size_t i = 0; i < f.templates().size(); ++i) {
        out += "template T" + std::to_string(i) + " ";
        const auto& anchors = f.templates()[i].anchors();
        for (std::size_t j = 0; j < anchors.size(); ++j) {
            if (j) out += " | ";
            out += "c=" + to_string(anchors[j].c) + "; a=" + to_string(anchors[j].value.a) +
                   "; b=" + to_string(anchors[j].value.b) + "; d=" + to_string(anchors[j].value.d);
        }
        out += "\n";
    }
    const std::size_t k = f.drivers().size();
    for (std::size_t v = 0; v < f.data().selector.size(); ++v) {
        std::string bits;
        for (std::size_t i = 0; i < k; ++i) bits += (v & (std::size_t{1} << i)) ? '1' : '0';
        if (k == 0) bits = "-";
        out += "selector " + bits + " -> T" + std::to_string(f.data().selector[v]) + "\n";
    }
    for (const auto& [n, id] : f.overrides())
        out += "override n=" + std::to_string(n) + " -> T" + std::to_string(id) + "\n";
    return out;
}

inline std::string format_sequence_spec(const IntegerSequenceSpec& g) {
    std::string out = format_function_spec(g.base);
    for (const auto& [m, y] : g.overrides)
        out += "override-int m=" + std::to_string(m) + " y=" + to_string(y) + "\n";
    return out;
}

// ---------------------------------------------------------------------
// polyline files: one 'x_num/x_den y_num/y_den' breakpoint per line

inline Polyline parse_polyline_file(std::string_view text) {
    std::vector<Breakpoint> pts;
    std::size_t line_no = 0;
    for (std::string_view raw : detail::split(text, '\n')) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto space = line.find(' ');
        if (space == std::string_view::npos)
            throw_parse("line " + std::to_string(line_no) + ": expected 'x y' breakpoint");
        pts.push_back({parse_rational(detail::trim(line.substr(0, space))),
                       parse_rational(detail::trim(line.substr(space + 1)))});
    }
    if (pts.size() < 2) throw_parse("polyline file needs at least two breakpoints");
    return Polyline(std::move(pts));
}

inline std::string format_polyline_file(const Polyline& p) {
    std::string out;
    for (const auto& bp : p.points()) {
        out += to_string(numerator(bp.x)) + "/" + to_string(denominator(bp.x)) + " " +
               to_string(numerator(bp.y)) + "/" + to_string(denominator(bp.y)) + "\n";
    }
    return out;
}

inline std::string polyline_to_csv(const Polyline& p, unsigned precision) {
    std::string out = "x,y\n";
    for (const auto& bp : p.points())
        out += format_decimal(bp.x, precision) + "," + format_decimal(bp.y, precision) + "\n";
    return out;
}

}  // namespace latline
