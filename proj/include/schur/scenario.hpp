/**
 * @file scenario.hpp
 * @brief Scenario files: the group, the two curves, named bundle recipes,
 *        descent hints, H_1 torsion and candidate sequences.
 *
 * A scenario is a JSON document. Group elements are written as sums of
 * basis names ("e1+e3") or of aliases declared in the file. Bundles are
 * lists of terms over atoms, and sequence members are sums of bundle names
 * on each curve together with a character expression.
 */
#pragma once

#include "curve.hpp"
#include "table_io.hpp"

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace schur {

struct NamedBundle {
    std::string name;
    std::string curve;   // "C" or "D"
    DivisorExpr expr;
    std::string description;
    std::optional<std::string> fixture;   // fixture table name
};

/// A character written as a sum of symbols plus a constant character.
struct CharExpr {
    std::uint32_t symbols = 0;    // bit k set: symbol k occurs
    std::uint32_t constant = 0;   // character bits

    friend bool operator==(const CharExpr&, const CharExpr&) = default;
    friend CharExpr operator+(CharExpr a, const CharExpr& b) { return {a.symbols ^ b.symbols, a.constant ^ b.constant}; }
    bool is_zero() const { return symbols == 0 && constant == 0; }
};

inline std::string to_string(const CharExpr& x, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t k = 0; k < names.size(); ++k)
        if (x.symbols >> k & 1u) s += (s.empty() ? "" : "+") + names[k];
    if (x.constant) s += (s.empty() ? "" : "+") + std::string("chi:") + bits_to_string(x.constant);
    return s.empty() ? "0" : s;
}

struct SequenceMember {
    std::string c_text;
    std::string d_text;
    std::string chi_text;
    DivisorExpr c;
    DivisorExpr d;
    CharExpr chi;
    std::optional<std::string> fixture;

    std::string label(const std::vector<std::string>& symbols) const {
        return "(" + c_text + ") x (" + d_text + ")(" + to_string(chi, symbols) + ")";
    }
};

struct SequenceSpec {
    std::string name;
    std::string description;
    std::vector<std::string> symbols;
    std::vector<SequenceMember> members;
};

struct Scenario {
    std::string name;
    std::string title;
    std::filesystem::path file;
    GroupSpec group;
    std::map<std::string, std::uint32_t> aliases;
    std::shared_ptr<const CurveModel> c;
    std::shared_ptr<const CurveModel> d;
    std::vector<DescentHint> c_hints;
    std::vector<DescentHint> d_hints;
    std::vector<std::int64_t> h1_torsion;
    std::vector<NamedBundle> bundles;
    std::vector<SequenceSpec> sequences;

    const CurveModel& curve(const std::string& which) const {
        if (which == "C") return *c;
        if (which == "D") return *d;
        throw std::invalid_argument("unknown curve '" + which + "'");
    }
    const std::vector<DescentHint>& hints(const std::string& which) const { return which == "C" ? c_hints : d_hints; }

    const NamedBundle* find_bundle(const std::string& n) const {
        for (const auto& b : bundles)
            if (b.name == n) return &b;
        return nullptr;
    }
    const NamedBundle& bundle(const std::string& n) const {
        if (auto b = find_bundle(n)) return *b;
        throw std::invalid_argument(name + ": unknown bundle '" + n + "'");
    }
    const SequenceSpec& sequence(const std::string& n) const {
        for (const auto& s : sequences)
            if (s.name == n) return s;
        throw std::invalid_argument(name + ": unknown sequence '" + n + "'");
    }

    std::uint32_t element(const std::string& text) const {
        std::uint32_t bits = 0;
        std::size_t start = 0;
        if (text == "0") return 0;
        while (start <= text.size()) {
            auto end = text.find('+', start);
            std::string tok = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
            auto it = aliases.find(tok);
            bits ^= it != aliases.end() ? it->second : parse_bits(group, tok);
            if (end == std::string::npos) break;
            start = end + 1;
        }
        return bits;
    }

    std::string element_label(std::uint32_t bits) const { return bits_to_string(bits); }
};

namespace detail {

using Json = nlohmann::ordered_json;

inline std::vector<DescentHint> parse_hints(const Scenario& sc, const Json& j) {
    std::vector<DescentHint> out;
    for (const auto& h : j) {
        DescentHint d;
        d.sigma = sc.element(h.at("sigma").get<std::string>());
        if (h.contains("base")) {
            auto b = h.at("base").get<std::string>();
            if (b == "P1") d.base_genus = 0;
            else if (b == "elliptic") d.base_genus = 1;
            else throw std::invalid_argument(sc.name + ": base type must be P1 or elliptic, got '" + b + "'");
        }
        out.push_back(d);
    }
    return out;
}

inline std::size_t fiber_index(const CurveModel& c, const Json& t) {
    auto f = t.at("fiber").get<std::int64_t>();
    if (f < 1 || std::size_t(f) > c.fiber_count()) throw std::invalid_argument(c.name() + ": fiber number out of range");
    return std::size_t(f - 1);
}

inline DivisorExpr parse_terms(const Scenario& sc, const std::string& curve, const Json& terms,
                               const std::map<std::string, DivisorExpr>& known) {
    const CurveModel& c = sc.curve(curve);
    DivisorExpr out;
    for (const auto& t : terms) {
        std::int64_t coef = t.value("coef", std::int64_t{1});
        std::string kind = t.at("atom").get<std::string>();
        if (kind == "fiber") {
            out = out + DivisorExpr(WholeFiber{fiber_index(c, t)}, coef);
        } else if (kind == "generic") {
            out = out + DivisorExpr(GenericClass{}, coef);
        } else if (kind == "canonical") {
            out = out + DivisorExpr(CanonicalClass{}, coef);
        } else if (kind == "pullback") {
            PullbackPoint p;
            for (const auto& g : t.at("subgroup")) p.subgroup_gens.push_back(sc.element(g.get<std::string>()));
            p.fiber = fiber_index(c, t);
            p.rep = sc.element(t.value("rep", std::string("0")));
            p.mult = t.value("mult", std::int64_t{1});
            if (t.contains("swap")) p.swap = sc.element(t.at("swap").get<std::string>());
            out = out + DivisorExpr(p, coef);
        } else if (kind == "E") {
            auto e = [&](const char* k) { return sc.element(t.at(k).get<std::string>()); };
            out = out + DivisorExpr(pullback_atom(c, e("x"), e("y"), e("z"), e("w")), coef);
        } else if (kind == "half") {
            auto e = [&](const char* k) { return sc.element(t.at(k).get<std::string>()); };
            out = out + DivisorExpr(half_fiber_pair(c, e("x"), e("y"), e("z")), coef);
        } else if (kind == "bundle") {
            auto n = t.at("name").get<std::string>();
            auto it = known.find(n);
            if (it == known.end()) throw std::invalid_argument(sc.name + ": bundle '" + n + "' is used before it is defined");
            out = out + coef * it->second;
        } else {
            throw std::invalid_argument(sc.name + ": unknown atom kind '" + kind + "'");
        }
    }
    return out;
}

} // namespace detail

/**
 * Parses "a - b + 2*c" over the named bundles on one curve. "0" is the
 * structure sheaf.
 */
inline DivisorExpr parse_bundle_sum(const Scenario& sc, const std::string& curve, const std::string& text) {
    DivisorExpr out;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty bundle expression");
    if (s == "0") return out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw std::invalid_argument("malformed bundle expression '" + text + "'");
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string tok = s.substr(i, j - i);
        std::int64_t mult = 1;
        if (auto star = tok.find('*'); star != std::string::npos) {
            mult = std::stoll(tok.substr(0, star));
            tok = tok.substr(star + 1);
        }
        const auto& b = sc.bundle(tok);
        if (b.curve != curve) throw std::invalid_argument("bundle '" + tok + "' lives on " + b.curve + ", not " + curve);
        out = out + (sign * mult) * b.expr;
        i = j;
    }
    return out;
}

inline CharExpr parse_char_expr(const Scenario& sc, const std::vector<std::string>& symbols, const std::string& text) {
    CharExpr out;
    if (text == "0") return out;
    std::size_t start = 0;
    bool in_constant = false;
    while (true) {
        auto end = text.find('+', start);
        std::string tok = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        auto it = std::find(symbols.begin(), symbols.end(), tok);
        if (it != symbols.end()) {
            out.symbols ^= 1u << (it - symbols.begin());
            in_constant = false;
        } else if (tok.rfind("chi:", 0) == 0) {
            out.constant ^= sc.element(tok.substr(4));
            in_constant = true;
        } else if (in_constant) {
            // "chi:e1+e3": later basis names continue the same element.
            out.constant ^= sc.element(tok);
        } else {
            throw std::invalid_argument(sc.name + ": unknown character '" + tok + "'");
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

inline Scenario parse_scenario(const std::string& text, const std::string& source = "scenario") {
    using detail::Json;
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(source + ": " + e.what());
    }
    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.title = j.value("title", "");
    sc.group = GroupSpec(j.at("group_rank").get<unsigned>());
    const Json aliases = j.value("aliases", Json::object());
    for (auto& [k, v] : aliases.items()) sc.aliases[k] = parse_bits(sc.group, v.get<std::string>());

    auto load_curve = [&](const char* key, const char* prefix) {
        const auto& cj = j.at("curves").at(key);
        std::vector<std::uint32_t> st;
        for (const auto& s : cj.at("stabilizers")) st.push_back(sc.element(s.get<std::string>()));
        return std::make_shared<const CurveModel>(key, sc.group, st, cj.value("prefix", std::string(prefix)));
    };
    sc.c = load_curve("C", "E");
    sc.d = load_curve("D", "F");
    sc.c_hints = detail::parse_hints(sc, j.at("curves").at("C").value("hints", Json::array()));
    sc.d_hints = detail::parse_hints(sc, j.at("curves").at("D").value("hints", Json::array()));
    sc.h1_torsion = j.value("h1_torsion", std::vector<std::int64_t>{});

    std::map<std::string, DivisorExpr> known;
    for (auto& [name, b] : j.at("bundles").items()) {
        NamedBundle nb;
        nb.name = name;
        nb.curve = b.at("curve").get<std::string>();
        nb.description = b.value("description", "");
        if (b.contains("fixture")) nb.fixture = b.at("fixture").get<std::string>();
        nb.expr = detail::parse_terms(sc, nb.curve, b.at("terms"), known);
        known[name] = nb.expr;
        sc.bundles.push_back(std::move(nb));
    }
    const Json sequences = j.value("sequences", Json::object());
    for (auto& [name, s] : sequences.items()) {
        SequenceSpec seq;
        seq.name = name;
        seq.description = s.value("description", "");
        seq.symbols = s.value("symbols", std::vector<std::string>{});
        for (const auto& m : s.at("members")) {
            SequenceMember mem;
            mem.c_text = m.at("C").get<std::string>();
            mem.d_text = m.at("D").get<std::string>();
            mem.chi_text = m.value("chi", std::string("0"));
            mem.c = parse_bundle_sum(sc, "C", mem.c_text);
            mem.d = parse_bundle_sum(sc, "D", mem.d_text);
            mem.chi = parse_char_expr(sc, seq.symbols, mem.chi_text);
            if (m.contains("fixture")) mem.fixture = m.at("fixture").get<std::string>();
            seq.members.push_back(std::move(mem));
        }
        sc.sequences.push_back(std::move(seq));
    }
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    Scenario sc = parse_scenario(read_file(path.string()), path.string());
    sc.file = path;
    return sc;
}

inline std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("scenario directory not found: " + dir.string());
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".scenario") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

/// Loads dir/<name>.scenario.
inline Scenario find_scenario(const std::filesystem::path& dir, const std::string& name) {
    auto p = dir / (name + ".scenario");
    if (!std::filesystem::exists(p)) throw std::invalid_argument("unknown scenario '" + name + "'");
    return load_scenario(p);
}

} // namespace schur
