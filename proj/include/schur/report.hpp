/**
 * @file report.hpp
 * @brief Text and JSON rendering of sequence reports.
 *
 * Computed facts and statements taken from cited theorems are kept in
 * separate sections. Pairs are listed in canonical (i, j) order, so output
 * is identical across runs.
 */
#pragma once

#include "surface.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace schur {

inline std::string to_string(CharacterMode m) {
    switch (m) {
    case CharacterMode::Symbolic: return "symbolic";
    case CharacterMode::All: return "all";
    default: return "concrete";
    }
}

/**
 * Parses "symbolic", "all" or a comma-separated assignment such as
 * "chi1=chi:e1,chi2=0". Symbols left out of an assignment get the trivial
 * character.
 */
inline std::pair<CharacterMode, std::vector<std::uint32_t>> parse_character_mode(const Scenario& sc, const SequenceSpec& seq,
                                                                                  const std::string& text) {
    if (text == "symbolic") return {CharacterMode::Symbolic, {}};
    if (text == "all") return {CharacterMode::All, {}};
    std::vector<std::uint32_t> values(seq.symbols.size(), 0);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("character assignment '" + item + "' needs the form name=chi:element");
        auto name = item.substr(0, eq);
        auto it = std::find(seq.symbols.begin(), seq.symbols.end(), name);
        if (it == seq.symbols.end()) throw std::invalid_argument("sequence '" + seq.name + "' has no character symbol '" + name + "'");
        auto value = parse_char_expr(sc, {}, item.substr(eq + 1));
        values[std::size_t(it - seq.symbols.begin())] = value.constant;
    }
    return {CharacterMode::Concrete, values};
}

namespace detail {

using OJson = nlohmann::ordered_json;

inline OJson dims_json(const std::optional<CohomologyResult>& r) {
    if (!r) return nullptr;
    return OJson{{"h0", r->h0}, {"h1", r->h1}, {"route", r->route_summary()}};
}

inline OJson total_json(const KunnethDims& k) {
    OJson a = OJson::array();
    for (const auto& x : k) a.push_back(x ? OJson(*x) : OJson(nullptr));
    return a;
}

} // namespace detail

inline nlohmann::ordered_json report_json(const SequenceReport& r) {
    using detail::OJson;
    OJson j;
    j["scenario"] = r.scenario;
    j["sequence"] = r.sequence;
    j["characters"] = r.mode == CharacterMode::Concrete ? r.assignment_text : to_string(r.mode);
    const auto& inv = r.invariants;
    j["surface"] = {{"genus_c", inv.genus_c},     {"genus_d", inv.genus_d},
                    {"group_order", inv.group_order}, {"free_action", inv.free_action},
                    {"chi", inv.chi},             {"q", inv.irregularity},
                    {"p_g", inv.geometric_genus}, {"K2", inv.k_squared},
                    {"euler_number", inv.euler_number}, {"b2", inv.b2}};
    OJson members = OJson::array();
    for (std::size_t a = 0; a < r.members.size(); ++a) {
        const auto& m = r.members[a];
        OJson mj{{"index", a + 1}, {"bundle", m.label}, {"descends", m.descent.descends}};
        mj["fixture"] = m.fixture ? OJson(*m.fixture) : OJson(nullptr);
        mj["fixture_matches"] = m.fixture_matches ? OJson(*m.fixture_matches) : OJson(nullptr);
        members.push_back(mj);
    }
    j["members"] = members;
    OJson pairs = OJson::array();
    for (const auto& p : r.pairs) {
        OJson pj{{"i", p.i}, {"j", p.j}, {"C", p.c_label}, {"D", p.d_label}, {"character", to_string(p.chi, r.symbols)}};
        pj["C_dims"] = detail::dims_json(p.c_dims);
        pj["D_dims"] = detail::dims_json(p.d_dims);
        pj["total"] = detail::total_json(p.total);
        OJson degrees = OJson::array();
        for (int k = 0; k < 3; ++k) {
            const auto& v = p.verdicts[std::size_t(k)];
            OJson vj{{"degree", k}, {"verdict", to_string(v.kind)}};
            if (v.kind == VerdictKind::ExistsByCount || v.kind == VerdictKind::Nonzero) vj["value"] = v.value;
            vj["note"] = v.note;
            degrees.push_back(vj);
        }
        pj["degrees"] = degrees;
        if (!p.undecided_reason.empty()) pj["undecided_reason"] = p.undecided_reason;
        pairs.push_back(pj);
    }
    j["pair_verdicts"] = pairs;
    j["verdict"] = to_string(r.verdict);
    j["offending"] = r.offending;
    if (r.mode == CharacterMode::All) {
        j["assignments"] = {{"checked", r.assignments_checked}, {"exceptional", r.assignments_exceptional}};
        j["assignments"]["first_failing"] = r.first_failing_assignment ? OJson(*r.first_failing_assignment) : OJson(nullptr);
    }
    if (!r.existence.empty()) {
        OJson ex = OJson::array();
        for (const auto& c : r.existence)
            ex.push_back({{"character", to_string(c.chi, r.symbols)}, {"excluded", c.excluded}, {"pairs", c.pairs}});
        j["existence"] = {{"conditions", ex}, {"summary", r.existence_summary}};
    }
    j["length"] = r.length;
    j["maximal"] = r.maximal;
    j["k_theory"] = {{"rank", r.k_theory.rank}, {"torsion", r.k_theory.torsion}, {"torsion_label", r.k_theory.torsion_label()}};
    OJson ext = OJson::array();
    for (const auto& e : r.ext_table)
        ext.push_back({{"a", e.a}, {"b", e.b}, {"C", e.c_label}, {"D", e.d_label}, {"total", detail::total_json(e.total)}});
    j["ext_table"] = ext;
    if (r.height) {
        const auto& h = *r.height;
        j["height"] = {{"forward_hom_free", h.forward_hom_free},
                       {"twisted_hom_free", h.twisted_hom_free},
                       {"no_ext1_cycle", h.no_ext1_cycle},
                       {"failures", h.failures},
                       {"pseudoheight_lower_bound", h.pseudoheight_lower_bound},
                       {"P2", h.bicanonical_genus}};
        j["height"]["pseudoheight"] = h.pseudoheight ? OJson(*h.pseudoheight) : OJson(nullptr);
        j["height"]["height"] = h.height ? OJson(*h.height) : OJson(nullptr);
    } else {
        j["height"] = nullptr;
    }
    j["cited_consequences"] = r.cited;
    return j;
}

inline std::string report_text(const SequenceReport& r) {
    std::ostringstream os;
    const auto& inv = r.invariants;
    os << "scenario " << r.scenario << ", sequence " << r.sequence << ", characters "
       << (r.mode == CharacterMode::Concrete ? r.assignment_text : to_string(r.mode)) << "\n";
    os << "surface: g(C) = " << inv.genus_c << ", g(D) = " << inv.genus_d << ", |G| = " << inv.group_order
       << ", free = " << (inv.free_action ? "yes" : "no") << ", chi = " << inv.chi << ", q = " << inv.irregularity
       << ", p_g = " << inv.geometric_genus << ", K^2 = " << inv.k_squared << ", e = " << inv.euler_number << ", b2 = " << inv.b2
       << "\n\nmembers:\n";
    for (std::size_t a = 0; a < r.members.size(); ++a) {
        const auto& m = r.members[a];
        os << "  E" << a + 1 << " = " << m.label << "  descends: " << (m.descent.descends ? "yes" : "no");
        if (m.fixture) {
            os << ", cocycle vs " << *m.fixture << ": ";
            os << (m.fixture_matches ? (*m.fixture_matches ? "equal" : "differs") : "not compared");
        }
        os << "\n";
    }
    os << "\npairs Hom(E_i, E_j[k]), i > j:\n";
    for (const auto& p : r.pairs) {
        os << "  (" << p.i << "," << p.j << ") (" << p.c_label << ") x (" << p.d_label << ")(" << to_string(p.chi, r.symbols) << ")\n";
        auto dims = [](const std::optional<CohomologyResult>& d) {
            return d ? "(" + std::to_string(d->h0) + "," + std::to_string(d->h1) + ")" : std::string("undecided");
        };
        os << "      C " << dims(p.c_dims) << ", D " << dims(p.d_dims) << ", total " << dims_string(p.total) << "\n";
        for (int k = 0; k < 3; ++k) {
            const auto& v = p.verdicts[std::size_t(k)];
            os << "      k=" << k << ": " << v.label() << " (" << v.note << ")\n";
        }
        if (!p.undecided_reason.empty()) os << "      undecided: " << p.undecided_reason << "\n";
    }
    os << "\nverdict: " << to_string(r.verdict) << "\n";
    if (r.mode == CharacterMode::All)
        os << "assignments: " << r.assignments_exceptional << " of " << r.assignments_checked << " exceptional\n";
    if (r.first_failing_assignment) os << "first failing assignment: " << *r.first_failing_assignment << "\n";
    for (const auto& o : r.offending) os << "offending: " << o << "\n";
    if (!r.existence.empty()) {
        os << "existence conditions:\n";
        for (const auto& c : r.existence) {
            os << "  " << to_string(c.chi, r.symbols) << " must avoid at most " << c.excluded << " characters, pairs";
            for (const auto& t : c.pairs) os << " " << t;
            os << "\n";
        }
        os << "  " << r.existence_summary << "\n";
    }
    os << "length " << r.length << ", rank K(S) = " << r.k_theory.rank << ", maximal: " << (r.maximal ? "yes" : "no") << "\n";
    os << "K(S) torsion: " << r.k_theory.torsion_label() << "\n";
    if (!r.ext_table.empty()) {
        os << "\nExt^k(E_a, E_b) total dimensions on C x D, a < b:\n";
        for (const auto& e : r.ext_table)
            os << "  (" << e.a << "," << e.b << ") (" << e.c_label << ") x (" << e.d_label << "): " << dims_string(e.total) << "\n";
    }
    if (r.height) {
        const auto& h = *r.height;
        os << "\nheight evidence:\n";
        os << "  Hom(E_a, E_b) = 0 for a < b: " << (h.forward_hom_free ? "yes" : "no") << "\n";
        os << "  Hom(E_a, E_b x omega^-1) = 0 for all a, b: " << (h.twisted_hom_free ? "yes" : "no") << "\n";
        os << "  Ext^1(E_a, E_b x omega^-1) = 0 for all a, b: " << (h.no_ext1_cycle ? "yes" : "no") << "\n";
        for (const auto& f : h.failures) os << "  failure: " << f << "\n";
        os << "  pseudoheight >= " << h.pseudoheight_lower_bound << "\n";
    }
    if (!r.cited.empty()) {
        os << "\ncited-theorem consequences:\n";
        for (const auto& c : r.cited) os << "  - " << c << "\n";
    }
    return os.str();
}

/// Exit status for a verification: 0 exceptional, 2 exceptional by existence, 1 not exceptional, 3 undecided.
inline int exit_status(SequenceVerdict v) {
    switch (v) {
    case SequenceVerdict::Exceptional: return 0;
    case SequenceVerdict::ExceptionalByExistence: return 2;
    case SequenceVerdict::NotExceptional: return 1;
    default: return 3;
    }
}

} // namespace schur
