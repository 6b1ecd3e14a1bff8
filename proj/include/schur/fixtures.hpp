/**
 * @file fixtures.hpp
 * @brief Loading and auditing the shipped cocycle tables and witness lists.
 *
 * The fixture directory holds a manifest.json naming each table file, the
 * product identities between tables, and which table each witness list
 * should reproduce under delta.
 */
#pragma once

#include "table_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace schur {

struct ProductIdentity {
    std::string target;
    std::vector<std::string> factors;   // a leading '~' means the inverse table
};

struct WitnessEntry {
    std::string name;
    std::string target;
    OneCochain t;
};

struct FixtureSet {
    std::filesystem::path root;
    std::vector<std::string> names;   // manifest order
    std::map<std::string, TwoCochain> tables;
    std::map<std::string, std::string> captions;
    std::map<std::string, std::string> files;
    std::vector<ProductIdentity> products;
    std::vector<WitnessEntry> witnesses;

    const TwoCochain& table(const std::string& name) const {
        auto it = tables.find(name);
        if (it == tables.end()) throw std::invalid_argument("unknown fixture table '" + name + "'");
        return it->second;
    }
};

inline FixtureSet load_fixtures(const std::filesystem::path& root) {
    auto manifest_path = root / "manifest.json";
    if (!std::filesystem::exists(manifest_path)) throw std::runtime_error("fixture manifest not found: " + manifest_path.string());
    nlohmann::ordered_json m = nlohmann::ordered_json::parse(read_file(manifest_path.string()));
    FixtureSet fs;
    fs.root = root;
    for (auto& [name, entry] : m.at("tables").items()) {
        std::string file = entry.at("file").get<std::string>();
        fs.names.push_back(name);
        fs.files[name] = file;
        fs.captions[name] = entry.value("caption", "");
        fs.tables[name] = load_table((root / file).string());
    }
    for (const auto& p : m.value("products", nlohmann::ordered_json::array()))
        fs.products.push_back({p.at("target").get<std::string>(), p.at("factors").get<std::vector<std::string>>()});
    for (const auto& w : m.value("witnesses", nlohmann::ordered_json::array())) {
        std::string file = w.at("file").get<std::string>();
        auto stem = std::filesystem::path(file).stem().string();
        fs.witnesses.push_back({stem, w.at("target").get<std::string>(), load_cochain_list((root / file).string())});
    }
    return fs;
}

/// One audited assertion about the fixture set.
struct FixtureCheck {
    std::string kind;     // "cocycle", "product" or "witness"
    std::string subject;
    bool pass = false;
    std::string detail;
};

inline std::string describe_cells(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& cells, std::size_t limit = 8) {
    std::string s;
    for (std::size_t i = 0; i < cells.size() && i < limit; ++i) {
        if (i) s += ", ";
        s += "(" + bits_to_string(cells[i].first) + ", " + bits_to_string(cells[i].second) + ")";
    }
    if (cells.size() > limit) s += ", ...";
    return s;
}

inline TwoCochain evaluate_product(const FixtureSet& fs, const std::vector<std::string>& factors) {
    if (factors.empty()) throw std::invalid_argument("empty product");
    TwoCochain acc;
    bool first = true;
    for (const auto& f : factors) {
        bool inv = !f.empty() && f[0] == '~';
        TwoCochain t = fs.table(inv ? f.substr(1) : f);
        if (inv) t = inverse(t);
        acc = first ? t : multiply(acc, t);
        first = false;
    }
    return acc;
}

inline std::string product_label(const ProductIdentity& p) {
    std::string s = p.target + " = ";
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
        if (i) s += " * ";
        const auto& f = p.factors[i];
        s += (!f.empty() && f[0] == '~') ? "inverse(" + f.substr(1) + ")" : f;
    }
    return s;
}

inline std::vector<FixtureCheck> check_cocycles(const FixtureSet& fs) {
    std::vector<FixtureCheck> out;
    for (const auto& name : fs.names) {
        const auto& t = fs.table(name);
        FixtureCheck c{"cocycle", name, false, ""};
        if (!t.normalized()) {
            c.detail = "table is not normalized";
        } else if (auto v = cocycle_violation(t)) {
            c.detail = "identity fails at (" + bits_to_string((*v)[0]) + ", " + bits_to_string((*v)[1]) + ", " + bits_to_string((*v)[2]) + ")";
        } else {
            c.pass = true;
            c.detail = std::to_string(t.size() * t.size() * t.size()) + " triples";
        }
        out.push_back(c);
    }
    return out;
}

inline std::vector<FixtureCheck> check_products(const FixtureSet& fs) {
    std::vector<FixtureCheck> out;
    for (const auto& p : fs.products) {
        auto prod = evaluate_product(fs, p.factors);
        auto cells = differing_cells(prod, fs.table(p.target));
        FixtureCheck c{"product", product_label(p), cells.empty(), ""};
        c.detail = cells.empty() ? "entrywise equal" : std::to_string(cells.size()) + " cells differ: " + describe_cells(cells);
        out.push_back(c);
    }
    return out;
}

inline std::vector<FixtureCheck> check_witnesses(const FixtureSet& fs) {
    std::vector<FixtureCheck> out;
    for (const auto& w : fs.witnesses) {
        auto cells = differing_cells(delta(w.t), fs.table(w.target));
        FixtureCheck c{"witness", "delta(" + w.name + ") = " + w.target, cells.empty(), ""};
        c.detail = cells.empty() ? "bit-exact" : std::to_string(cells.size()) + " cells differ: " + describe_cells(cells);
        out.push_back(c);
    }
    return out;
}

inline std::vector<FixtureCheck> check_all(const FixtureSet& fs) {
    auto out = check_cocycles(fs);
    for (auto& c : check_products(fs)) out.push_back(c);
    for (auto& c : check_witnesses(fs)) out.push_back(c);
    return out;
}

} // namespace schur
