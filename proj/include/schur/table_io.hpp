/**
 * @file table_io.hpp
 * @brief Plain-text exchange format for cocycle tables and 1-cochain lists.
 *
 * Table grid: the first line is "alpha" followed by the element labels in
 * canonical order; each following line is a row label and its entries.
 * Entries are 1, -1, i, -i or w{k}/{n}. Columns are right-aligned to a
 * common width, so writing a parsed table reproduces the file byte for byte.
 *
 * Cochain list: one "label value" pair per line. Blank lines and lines
 * starting with '#' are skipped.
 */
#pragma once

#include "cocycle.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace schur {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline unsigned rank_for_size(std::size_t n, const std::string& where) {
    for (unsigned r = 0; r <= max_rank; ++r)
        if ((std::size_t{1} << r) == n) return r;
    throw std::invalid_argument(where + ": table width " + std::to_string(n) + " is not a power of two up to 2^8");
}

inline TwoCochain parse_table(const std::string& text, const std::string& source = "table") {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_no;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        rows.push_back(std::move(toks));
        line_no.push_back(no);
    }
    if (rows.empty()) throw std::invalid_argument(source + ": empty table");
    const auto& head = rows[0];
    if (head[0] != "alpha") throw std::invalid_argument(source + ": header must start with 'alpha'");
    std::size_t n = head.size() - 1;
    GroupSpec g(rank_for_size(n, source));
    for (std::uint32_t k = 0; k < n; ++k)
        if (head[k + 1] != bits_to_string(k))
            throw std::invalid_argument(source + ": header label " + std::to_string(k + 1) + " is '" + head[k + 1] + "', expected '" + bits_to_string(k) + "'");
    if (rows.size() != n + 1)
        throw std::invalid_argument(source + ": expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size() - 1));

    std::vector<std::vector<RootOfUnity>> vals(n);
    std::uint32_t order = 1;
    for (std::uint32_t r = 0; r < n; ++r) {
        const auto& row = rows[r + 1];
        std::string where = source + ":" + std::to_string(line_no[r + 1]);
        if (row[0] != bits_to_string(r)) throw std::invalid_argument(where + ": row label '" + row[0] + "', expected '" + bits_to_string(r) + "'");
        if (row.size() != n + 1) throw std::invalid_argument(where + ": expected " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) {
            try {
                vals[r].push_back(parse_root(row[c + 1]).reduced());
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(where + ": " + e.what());
            }
            order = lcm_order(order, vals[r].back().order);
        }
    }
    TwoCochain out(g, order);
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) out.set(r, c, vals[r][c]);
    return out;
}

inline std::string format_table(const TwoCochain& a) {
    const auto n = static_cast<std::uint32_t>(a.size());
    std::size_t w = 5;
    for (std::uint32_t k = 0; k < n; ++k) w = std::max(w, bits_to_string(k).size());
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) w = std::max(w, to_string(a.at(r, c)).size());
    auto left = [w](const std::string& s) { return s + std::string(w - s.size(), ' '); };
    auto right = [w](const std::string& s) { return std::string(w - s.size(), ' ') + s; };
    std::string out = left("alpha");
    for (std::uint32_t k = 0; k < n; ++k) out += " " + right(bits_to_string(k));
    out += "\n";
    for (std::uint32_t r = 0; r < n; ++r) {
        out += left(bits_to_string(r));
        for (std::uint32_t c = 0; c < n; ++c) out += " " + right(to_string(a.at(r, c)));
        out += "\n";
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline TwoCochain load_table(const std::string& path) { return parse_table(read_file(path), path); }

/// Parses a cochain list. The group rank is taken from the number of entries.
inline OneCochain parse_cochain_list(const std::string& text, const std::string& source = "cochain") {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::string, RootOfUnity>> entries;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 2) throw std::invalid_argument(source + ":" + std::to_string(no) + ": expected 'label value'");
        try {
            entries.emplace_back(toks[0], parse_root(toks[1]).reduced());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(source + ":" + std::to_string(no) + ": " + e.what());
        }
    }
    GroupSpec g(rank_for_size(entries.size(), source));
    std::uint32_t order = 1;
    for (const auto& e : entries) order = lcm_order(order, e.second.order);
    OneCochain t(g, order);
    std::vector<bool> seen(g.order(), false);
    for (const auto& [label, z] : entries) {
        std::uint32_t bits = parse_bits(g, label);
        if (seen[bits]) throw std::invalid_argument(source + ": label '" + label + "' appears twice");
        seen[bits] = true;
        t.set(bits, z);
    }
    return t;
}

inline OneCochain load_cochain_list(const std::string& path) { return parse_cochain_list(read_file(path), path); }

inline std::string format_cochain_list(const OneCochain& t) {
    std::string out;
    for (std::uint32_t g = 0; g < t.group().order(); ++g) out += bits_to_string(g) + " " + to_string(t.at(g)) + "\n";
    return out;
}

} // namespace schur
