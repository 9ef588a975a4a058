#include "camboost/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace camboost {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("parse_double: invalid number '" + std::string(s) + "'");
    }
    return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string csv_string(const Dataset& data) {
    std::ostringstream os;
    const auto& names = data.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (j) os << ',';
        os << names[j];
    }
    os << '\n';
    for (int i = 0; i < data.rows(); ++i) {
        for (int j = 0; j < data.cols(); ++j) {
            if (j) os << ',';
            os << format_double(data.values()(i, j));
        }
        os << '\n';
    }
    return os.str();
}

void write_csv(const Dataset& data, const std::string& path) {
    write_text_file(path, csv_string(data));
}

Dataset parse_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw std::invalid_argument("parse_csv: empty input");
    std::vector<std::string> names;
    for (auto cell : split(strip(lines[0]), ',')) names.emplace_back(strip(cell));
    const int p = static_cast<int>(names.size());
    std::vector<double> values;
    int rows = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = strip(lines[i]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != p) {
            throw std::invalid_argument("parse_csv: row " + std::to_string(i) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(p));
        }
        for (auto cell : cells) values.push_back(parse_double(strip(cell)));
        ++rows;
    }
    Matrix m(rows, p);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < p; ++j) m(i, j) = values[static_cast<std::size_t>(i) * p + j];
    }
    return Dataset(std::move(m), std::move(names));
}

Dataset read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::string edge_list_string(const Dag& g) {
    std::ostringstream os;
    os << "# p=" << g.node_count() << '\n';
    for (const auto& [j, k] : g.edges()) os << j + 1 << ' ' << k + 1 << '\n';
    return os.str();
}

void write_edge_list(const Dag& g, const std::string& path) {
    write_text_file(path, edge_list_string(g));
}

Dag parse_edge_list(std::string_view text) {
    int p = -1;
    std::vector<Dag::Edge> edges;
    int max_node = 0;
    for (auto raw : lines_of(text)) {
        const auto line = strip(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto pos = line.find("p=");
            if (pos != std::string_view::npos) {
                const auto tail = strip(line.substr(pos + 2));
                p = static_cast<int>(parse_double(tail));
            }
            continue;
        }
        std::istringstream is{std::string(line)};
        int j = 0, k = 0;
        if (!(is >> j >> k)) {
            throw std::invalid_argument("parse_edge_list: bad line '" + std::string(line) + "'");
        }
        if (j < 1 || k < 1) throw std::invalid_argument("parse_edge_list: nodes are 1-based");
        edges.push_back({j - 1, k - 1});
        max_node = std::max({max_node, j, k});
    }
    if (p < 0) p = max_node;
    return Dag::from_edges(p, edges);
}

Dag read_edge_list(const std::string& path) { return parse_edge_list(read_text_file(path)); }

std::string adjacency_json_string(const Dag& g) {
    nlohmann::json j;
    j["p"] = g.node_count();
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) j["edges"].push_back({a + 1, b + 1});
    return j.dump() + "\n";
}

void write_adjacency_json(const Dag& g, const std::string& path) {
    write_text_file(path, adjacency_json_string(g));
}

Dag parse_adjacency_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("p") || !j.contains("edges")) {
        throw std::invalid_argument("parse_adjacency_json: need fields 'p' and 'edges'");
    }
    std::vector<Dag::Edge> edges;
    for (const auto& e : j.at("edges")) {
        edges.push_back({e.at(0).get<int>() - 1, e.at(1).get<int>() - 1});
    }
    return Dag::from_edges(j.at("p").get<int>(), edges);
}

Dag read_adjacency_json(const std::string& path) {
    return parse_adjacency_json(read_text_file(path));
}

std::string ordering_string(const Permutation& pi) {
    std::ostringstream os;
    for (int i = 0; i < pi.size(); ++i) {
        if (i) os << ' ';
        os << pi.at(i) + 1;
    }
    os << '\n';
    return os.str();
}

void write_ordering(const Permutation& pi, const std::string& path) {
    write_text_file(path, ordering_string(pi));
}

Permutation parse_ordering(std::string_view text) {
    std::istringstream is{std::string(strip(text))};
    std::vector<int> seq;
    int v = 0;
    while (is >> v) seq.push_back(v - 1);
    if (!is.eof()) throw std::invalid_argument("parse_ordering: non-numeric token");
    return Permutation(std::move(seq));
}

Permutation read_ordering(const std::string& path) { return parse_ordering(read_text_file(path)); }

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_text_file: cannot open " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write_text_file: write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_text_file: cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace camboost
