#pragma once

#include <string>
#include <string_view>

#include "camboost/dag.hpp"
#include "camboost/dataset.hpp"
#include "camboost/ordering.hpp"

namespace camboost {

// Shortest round-trip decimal form of a double ("nan" for NaN).
std::string format_double(double v);
double parse_double(std::string_view s);  // throws on trailing garbage

// Comma-separated samples with a header row of column names (x1..xp).
// Values survive a write/read cycle bit-exactly.
std::string csv_string(const Dataset& data);
void write_csv(const Dataset& data, const std::string& path);
Dataset read_csv(const std::string& path);
Dataset parse_csv(std::string_view text);

// Edge-list text: a "# p=<n>" header line, then one "j k" pair per line
// (1-based, source first), sorted.
std::string edge_list_string(const Dag& g);
void write_edge_list(const Dag& g, const std::string& path);
Dag read_edge_list(const std::string& path);
Dag parse_edge_list(std::string_view text);

// Adjacency JSON: {"p": <n>, "edges": [[j, k], ...]} with 1-based nodes.
std::string adjacency_json_string(const Dag& g);
void write_adjacency_json(const Dag& g, const std::string& path);
Dag read_adjacency_json(const std::string& path);
Dag parse_adjacency_json(std::string_view text);

// One line of 1-based variable indices in causal order.
std::string ordering_string(const Permutation& pi);
void write_ordering(const Permutation& pi, const std::string& path);
Permutation read_ordering(const std::string& path);
Permutation parse_ordering(std::string_view text);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace camboost
