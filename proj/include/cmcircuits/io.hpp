#ifndef CMCIRCUITS_IO_HPP
#define CMCIRCUITS_IO_HPP

#include <map>
#include <string>

#include "cmcircuits/combres.hpp"
#include "cmcircuits/graph.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

// Graph files: either one edge per line ("u v", '#' comments allowed) or a
// JSON object {"vertices": [...], "edges": [[u,v], ...]}.
Graph parse_graph_text(const std::string& text);
Graph read_graph_file(const std::string& path);
std::string graph_to_json(const Graph& g);
Graph graph_from_json_text(const std::string& text);

// Resultant-tree JSON:
//   leaf     {"leaf": <graph>, "generator_class": <canonical label>}
//   internal {"graph": <graph>, "elim": [u,v], "left": ..., "right": ...}
std::string tree_to_json(const TreePtr& t);
TreePtr tree_from_json_text(const std::string& text);

// Weights files: lines "u v value" with exact rationals ("3", "7/2").
std::map<Edge, Rat> parse_weights_text(const std::string& text);
std::map<Edge, Rat> read_weights_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// gzip container helpers for large polynomials
std::string gzip_compress(const std::string& data);
std::string gzip_decompress(const std::string& data);  // throws checksum_error
std::string base64_encode(const std::string& data);
std::string base64_decode(const std::string& data);
unsigned long crc32_of(const std::string& data);

}  // namespace cmc

#endif
