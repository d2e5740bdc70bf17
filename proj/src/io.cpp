#include "cmcircuits/io.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmcircuits/errors.hpp"

namespace cmc {

using nlohmann::json;

namespace {

json graph_json(const Graph& g) {
  json j;
  j["vertices"] = g.vertices();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j;
}

Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("edges"))
    throw precondition_error("graph JSON needs an \"edges\" array");
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw precondition_error("edge entries must be pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  if (j.contains("vertices")) {
    std::vector<int> vs = j["vertices"].get<std::vector<int>>();
    return Graph::from_edges(std::move(edges), std::move(vs));
  }
  return Graph::from_edges(std::move(edges));
}

}  // namespace

Graph parse_graph_text(const std::string& text) {
  // detect JSON
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return graph_from_json_text(text);
    break;
  }
  std::vector<std::pair<int, int>> pairs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int u, v;
    if (ls >> u >> v) pairs.emplace_back(u, v);
    else {
      std::string leftover;
      ls.clear();
      if (ls >> leftover) throw precondition_error("malformed graph line: " + line);
    }
  }
  return Graph::from_pairs(pairs);
}

Graph read_graph_file(const std::string& path) { return parse_graph_text(read_text_file(path)); }

std::string graph_to_json(const Graph& g) { return graph_json(g).dump(); }

Graph graph_from_json_text(const std::string& text) {
  return graph_from_json(json::parse(text));
}

namespace {

json tree_json(const TreePtr& t) {
  if (!t) throw precondition_error("empty tree");
  if (t->is_leaf()) {
    json j;
    j["leaf"] = graph_json(t->graph);
    j["generator_class"] = canonical_label(t->graph);
    return j;
  }
  json j;
  j["graph"] = graph_json(t->graph);
  j["elim"] = {t->elim->u, t->elim->v};
  j["left"] = tree_json(t->left);
  j["right"] = tree_json(t->right);
  return j;
}

TreePtr tree_from_json(const json& j) {
  if (j.contains("leaf")) return make_leaf(graph_from_json(j["leaf"]));
  if (!j.contains("graph") || !j.contains("elim") || !j.contains("left") || !j.contains("right"))
    throw precondition_error("tree JSON node needs graph/elim/left/right");
  Edge elim(j["elim"][0].get<int>(), j["elim"][1].get<int>());
  return make_node(graph_from_json(j["graph"]), tree_from_json(j["left"]),
                   tree_from_json(j["right"]), elim);
}

}  // namespace

std::string tree_to_json(const TreePtr& t) { return tree_json(t).dump(2); }

TreePtr tree_from_json_text(const std::string& text) { return tree_from_json(json::parse(text)); }

std::map<Edge, Rat> parse_weights_text(const std::string& text) {
  std::map<Edge, Rat> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int u, v;
    std::string value;
    if (ls >> u >> v >> value) {
      Rat w;
      if (mpq_set_str(w.get_mpq_t(), value.c_str(), 10) != 0)
        throw precondition_error("bad rational weight: " + value);
      w.canonicalize();
      out[Edge(u, v)] = w;
    } else {
      std::string leftover;
      ls.clear();
      if (ls >> leftover) throw precondition_error("malformed weights line: " + line);
    }
  }
  return out;
}

std::map<Edge, Rat> read_weights_file(const std::string& path) {
  return parse_weights_text(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw precondition_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw precondition_error("cannot write file: " + path);
  out << content;
}

std::string gzip_compress(const std::string& data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw std::runtime_error("deflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int ret;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    ret = deflate(&zs, Z_FINISH);
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (ret == Z_OK);
  deflateEnd(&zs);
  if (ret != Z_STREAM_END) throw std::runtime_error("gzip compression failed");
  return out;
}

std::string gzip_decompress(const std::string& data) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) throw std::runtime_error("inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int ret;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw checksum_error("corrupted compressed payload");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (ret != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

static const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::string& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 2 < data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8) |
                 static_cast<unsigned char>(data[i + 2]);
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += kB64[v & 63];
    i += 3;
  }
  if (i + 1 == data.size()) {
    unsigned v = static_cast<unsigned char>(data[i]) << 16;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8);
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string base64_decode(const std::string& data) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  int buf = 0, bits = 0;
  for (char c : data) {
    if (c == '=' || std::isspace(static_cast<unsigned char>(c))) continue;
    int v = val(c);
    if (v < 0) throw checksum_error("invalid base64 payload");
    buf = (buf << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((buf >> bits) & 0xff);
    }
  }
  return out;
}

unsigned long crc32_of(const std::string& data) {
  return crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
}

}  // namespace cmc
