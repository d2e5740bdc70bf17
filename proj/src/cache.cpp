#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/io.hpp"
#include "cmcircuits/pipeline.hpp"

namespace cmc {

using nlohmann::json;

PolyCache::PolyCache(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string PolyCache::entry_path(const std::string& label) const {
  // FNV-1a of the label keeps file names short and safe
  std::uint64_t h = 1469598103934665603ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream name;
  name << std::hex << h;
  return dir_ + "/" + name.str() + ".json";
}

std::optional<Poly> PolyCache::load(const std::string& label) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string path = entry_path(label);
  if (!std::filesystem::exists(path)) return std::nullopt;
  json j = json::parse(read_text_file(path));
  if (j.value("label", "") != label) return std::nullopt;  // hash collision
  std::string gz = base64_decode(j.at("poly_gz_b64").get<std::string>());
  std::string text = gzip_decompress(gz);
  if (crc32_of(text) != j.at("crc32").get<unsigned long>())
    throw checksum_error("cache entry failed its checksum: " + path);
  return parse_poly(text);
}

void PolyCache::store(const std::string& label, const Poly& poly,
                      const std::string& provenance) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string text = to_string(poly);
  json j;
  j["label"] = label;
  j["crc32"] = crc32_of(text);
  j["poly_gz_b64"] = base64_encode(gzip_compress(text));
  PolyMetrics m = poly_metrics(poly);
  j["metrics"] = {{"total_degree", m.total_degree},
                  {"term_count", m.term_count},
                  {"homogeneous", m.homogeneous}};
  try {
    j["provenance"] = json::parse(provenance);
  } catch (...) {
    j["provenance"] = provenance;
  }
  write_text_file(entry_path(label), j.dump(2));
}

}  // namespace cmc
