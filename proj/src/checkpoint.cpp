#include "loggrad/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace loggrad {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; byte swap not implemented");

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json header;
  header["spec"] = json::parse(ckpt.spec.to_json());
  header["seed"] = ckpt.seed;
  header["config"] = ckpt.config_json.empty() ? json(nullptr) : json::parse(ckpt.config_json);
  json shapes = json::array();
  for (const ParamTensor& pt : ckpt.params.layers)
    shapes.push_back({{"w", pt.w.shape}, {"b", pt.b.size()}});
  header["shapes"] = shapes;

  std::string htext = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  uint32_t hlen = static_cast<uint32_t>(htext.size());
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const ParamTensor& pt : ckpt.params.layers) {
    out.write(reinterpret_cast<const char*>(pt.w.data.data()),
              static_cast<std::streamsize>(pt.w.data.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(pt.b.data()),
              static_cast<std::streamsize>(pt.b.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 4);
  std::string htext(hlen, '\0');
  in.read(htext.data(), hlen);
  if (!in) throw std::runtime_error("checkpoint: truncated header in " + path);
  json header = json::parse(htext);

  Checkpoint ckpt;
  ckpt.spec = ModelSpec::from_json(header.at("spec").dump());
  ckpt.seed = header.at("seed");
  ckpt.config_json = header.at("config").is_null() ? "" : header.at("config").dump();

  for (const json& sj : header.at("shapes")) {
    ParamTensor pt;
    pt.w = Tensor(sj.at("w").get<std::vector<size_t>>());
    pt.b.assign(sj.at("b").get<size_t>(), 0.0);
    in.read(reinterpret_cast<char*>(pt.w.data.data()),
            static_cast<std::streamsize>(pt.w.data.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(pt.b.data()),
            static_cast<std::streamsize>(pt.b.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated payload in " + path);
    ckpt.params.layers.push_back(std::move(pt));
  }
  return ckpt;
}

}  // namespace loggrad
