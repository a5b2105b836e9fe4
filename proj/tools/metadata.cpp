#include "metadata.hpp"

#include <cstdio>
#include <fstream>

#include "fop/error.hpp"
#include "fop/random.hpp"

namespace fop::cli {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t RunMetadata::config_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::ordered_json RunMetadata::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["command_line"] = command_line;
  j["seed"] = seed;
  j["rng"] = std::string(Rng::algorithm);
  j["model_hash"] = model_hash ? nlohmann::ordered_json(hex64(*model_hash)) : nlohmann::ordered_json(nullptr);
  j["config_digest"] = hex64(config_digest());
  j["config"] = config;
  j["wall_seconds"] = wall_seconds;
  return j;
}

void RunMetadata::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "metadata.json");
  if (!out) throw_data("cannot write " + (dir / "metadata.json").string());
  out << to_json().dump(2) << '\n';
}

}  // namespace fop::cli
