#include "fop/dataset.hpp"

#include <fstream>
#include <sstream>

#include "fop/error.hpp"
#include "fop/netpbm.hpp"

namespace fop {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw_data("cannot open manifest " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string mask, obs, name, extra;
    if (!(fields >> mask >> obs >> name) || (fields >> extra)) {
      throw_data(manifest.string() + ":" + std::to_string(line_no) + ": expected '<mask> <observation> <name>'");
    }
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path path(p);
      return path.is_absolute() ? path : base / path;
    };
    entries.push_back({resolve(mask), resolve(obs), name});
  }
  if (entries.empty()) throw_data("manifest " + manifest.string() + " lists no images");
  return entries;
}

void write_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(manifest);
  if (!out) throw_data("cannot create manifest " + manifest.string());
  for (const auto& e : entries) {
    out << e.mask.generic_string() << ' ' << e.observation.generic_string() << ' ' << e.name << '\n';
  }
}

Dataset load_dataset(const std::filesystem::path& manifest) {
  Dataset ds;
  ds.manifest = manifest;
  for (const auto& e : read_manifest(manifest)) {
    Sample s{read_pbm(e.mask), read_pgm(e.observation), e.name};
    if (s.mask.rows() != s.observation.rows() || s.mask.cols() != s.observation.cols()) {
      throw_data("mask and observation sizes differ for '" + e.name + "'");
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace fop
