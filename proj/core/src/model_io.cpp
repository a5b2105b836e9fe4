#include "fop/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fop/error.hpp"

namespace fop {

namespace {

constexpr const char* kMagic = "fop-model";
constexpr const char* kVersion = "v1";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* mode_name(PatternMode mode) { return mode == PatternMode::invariant ? "invariant" : "raw"; }

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string token;
    if (!(in_ >> token)) throw_data(std::string("model file truncated: expected ") + what);
    return token;
  }

  void expect(const std::string& literal) {
    const std::string token = next(literal.c_str());
    if (token != literal) throw_data("model file: expected '" + literal + "', found '" + token + "'");
  }

  std::int64_t integer(const char* what) {
    const std::string token = next(what);
    std::int64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      throw_data(std::string("model file: bad integer for ") + what + ": '" + token + "'");
    }
    return v;
  }

  double real(const char* what) {
    const std::string token = next(what);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw_data(std::string("model file: bad value for ") + what + ": '" + token + "'");
    }
    return v;
  }

  bool at_end() {
    std::string token;
    return !(in_ >> token);
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const FopModel& model, std::optional<std::int64_t> step) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "K " << model.scales() << '\n';
  out << "M " << model.levels() << '\n';
  out << "mode " << mode_name(model.mode()) << '\n';
  out << "lambda " << format_double(model.lambda()) << '\n';
  if (step) out << "step " << *step << '\n';
  for (int k = 0; k < model.scales(); ++k) {
    out << "V " << k << '\n';
    for (const double v : model.potentials(k)) out << format_double(v) << '\n';
    out << "D " << k << '\n';
    for (const double v : model.data_costs(k)) out << format_double(v) << '\n';
  }
  if (!out) throw_data("model file: write failed");
}

void save_model(const std::filesystem::path& path, const FopModel& model, std::optional<std::int64_t> step) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot create " + path.string());
  write_model(out, model, step);
}

ModelFile read_model(std::istream& in, std::optional<PatternMode> expected_mode) {
  TokenReader reader(in);
  reader.expect(kMagic);
  const std::string version = reader.next("version");
  if (version != kVersion) throw_data("model file: unsupported version '" + version + "'");

  ModelLayout layout;
  bool have_k = false, have_m = false, have_mode = false;
  double lambda = 0.0;
  std::optional<std::int64_t> step;
  std::string key = reader.next("header field");
  while (key != "V") {
    if (key == "K") {
      const auto k = reader.integer("K");
      if (k < 1 || k > 64) throw_data("model file: K out of range");
      layout.scales = static_cast<int>(k);
      have_k = true;
    } else if (key == "M") {
      const auto m = reader.integer("M");
      if (m < 1 || m > 65536) throw_data("model file: M out of range");
      layout.levels = static_cast<int>(m);
      have_m = true;
    } else if (key == "mode") {
      const std::string mode = reader.next("mode");
      if (mode == "invariant") {
        layout.mode = PatternMode::invariant;
      } else if (mode == "raw") {
        layout.mode = PatternMode::raw;
      } else {
        throw_data("model file: unknown mode '" + mode + "'");
      }
      have_mode = true;
    } else if (key == "lambda") {
      lambda = reader.real("lambda");
    } else if (key == "step") {
      step = reader.integer("step");
    } else {
      throw_data("model file: unknown header field '" + key + "'");
    }
    key = reader.next("header field or 'V 0'");
  }
  if (!have_k || !have_m || !have_mode) throw_data("model file: header requires K, M and mode");
  if (expected_mode && *expected_mode != layout.mode) {
    throw_data(std::string("model file is in ") + mode_name(layout.mode) + " mode, expected " +
               mode_name(*expected_mode));
  }

  FopModel model(layout);
  model.set_lambda(lambda);
  for (int k = 0; k < layout.scales; ++k) {
    if (k > 0) reader.expect("V");
    if (reader.integer("scale index") != k) throw_data("model file: scales out of order");
    for (double& v : model.potentials(k)) v = reader.real("potential");
    reader.expect("D");
    if (reader.integer("scale index") != k) throw_data("model file: scales out of order");
    for (double& v : model.data_costs(k)) v = reader.real("data cost");
  }
  if (!reader.at_end()) throw_data("model file: trailing data after last scale");
  return {std::move(model), step};
}

ModelFile load_model_file(const std::filesystem::path& path, std::optional<PatternMode> expected_mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path.string());
  return read_model(in, expected_mode);
}

FopModel load_model(const std::filesystem::path& path, std::optional<PatternMode> expected_mode) {
  return load_model_file(path, expected_mode).model;
}

std::uint64_t model_hash(const FopModel& model) {
  std::ostringstream out;
  write_model(out, model);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : out.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fop
