#include "metaex/nn/checkpoint.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace metaex::nn {

using nlohmann::json;

namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t GetU32(const std::string& in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  }
  return v;
}

void PutF64(std::string& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
}

double GetF64(const std::string& in, std::size_t pos) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i]))
            << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

json LossJson(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double LossFromJson(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

}  // namespace

std::string SerializeCheckpoint(const ModelCheckpoint& ckpt) {
  json header;
  header["architecture"] = ckpt.architecture;
  header["seed"] = ckpt.seed;
  header["config"] = {
      {"iterations", ckpt.config.iterations},
      {"batch_size_tokens", ckpt.config.batch_size_tokens},
      {"learning_rate", ckpt.config.learning_rate},
      {"optimizer", std::string(OptimizerName(ckpt.config.optimizer))},
      {"seed", ckpt.config.seed},
      {"clip_norm", ckpt.config.clip_norm},
  };
  header["metadata"] = ckpt.metadata;
  json history = json::array();
  for (const StepMetrics& m : ckpt.history) {
    history.push_back({m.step, LossJson(m.train_loss), LossJson(m.val_loss)});
  }
  header["history"] = std::move(history);
  json shapes = json::array();
  for (const NamedTensor& t : ckpt.tensors) {
    shapes.push_back(
        {{"name", t.name}, {"rows", t.value.rows()}, {"cols", t.value.cols()}});
  }
  header["tensors"] = std::move(shapes);
  const std::string text = header.dump();

  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutU32(out, kCheckpointVersion);
  PutU32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (const NamedTensor& t : ckpt.tensors) {
    for (const double v : t.value.values()) PutF64(out, v);
  }
  return out;
}

ModelCheckpoint DeserializeCheckpoint(const std::string& bytes) {
  if (bytes.size() < 16 ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) !=
          0) {
    throw ValidationError("not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = GetU32(bytes, 8);
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  const std::uint32_t header_len = GetU32(bytes, 12);
  if (bytes.size() < 16 + static_cast<std::size_t>(header_len)) {
    throw ValidationError("truncated checkpoint header");
  }
  ModelCheckpoint ckpt;
  std::size_t pos = 16 + header_len;
  try {
    const json header = json::parse(bytes.substr(16, header_len));
    ckpt.architecture = header.at("architecture").get<std::string>();
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    const json& c = header.at("config");
    ckpt.config.iterations = c.at("iterations").get<int>();
    ckpt.config.batch_size_tokens = c.at("batch_size_tokens").get<int>();
    ckpt.config.learning_rate = c.at("learning_rate").get<double>();
    ckpt.config.optimizer =
        ParseOptimizer(c.at("optimizer").get<std::string>());
    ckpt.config.seed = c.at("seed").get<std::uint64_t>();
    ckpt.config.clip_norm = c.at("clip_norm").get<double>();
    ckpt.metadata =
        header.at("metadata").get<std::map<std::string, std::string>>();
    for (const json& h : header.at("history")) {
      ckpt.history.push_back(
          {h.at(0).get<int>(), LossFromJson(h.at(1)), LossFromJson(h.at(2))});
    }
    for (const json& t : header.at("tensors")) {
      NamedTensor nt;
      nt.name = t.at("name").get<std::string>();
      const auto rows = t.at("rows").get<std::size_t>();
      const auto cols = t.at("cols").get<std::size_t>();
      if (bytes.size() < pos + 8 * rows * cols) {
        throw ValidationError("truncated payload for tensor '" + nt.name + "'");
      }
      nt.value = Matrix(rows, cols);
      for (double& v : nt.value.values()) {
        v = GetF64(bytes, pos);
        pos += 8;
      }
      ckpt.tensors.push_back(std::move(nt));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad checkpoint header: ") + e.what());
  }
  if (pos != bytes.size()) {
    throw ValidationError("trailing bytes after checkpoint payload");
  }
  return ckpt;
}

void SaveCheckpoint(const ModelCheckpoint& ckpt,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint " + path.string());
  const std::string bytes = SerializeCheckpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("write failed: " + path.string());
}

ModelCheckpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("checkpoint not found: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return DeserializeCheckpoint(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

const Matrix& FindTensor(const ModelCheckpoint& ckpt, const std::string& name) {
  for (const NamedTensor& t : ckpt.tensors) {
    if (t.name == name) return t.value;
  }
  throw ValidationError("checkpoint has no tensor '" + name + "'");
}

}  // namespace metaex::nn
