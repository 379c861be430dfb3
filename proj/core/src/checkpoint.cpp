#include "tskit/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tskit/error.hpp"
#include "tskit/feature_schema.hpp"

namespace tskit {
namespace {

constexpr const char* kFormat = "tskit-checkpoint-v1";

void put_f32(std::string& out, double value) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(value));
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

double get_f32(const std::string& in, std::size_t offset) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return static_cast<double>(std::bit_cast<float>(bits));
}

std::uint64_t parse_hex(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw Error(ErrorCode::MalformedCheckpoint, "bad fingerprint '" + s + "'");
  return v;
}

}  // namespace

std::string encode_checkpoint(const SageModel& model, const CheckpointMeta& meta) {
  nlohmann::ordered_json header;
  header["format"] = kFormat;
  header["schema_fingerprint"] = to_hex(model.schema_fingerprint);
  header["layer_widths"] = model.layer_widths();
  header["threshold"] = model.threshold;
  header["seed"] = meta.seed;
  header["sampler"] = {{"num_roots", meta.sampler.num_roots},
                       {"walk_length", meta.sampler.walk_length},
                       {"rng_seed", meta.sampler.rng_seed},
                       {"presample_rounds", meta.sampler.presample_rounds}};
  header["config"] = meta.config;
  if (!model.scaler.empty()) {
    header["scaler"] = {{"mean", std::vector<double>(model.scaler.mean.data(), model.scaler.mean.data() + model.scaler.mean.size())},
                        {"inv_std", std::vector<double>(model.scaler.inv_std.data(), model.scaler.inv_std.data() + model.scaler.inv_std.size())}};
  }

  std::string blob;
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for_each_parameter(model, [&](const std::string& name, const auto& tensor) {
    const Eigen::Index rows = tensor.rows();
    const Eigen::Index cols = tensor.cols();
    params.push_back({{"name", name}, {"rows", rows}, {"cols", cols}, {"offset", blob.size()}});
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) put_f32(blob, tensor(r, c));
    }
  });
  header["params"] = std::move(params);
  header["blob_bytes"] = blob.size();
  header["byte_order"] = "little-endian float32, row-major per tensor";
  return header.dump() + "\n" + blob;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string::npos) throw Error(ErrorCode::MalformedCheckpoint, "missing header line");
  Checkpoint ck;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(0, newline));
    if (header.at("format") != kFormat) throw Error(ErrorCode::MalformedCheckpoint, "unknown checkpoint format");
    const std::size_t blob_start = newline + 1;
    if (bytes.size() - blob_start != header.at("blob_bytes").get<std::size_t>()) {
      throw Error(ErrorCode::MalformedCheckpoint, "parameter blob size mismatch");
    }
    const auto widths = header.at("layer_widths").get<std::vector<std::size_t>>();
    if (widths.empty()) throw Error(ErrorCode::MalformedCheckpoint, "empty layer widths");

    SageModel& m = ck.model;
    m.schema_fingerprint = parse_hex(header.at("schema_fingerprint").get<std::string>());
    m.threshold = header.at("threshold").get<double>();
    for (std::size_t i = 1; i < widths.size(); ++i) {
      const auto out = static_cast<Eigen::Index>(widths[i]);
      const auto in = static_cast<Eigen::Index>(widths[i - 1]);
      m.layers.push_back({Matrix::Zero(out, in), Matrix::Zero(out, in)});
    }
    m.head.W = Matrix::Zero(2, static_cast<Eigen::Index>(widths.back()));
    m.head.bias = Vector::Zero(2);

    const auto& params = header.at("params");
    std::size_t index = 0;
    for_each_parameter(m, [&](const std::string& name, auto& tensor) {
      if (index >= params.size()) throw Error(ErrorCode::MalformedCheckpoint, "missing parameter " + name);
      const auto& p = params[index++];
      if (p.at("name") != name || p.at("rows").get<Eigen::Index>() != tensor.rows() ||
          p.at("cols").get<Eigen::Index>() != tensor.cols()) {
        throw Error(ErrorCode::MalformedCheckpoint, "parameter table does not match layer widths at " + name);
      }
      std::size_t offset = blob_start + p.at("offset").get<std::size_t>();
      if (offset + 4 * static_cast<std::size_t>(tensor.size()) > bytes.size()) {
        throw Error(ErrorCode::MalformedCheckpoint, "parameter " + name + " exceeds blob");
      }
      for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
        for (Eigen::Index c = 0; c < tensor.cols(); ++c, offset += 4) tensor(r, c) = get_f32(bytes, offset);
      }
    });
    if (index != params.size()) throw Error(ErrorCode::MalformedCheckpoint, "extra parameters in table");

    if (header.contains("scaler")) {
      const auto mean = header["scaler"].at("mean").get<std::vector<double>>();
      const auto inv = header["scaler"].at("inv_std").get<std::vector<double>>();
      if (mean.size() != widths.front() || inv.size() != widths.front()) {
        throw Error(ErrorCode::MalformedCheckpoint, "scaler width mismatch");
      }
      m.scaler.mean = Eigen::Map<const Eigen::RowVectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      m.scaler.inv_std = Eigen::Map<const Eigen::RowVectorXd>(inv.data(), static_cast<Eigen::Index>(inv.size()));
    }
    ck.meta.seed = header.at("seed").get<std::uint64_t>();
    const auto& s = header.at("sampler");
    ck.meta.sampler.num_roots = s.at("num_roots").get<std::size_t>();
    ck.meta.sampler.walk_length = s.at("walk_length").get<std::size_t>();
    ck.meta.sampler.rng_seed = s.at("rng_seed").get<std::uint64_t>();
    ck.meta.sampler.presample_rounds = s.at("presample_rounds").get<std::size_t>();
    ck.meta.config = header.value("config", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedCheckpoint, e.what());
  }
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const SageModel& model, const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  const std::string bytes = encode_checkpoint(model, meta);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_checkpoint(buf.str());
}

}  // namespace tskit
