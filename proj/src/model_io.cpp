#include "symred/model_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "symred/groups.hpp"

namespace symred {

namespace {

constexpr const char* kMagic = "symred-model";

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

std::string encode_le(const Vector& params) {
  std::string out(static_cast<std::size_t>(params.size()) * 8, '\0');
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    std::uint64_t bits;
    const double v = params[i];
    std::memcpy(&bits, &v, 8);
    for (int b = 0; b < 8; ++b)
      out[static_cast<std::size_t>(i) * 8 + static_cast<std::size_t>(b)] =
          static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  return out;
}

Vector decode_le(const std::string& bytes) {
  Vector params(static_cast<Eigen::Index>(bytes.size() / 8));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(
                  static_cast<unsigned char>(bytes[static_cast<std::size_t>(i) * 8 + static_cast<std::size_t>(b)]))
              << (8 * b);
    double v;
    std::memcpy(&v, &bits, 8);
    params[i] = v;
  }
  return params;
}

}  // namespace

void save_model(const std::string& path, const DynamicsModel& model, std::uint64_t train_seed) {
  const auto mlp = std::dynamic_pointer_cast<Mlp>(model.regressor_ptr());
  if (!mlp) throw std::invalid_argument("save_model: only Mlp regressors can be saved");
  const MlpSpec& spec = mlp->spec();
  const bool symmetric = dynamic_cast<const SymmetryReducedModel*>(&model) != nullptr;
  const std::string payload = encode_le(mlp->parameters());

  nlohmann::ordered_json h;
  h["format"] = kMagic;
  h["format_version"] = kModelFormatVersion;
  h["kind"] = symmetric ? "symmetry" : "baseline";
  h["group_id"] = model.group_id();
  h["mode"] = to_string(model.mode());
  h["n"] = model.state_dim();
  h["n_u"] = model.control_dim();
  h["spec"] = {{"input_dim", spec.input_dim},
               {"output_dim", spec.output_dim},
               {"hidden", spec.hidden},
               {"activation", to_string(spec.activation)},
               {"seed", spec.seed}};
  h["seeds"] = {{"init", spec.seed}, {"train", train_seed}};
  h["param_count"] = mlp->parameters().size();
  h["checksum"] = hex64(fnv1a(payload));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFormatError("cannot open '" + path + "' for writing");
  out << h.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ModelFormatError("write failed for '" + path + "'");
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model '" + path + "'");
  std::string header_line;
  if (!std::getline(in, header_line)) throw ModelFormatError(path + ": missing header");

  ModelFile file;
  std::size_t param_count = 0;
  std::string checksum;
  try {
    const auto h = nlohmann::json::parse(header_line);
    if (h.at("format").get<std::string>() != kMagic)
      throw ModelFormatError(path + ": not a symred model file");
    file.header.format_version = h.at("format_version").get<int>();
    if (file.header.format_version != kModelFormatVersion) {
      throw ModelFormatError(path + ": unsupported format_version " +
                             std::to_string(file.header.format_version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
    }
    file.header.kind = h.at("kind").get<std::string>();
    file.header.group_id = h.at("group_id").get<std::string>();
    file.header.mode = parse_mode(h.at("mode").get<std::string>());
    file.header.n = h.at("n").get<std::size_t>();
    file.header.n_u = h.at("n_u").get<std::size_t>();
    const auto& s = h.at("spec");
    file.header.spec.input_dim = s.at("input_dim").get<std::size_t>();
    file.header.spec.output_dim = s.at("output_dim").get<std::size_t>();
    file.header.spec.hidden = s.at("hidden").get<std::vector<std::size_t>>();
    file.header.spec.activation = parse_activation(s.at("activation").get<std::string>());
    file.header.spec.seed = s.at("seed").get<std::uint64_t>();
    file.header.train_seed = h.at("seeds").at("train").get<std::uint64_t>();
    param_count = h.at("param_count").get<std::size_t>();
    checksum = h.at("checksum").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(path + ": malformed header: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(path + ": malformed header: " + e.what());
  }
  if (file.header.kind != "symmetry" && file.header.kind != "baseline")
    throw ModelFormatError(path + ": unknown model kind '" + file.header.kind + "'");

  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (payload.size() != param_count * 8) {
    throw ModelFormatError(path + ": parameter block holds " + std::to_string(payload.size()) +
                           " bytes, header declares " + std::to_string(param_count) + " doubles");
  }
  if (hex64(fnv1a(payload)) != checksum) throw ModelFormatError(path + ": checksum mismatch");
  try {
    file.mlp = std::make_shared<Mlp>(file.header.spec, decode_le(payload));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
  return file;
}

std::unique_ptr<DynamicsModel> load_model(const std::string& path,
                                          const std::optional<std::string>& expected_group_id) {
  ModelFile file = read_model_file(path);
  if (expected_group_id && *expected_group_id != file.header.group_id) {
    throw ModelFormatError(path + ": model was trained for group '" + file.header.group_id +
                           "', expected '" + *expected_group_id + "'");
  }
  try {
    if (file.header.kind == "baseline") {
      return std::make_unique<BaselineModel>(file.header.n, file.header.n_u, file.mlp,
                                             file.header.mode);
    }
    auto group = make_group(file.header.group_id);
    if (group->state_dim() != file.header.n || group->control_dim() != file.header.n_u)
      throw ModelFormatError(path + ": header dims disagree with group '" + group->id() + "'");
    return std::make_unique<SymmetryReducedModel>(std::move(group), file.mlp, file.header.mode);
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

}  // namespace symred
