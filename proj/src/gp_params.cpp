#include "pregp/gp_params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pregp/error.hpp"

namespace pregp {

namespace {

constexpr int kModelVersion = 1;
constexpr std::string_view kModelFormat = "pregp-model";

struct Block {
  const char* name;
  std::size_t offset;
  std::size_t size;
};

std::vector<Block> blocks(const ParamLayout& l) {
  return {{"feature_weights", l.feature_weights, l.feature_weights_size},
          {"feature_bias", l.feature_bias, l.feature_bias_size},
          {"mean_weights", l.mean_weights, l.mean_weights_size},
          {"mean_offset", l.mean_offset, 1},
          {"log_amplitude", l.log_amplitude, 1},
          {"log_lengthscales", l.log_lengthscales, l.kernel_dim},
          {"log_noise", l.log_noise, 1}};
}

}  // namespace

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::const_matern: return "const-matern";
    case Architecture::mlp_matern: return "mlp8-matern";
  }
  return "const-matern";
}

Architecture parse_architecture(std::string_view token) {
  if (token == "const-matern") return Architecture::const_matern;
  if (token == "mlp8-matern") return Architecture::mlp_matern;
  throw ParseError("unknown architecture '" + std::string(token) + "'");
}

std::string_view to_string(KernelFamily k) {
  switch (k) {
    case KernelFamily::matern32: return "matern32";
  }
  return "matern32";
}

KernelFamily parse_kernel_family(std::string_view token) {
  if (token == "matern32") return KernelFamily::matern32;
  throw ParseError("unknown kernel family '" + std::string(token) + "'");
}

ParamLayout::ParamLayout(Architecture arch, std::size_t d) : input_dim(d) {
  if (d == 0) throw InputError("input dimension must be positive");
  std::size_t at = 0;
  if (arch == Architecture::mlp_matern) {
    kernel_dim = kHiddenWidth;
    feature_weights = at;
    feature_weights_size = kHiddenWidth * d;
    at += feature_weights_size;
    feature_bias = at;
    feature_bias_size = kHiddenWidth;
    at += feature_bias_size;
    mean_weights = at;
    mean_weights_size = kHiddenWidth;
    at += mean_weights_size;
  } else {
    kernel_dim = d;
    feature_weights = feature_bias = mean_weights = at;
  }
  mean_offset = at++;
  log_amplitude = at++;
  log_lengthscales = at;
  at += kernel_dim;
  log_noise = at++;
  size = at;
}

GpParams::GpParams(ModelArchitecture arch, std::size_t input_dim, Eigen::VectorXd flat)
    : arch_(arch), layout_(arch.variant, input_dim), flat_(std::move(flat)) {
  if (static_cast<std::size_t>(flat_.size()) != layout_.size)
    throw InputError("flat parameter vector has " + std::to_string(flat_.size()) + " entries, layout needs " +
                     std::to_string(layout_.size));
  if (!flat_.allFinite()) throw ParameterError("non-finite GP parameter");
}

GpParams GpParams::const_matern(double mean, double amplitude, const Eigen::VectorXd& lengthscales,
                                double noise_variance) {
  if (!(amplitude > 0) || !(noise_variance > 0) || !(lengthscales.array() > 0).all())
    throw ParameterError("amplitude, lengthscales and noise variance must be positive");
  const ModelArchitecture arch{Architecture::const_matern};
  const ParamLayout l(arch.variant, static_cast<std::size_t>(lengthscales.size()));
  Eigen::VectorXd flat(l.size);
  flat(l.mean_offset) = mean;
  flat(l.log_amplitude) = std::log(amplitude);
  flat.segment(l.log_lengthscales, l.kernel_dim) = lengthscales.array().log();
  flat(l.log_noise) = std::log(noise_variance);
  return GpParams(arch, l.input_dim, std::move(flat));
}

GpParams GpParams::mlp_matern(const Eigen::MatrixXd& feature_weights, const Eigen::VectorXd& feature_bias,
                              const Eigen::VectorXd& mean_weights, double mean_offset, double amplitude,
                              const Eigen::VectorXd& lengthscales, double noise_variance) {
  const auto h = static_cast<Eigen::Index>(kHiddenWidth);
  if (feature_weights.rows() != h || feature_bias.size() != h || mean_weights.size() != h || lengthscales.size() != h)
    throw InputError("mlp8-matern blocks must have hidden width 8");
  if (!(amplitude > 0) || !(noise_variance > 0) || !(lengthscales.array() > 0).all())
    throw ParameterError("amplitude, lengthscales and noise variance must be positive");
  const ModelArchitecture arch{Architecture::mlp_matern};
  const ParamLayout l(arch.variant, static_cast<std::size_t>(feature_weights.cols()));
  Eigen::VectorXd flat(l.size);
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < feature_weights.cols(); ++c)
      flat(l.feature_weights + r * feature_weights.cols() + c) = feature_weights(r, c);
  flat.segment(l.feature_bias, h) = feature_bias;
  flat.segment(l.mean_weights, h) = mean_weights;
  flat(l.mean_offset) = mean_offset;
  flat(l.log_amplitude) = std::log(amplitude);
  flat.segment(l.log_lengthscales, h) = lengthscales.array().log();
  flat(l.log_noise) = std::log(noise_variance);
  return GpParams(arch, l.input_dim, std::move(flat));
}

double GpParams::amplitude() const { return std::exp(flat_(layout_.log_amplitude)); }

double GpParams::noise_variance() const { return std::exp(flat_(layout_.log_noise)); }

Eigen::VectorXd GpParams::lengthscales() const {
  return flat_.segment(layout_.log_lengthscales, layout_.kernel_dim).array().exp();
}

Eigen::MatrixXd GpParams::feature_weights() const {
  const auto rows = static_cast<Eigen::Index>(layout_.feature_weights_size == 0 ? 0 : kHiddenWidth);
  const auto cols = static_cast<Eigen::Index>(layout_.feature_weights_size == 0 ? 0 : layout_.input_dim);
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = flat_(layout_.feature_weights + r * cols + c);
  return w;
}

Eigen::VectorXd GpParams::feature_bias() const { return flat_.segment(layout_.feature_bias, layout_.feature_bias_size); }

Eigen::VectorXd GpParams::mean_weights() const { return flat_.segment(layout_.mean_weights, layout_.mean_weights_size); }

bool operator==(const GpParams& a, const GpParams& b) {
  return a.arch_ == b.arch_ && a.input_dim() == b.input_dim() && a.flat_.size() == b.flat_.size() &&
         (a.flat_.array() == b.flat_.array()).all();
}

std::string serialize_params(const GpParams& params) {
  nlohmann::ordered_json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["architecture"] = to_string(params.architecture().variant);
  doc["kernel"] = to_string(params.architecture().kernel);
  doc["input_dim"] = params.input_dim();
  nlohmann::ordered_json blocks_json = nlohmann::ordered_json::object();
  const auto& flat = params.pack();
  for (const auto& b : blocks(params.layout())) {
    if (b.size == 0) continue;
    std::vector<double> values(flat.data() + b.offset, flat.data() + b.offset + b.size);
    blocks_json[b.name] = values;
  }
  doc["params"] = std::move(blocks_json);
  return doc.dump(2) + "\n";
}

GpParams deserialize_params(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
  auto field = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("model document: missing field '") + key + "'");
    return obj.at(key);
  };
  try {
    if (field(doc, "format").get<std::string>() != kModelFormat) throw ParseError("model document: wrong format tag");
    if (field(doc, "version").get<int>() != kModelVersion) throw ParseError("model document: unsupported version");
    ModelArchitecture arch;
    arch.variant = parse_architecture(field(doc, "architecture").get<std::string>());
    if (doc.contains("kernel")) arch.kernel = parse_kernel_family(doc.at("kernel").get<std::string>());
    const auto d = field(doc, "input_dim").get<std::size_t>();
    const ParamLayout layout(arch.variant, d);
    const auto& p = field(doc, "params");
    Eigen::VectorXd flat(layout.size);
    for (const auto& b : blocks(layout)) {
      if (b.size == 0) continue;
      const auto values = field(p, b.name).get<std::vector<double>>();
      if (values.size() != b.size)
        throw ParseError(std::string("model document: field 'params.") + b.name + "' has wrong length");
      for (std::size_t i = 0; i < b.size; ++i) flat(b.offset + i) = values[i];
    }
    return GpParams(arch, d, std::move(flat));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
}

void save_params(const GpParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << serialize_params(params);
}

GpParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_params(ss.str());
}

}  // namespace pregp
