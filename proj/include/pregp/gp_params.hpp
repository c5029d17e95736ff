#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace pregp {

/// Width of the single hidden layer of the MLP feature map.
inline constexpr std::size_t kHiddenWidth = 8;

enum class Architecture {
  const_matern,  ///< constant mean, ARD kernel on raw inputs
  mlp_matern,    ///< tanh MLP features shared by a linear mean and an ARD kernel
};

/// Stationary kernel profile applied to the lengthscale-scaled distance.
enum class KernelFamily { matern32 };

struct ModelArchitecture {
  Architecture variant = Architecture::const_matern;
  KernelFamily kernel = KernelFamily::matern32;

  friend bool operator==(const ModelArchitecture&, const ModelArchitecture&) = default;
};

[[nodiscard]] std::string_view to_string(Architecture a);
/// Accepts "const-matern" and "mlp8-matern".
[[nodiscard]] Architecture parse_architecture(std::string_view token);
[[nodiscard]] std::string_view to_string(KernelFamily k);
[[nodiscard]] KernelFamily parse_kernel_family(std::string_view token);

/// Offsets of every named block inside the flat parameter vector.
///
/// Order: feature_weights (8 x d, row-major), feature_bias (8), mean_weights (8),
/// mean_offset, log_amplitude, log_lengthscales (one per kernel input), log_noise.
/// The three MLP blocks are empty for const_matern.
struct ParamLayout {
  ParamLayout(Architecture arch, std::size_t input_dim);

  std::size_t input_dim;
  std::size_t kernel_dim;  ///< d for const_matern, 8 for mlp_matern
  std::size_t feature_weights = 0, feature_weights_size = 0;
  std::size_t feature_bias = 0, feature_bias_size = 0;
  std::size_t mean_weights = 0, mean_weights_size = 0;
  std::size_t mean_offset = 0;
  std::size_t log_amplitude = 0;
  std::size_t log_lengthscales = 0;
  std::size_t log_noise = 0;
  std::size_t size = 0;
};

/// GP mean, kernel and noise parameters in unconstrained form. Immutable.
class GpParams {
 public:
  /// Throws InputError on a size mismatch and ParameterError on non-finite entries.
  GpParams(ModelArchitecture arch, std::size_t input_dim, Eigen::VectorXd flat);

  [[nodiscard]] static GpParams const_matern(double mean, double amplitude, const Eigen::VectorXd& lengthscales,
                                             double noise_variance);
  [[nodiscard]] static GpParams mlp_matern(const Eigen::MatrixXd& feature_weights,
                                           const Eigen::VectorXd& feature_bias,
                                           const Eigen::VectorXd& mean_weights, double mean_offset,
                                           double amplitude, const Eigen::VectorXd& lengthscales,
                                           double noise_variance);

  [[nodiscard]] const ModelArchitecture& architecture() const noexcept { return arch_; }
  [[nodiscard]] std::size_t input_dim() const noexcept { return layout_.input_dim; }
  [[nodiscard]] const ParamLayout& layout() const noexcept { return layout_; }

  /// The flat vector; `unpack(arch, d, pack())` reproduces *this exactly.
  [[nodiscard]] const Eigen::VectorXd& pack() const noexcept { return flat_; }
  [[nodiscard]] static GpParams unpack(ModelArchitecture arch, std::size_t input_dim, const Eigen::VectorXd& flat) {
    return GpParams(arch, input_dim, flat);
  }
  /// Same architecture, new flat vector.
  [[nodiscard]] GpParams with_flat(Eigen::VectorXd flat) const { return GpParams(arch_, input_dim(), std::move(flat)); }

  [[nodiscard]] double mean_offset() const { return flat_(layout_.mean_offset); }
  [[nodiscard]] double amplitude() const;
  [[nodiscard]] double noise_variance() const;
  [[nodiscard]] Eigen::VectorXd lengthscales() const;
  /// kHiddenWidth x d; empty for const_matern.
  [[nodiscard]] Eigen::MatrixXd feature_weights() const;
  [[nodiscard]] Eigen::VectorXd feature_bias() const;
  [[nodiscard]] Eigen::VectorXd mean_weights() const;

  friend bool operator==(const GpParams& a, const GpParams& b);

 private:
  ModelArchitecture arch_;
  ParamLayout layout_;
  Eigen::VectorXd flat_;
};

/// Versioned model document: JSON object mapping each block name to a list of numbers.
[[nodiscard]] std::string serialize_params(const GpParams& params);
/// Throws ParseError naming the offending field.
[[nodiscard]] GpParams deserialize_params(std::string_view text);

void save_params(const GpParams& params, const std::string& path);
[[nodiscard]] GpParams load_params(const std::string& path);

}  // namespace pregp
