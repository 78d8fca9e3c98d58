#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "proxybo/space.hpp"

namespace proxybo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { identity, relu };

struct LayerSpec {
  int width = 1;
  Activation activation = Activation::identity;
};

// Dense feed-forward network shape. `layers` holds every affine layer in
// order, the output layer last.
struct NetSpec {
  int input_dim = 1;
  std::vector<LayerSpec> layers;
  std::uint64_t init_seed = 0;

  int output_dim() const { return layers.empty() ? input_dim : layers.back().width; }
  int fan_in(std::size_t layer) const {
    return layer == 0 ? input_dim : layers[layer - 1].width;
  }
  std::size_t parameter_count() const;
};

// weight is (out x in), bias has length out.
struct LayerParams {
  Matrix weight;
  Vector bias;
};

struct ParamSet {
  std::vector<LayerParams> layers;

  std::size_t size() const;
  // All weights (row-major per layer) then the layer's bias, layer by layer.
  std::vector<double> flatten() const;
  void assign(const std::vector<double>& flat);
  ParamSet abs() const;
  bool operator==(const ParamSet& o) const;
};

struct Batch {
  Matrix inputs;                  // batch_size x input_dim
  std::optional<Matrix> targets;  // batch_size x output_dim

  int size() const { return static_cast<int>(inputs.rows()); }
};

// Architecture-to-network mapping. Encoding dimension i sets hidden layer i:
//   width      = kWidthStep * (value + 1)
//   activation = relu for odd values, identity for even values
// followed by a linear output layer of width kOutputDim.
struct NetMapping {
  static constexpr int kInputDim = 16;
  static constexpr int kOutputDim = 2;
  static constexpr int kWidthStep = 4;
  static LayerSpec hidden_layer(int op_value);
};

struct Network {
  NetSpec spec;
  ParamSet params;
};

NetSpec net_spec_for(const ArchEncoding& x, const SearchSpaceSpec& space,
                     std::uint64_t init_seed);

// Weights and biases drawn from uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
ParamSet init_params(const NetSpec& net);

Network instantiate(const ArchEncoding& x, const SearchSpaceSpec& space,
                    std::uint64_t init_seed);

// Standard-normal inputs, and standard-normal targets when output_dim > 0.
Batch gaussian_batch(int batch_size, int input_dim, int output_dim,
                     std::uint64_t seed);

Matrix forward(const NetSpec& net, const ParamSet& params, const Matrix& inputs);

enum class Loss {
  squared_error,   // 0.5 * sum over examples and outputs of (out - target)^2
  sum_of_outputs,  // sum over examples and outputs
};

struct Gradient {
  double loss = 0.0;
  ParamSet params;
};

// Exact reverse-mode gradient of the scalar loss. The ReLU derivative at 0 is 0.
Gradient grad_params(const NetSpec& net, const ParamSet& params,
                     const Batch& batch, Loss loss);

// Row i is d(sum_j output_j(example i)) / d(input_i).
Matrix grad_inputs_per_example(const NetSpec& net, const ParamSet& params,
                               const Matrix& inputs);

}  // namespace proxybo
