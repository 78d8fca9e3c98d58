#include "proxybo/tinynet.hpp"

#include <cmath>

#include "proxybo/error.hpp"
#include "proxybo/rng.hpp"

namespace proxybo {

std::size_t NetSpec::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    n += static_cast<std::size_t>(fan_in(l) + 1) * layers[l].width;
  }
  return n;
}

std::size_t ParamSet::size() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<double> ParamSet::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out.push_back(l.weight(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out.push_back(l.bias(r));
  }
  return out;
}

void ParamSet::assign(const std::vector<double>& flat) {
  if (flat.size() != size()) throw InvalidArgument("ParamSet::assign: size mismatch");
  std::size_t i = 0;
  for (auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[i++];
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[i++];
  }
}

ParamSet ParamSet::abs() const {
  ParamSet out = *this;
  for (auto& l : out.layers) {
    l.weight = l.weight.cwiseAbs();
    l.bias = l.bias.cwiseAbs();
  }
  return out;
}

bool ParamSet::operator==(const ParamSet& o) const {
  if (layers.size() != o.layers.size()) return false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& a = layers[l];
    const auto& b = o.layers[l];
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols() ||
        a.bias.size() != b.bias.size()) {
      return false;
    }
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

LayerSpec NetMapping::hidden_layer(int op_value) {
  return LayerSpec{kWidthStep * (op_value + 1),
                   op_value % 2 == 1 ? Activation::relu : Activation::identity};
}

NetSpec net_spec_for(const ArchEncoding& x, const SearchSpaceSpec& space,
                     std::uint64_t init_seed) {
  if (!x.valid_for(space)) {
    throw InvalidArgument("encoding " + x.to_string() + " is not valid for the space");
  }
  NetSpec net;
  net.input_dim = NetMapping::kInputDim;
  net.init_seed = init_seed;
  for (int v : x.values()) net.layers.push_back(NetMapping::hidden_layer(v));
  net.layers.push_back(LayerSpec{NetMapping::kOutputDim, Activation::identity});
  return net;
}

ParamSet init_params(const NetSpec& net) {
  Rng rng(net.init_seed);
  ParamSet params;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const int in = net.fan_in(l);
    const int out = net.layers[l].width;
    if (in < 1 || out < 1) throw ShapeMismatch(static_cast<int>(l), "width must be >= 1");
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    LayerParams lp{Matrix(out, in), Vector(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) lp.weight(r, c) = bound * (2.0 * rng.uniform() - 1.0);
    }
    for (int r = 0; r < out; ++r) lp.bias(r) = bound * (2.0 * rng.uniform() - 1.0);
    params.layers.push_back(std::move(lp));
  }
  return params;
}

Network instantiate(const ArchEncoding& x, const SearchSpaceSpec& space,
                    std::uint64_t init_seed) {
  Network n;
  n.spec = net_spec_for(x, space, init_seed);
  n.params = init_params(n.spec);
  return n;
}

Batch gaussian_batch(int batch_size, int input_dim, int output_dim, std::uint64_t seed) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  Rng rng(seed);
  Batch b;
  b.inputs.resize(batch_size, input_dim);
  for (int r = 0; r < batch_size; ++r) {
    for (int c = 0; c < input_dim; ++c) b.inputs(r, c) = rng.normal();
  }
  if (output_dim > 0) {
    Matrix t(batch_size, output_dim);
    for (int r = 0; r < batch_size; ++r) {
      for (int c = 0; c < output_dim; ++c) t(r, c) = rng.normal();
    }
    b.targets = std::move(t);
  }
  return b;
}

namespace {

void check_shapes(const NetSpec& net, const ParamSet& params, const Matrix& inputs) {
  if (params.layers.size() != net.layers.size()) {
    throw ShapeMismatch(static_cast<int>(params.layers.size()),
                        "parameter set has " + std::to_string(params.layers.size()) +
                            " layers, network has " + std::to_string(net.layers.size()));
  }
  if (inputs.cols() != net.input_dim) {
    throw ShapeMismatch(0, "input has " + std::to_string(inputs.cols()) +
                               " columns, expected " + std::to_string(net.input_dim));
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& p = params.layers[l];
    if (p.weight.rows() != net.layers[l].width || p.weight.cols() != net.fan_in(l) ||
        p.bias.size() != net.layers[l].width) {
      throw ShapeMismatch(static_cast<int>(l), "parameters do not match layer shape");
    }
  }
}

void check_finite(const Matrix& m, int layer, const char* what) {
  if (!m.allFinite()) throw NumericOverflow(layer, what);
}

// Keeps every layer's input and pre-activation for the backward pass.
struct Tape {
  std::vector<Matrix> inputs;  // inputs[l] feeds layer l
  std::vector<Matrix> pre;     // pre-activation of layer l
  Matrix output;
};

Tape run_forward(const NetSpec& net, const ParamSet& params, const Matrix& x) {
  check_shapes(net, params, x);
  Tape tape;
  Matrix h = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& p = params.layers[l];
    Matrix z = h * p.weight.transpose();
    z.rowwise() += p.bias.transpose();
    check_finite(z, static_cast<int>(l), "forward pre-activation");
    tape.inputs.push_back(h);
    h = net.layers[l].activation == Activation::relu ? Matrix(z.cwiseMax(0.0)) : z;
    tape.pre.push_back(std::move(z));
  }
  tape.output = std::move(h);
  return tape;
}

// Back-propagates `upstream` = dL/d(output). Returns dL/d(input) and, when
// grads is non-null, accumulates parameter gradients into it.
Matrix run_backward(const NetSpec& net, const ParamSet& params, const Tape& tape,
                    Matrix upstream, ParamSet* grads) {
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    Matrix dz = std::move(upstream);
    if (net.layers[l].activation == Activation::relu) {
      dz = dz.cwiseProduct((tape.pre[l].array() > 0.0).cast<double>().matrix());
    }
    if (grads) {
      grads->layers[l].weight = dz.transpose() * tape.inputs[l];
      grads->layers[l].bias = dz.colwise().sum().transpose();
      check_finite(grads->layers[l].weight, static_cast<int>(l), "weight gradient");
      check_finite(grads->layers[l].bias, static_cast<int>(l), "bias gradient");
    }
    upstream = dz * params.layers[l].weight;
    check_finite(upstream, static_cast<int>(l), "input gradient");
  }
  return upstream;
}

}  // namespace

Matrix forward(const NetSpec& net, const ParamSet& params, const Matrix& inputs) {
  return run_forward(net, params, inputs).output;
}

Gradient grad_params(const NetSpec& net, const ParamSet& params, const Batch& batch,
                     Loss loss) {
  Tape tape = run_forward(net, params, batch.inputs);
  Matrix upstream;
  Gradient g;
  if (loss == Loss::squared_error) {
    if (!batch.targets) throw InvalidArgument("squared_error loss needs targets");
    const Matrix& t = *batch.targets;
    if (t.rows() != tape.output.rows() || t.cols() != tape.output.cols()) {
      throw ShapeMismatch(static_cast<int>(net.layers.size()) - 1,
                          "targets do not match output shape");
    }
    upstream = tape.output - t;
    g.loss = 0.5 * upstream.squaredNorm();
  } else {
    upstream = Matrix::Ones(tape.output.rows(), tape.output.cols());
    g.loss = tape.output.sum();
  }
  g.params = params;  // shapes
  run_backward(net, params, tape, std::move(upstream), &g.params);
  return g;
}

Matrix grad_inputs_per_example(const NetSpec& net, const ParamSet& params,
                               const Matrix& inputs) {
  Tape tape = run_forward(net, params, inputs);
  // Examples do not interact, so one batched pass with unit upstream yields
  // each example's own input gradient.
  Matrix upstream = Matrix::Ones(tape.output.rows(), tape.output.cols());
  return run_backward(net, params, tape, std::move(upstream), nullptr);
}

}  // namespace proxybo
