#include "doctest.h"
#include "oracles.hpp"
#include "proxybo/error.hpp"
#include "proxybo/rng.hpp"
#include "proxybo/tinynet.hpp"

using namespace proxybo;

namespace {

NetSpec small_net(std::uint64_t seed) {
  Rng rng(seed);
  NetSpec net;
  net.input_dim = 2 + rng.index(3);
  const int hidden = 1 + rng.index(2);
  for (int l = 0; l < hidden; ++l) {
    net.layers.push_back({2 + rng.index(4), rng.index(2) ? Activation::relu : Activation::identity});
  }
  net.layers.push_back({1 + rng.index(2), Activation::identity});
  net.init_seed = seed;
  return net;
}

// Straightforward loop implementation of the forward pass.
Matrix naive_forward(const NetSpec& net, const ParamSet& params, const Matrix& x) {
  Matrix h = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& p = params.layers[l];
    Matrix out(h.rows(), p.weight.rows());
    for (Eigen::Index b = 0; b < h.rows(); ++b) {
      for (Eigen::Index o = 0; o < p.weight.rows(); ++o) {
        double s = p.bias(o);
        for (Eigen::Index i = 0; i < h.cols(); ++i) s += p.weight(o, i) * h(b, i);
        if (net.layers[l].activation == Activation::relu && s < 0) s = 0;
        out(b, o) = s;
      }
    }
    h = out;
  }
  return h;
}

double loss_of(const NetSpec& net, const ParamSet& params, const Batch& batch, Loss loss) {
  const Matrix out = naive_forward(net, params, batch.inputs);
  if (loss == Loss::sum_of_outputs) return out.sum();
  return 0.5 * (out - *batch.targets).squaredNorm();
}

}  // namespace

TEST_CASE("instantiate is deterministic") {
  SearchSpaceSpec space{6, 5, "nb2"};
  const ArchEncoding x({3, 0, 4, 1, 1, 2});
  const auto a = instantiate(x, space, 11);
  const auto b = instantiate(x, space, 11);
  CHECK(a.params == b.params);
  CHECK(a.params.flatten() == b.params.flatten());
  const auto c = instantiate(x, space, 12);
  CHECK_FALSE(a.params == c.params);
}

TEST_CASE("all-zero encoding maps to the minimal-width network") {
  SearchSpaceSpec space{6, 5, "nb2"};
  const auto net = net_spec_for(ArchEncoding(std::vector<int>(6, 0)), space, 0);
  REQUIRE(net.layers.size() == 7);
  for (int l = 0; l < 6; ++l) {
    CHECK(net.layers[l].width == NetMapping::kWidthStep);
    CHECK(net.layers[l].activation == Activation::identity);
  }
  CHECK(net.layers.back().width == NetMapping::kOutputDim);
  CHECK(NetMapping::hidden_layer(1).activation == Activation::relu);
  CHECK(NetMapping::hidden_layer(4).width == 20);
}

TEST_CASE("parameter count matches shape arithmetic") {
  SearchSpaceSpec space{6, 5, "nb2"};
  // [0,...,0]: 16 -> 4 x6 -> 2  =>  17*4 + 5*(5*4) + 5*2
  const auto n0 = instantiate(ArchEncoding(std::vector<int>(6, 0)), space, 0);
  CHECK(n0.spec.parameter_count() == 178);
  CHECK(n0.params.size() == 178);
  // [3,0,4,1,1,2]: widths 16,4,20,8,8,12 then 2
  const auto n1 = instantiate(ArchEncoding({3, 0, 4, 1, 1, 2}), space, 0);
  const std::size_t expected = 17 * 16 + 17 * 4 + 5 * 20 + 21 * 8 + 9 * 8 + 9 * 12 + 13 * 2;
  CHECK(n1.spec.parameter_count() == expected);
  CHECK(n1.params.size() == expected);
}

TEST_CASE("forward with identity weights returns the inputs") {
  NetSpec net{3, {{3, Activation::identity}}, 0};
  ParamSet p{{{Matrix::Identity(3, 3), Vector::Zero(3)}}};
  Matrix x(2, 3);
  x << 1, -2, 3, 0.5, 0, -7;
  CHECK(forward(net, p, x) == x);
}

TEST_CASE("forward of a single scalar layer") {
  NetSpec net{1, {{1, Activation::identity}}, 0};
  ParamSet p{{{Matrix::Constant(1, 1, 2.0), Vector::Zero(1)}}};
  CHECK(forward(net, p, Matrix::Constant(1, 1, 3.0))(0, 0) == 6.0);
}

TEST_CASE("forward matches a loop re-implementation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = small_net(seed);
    const auto params = init_params(net);
    const auto batch = gaussian_batch(5, net.input_dim, 0, seed + 100);
    const Matrix fast = forward(net, params, batch.inputs);
    const Matrix slow = naive_forward(net, params, batch.inputs);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("forward is linear without activations or biases") {
  NetSpec net{4, {{6, Activation::identity}, {3, Activation::identity}}, 9};
  auto params = init_params(net);
  for (auto& l : params.layers) l.bias.setZero();
  const auto a = gaussian_batch(3, 4, 0, 1).inputs;
  const auto b = gaussian_batch(3, 4, 0, 2).inputs;
  const double alpha = 1.7, beta = -0.3;
  const Matrix lhs = forward(net, params, alpha * a + beta * b);
  const Matrix rhs = alpha * forward(net, params, a) + beta * forward(net, params, b);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("forward reports shape mismatches by layer") {
  NetSpec net{3, {{4, Activation::relu}, {2, Activation::identity}}, 0};
  auto params = init_params(net);
  CHECK_THROWS_AS(forward(net, params, Matrix::Zero(2, 5)), ShapeMismatch);
  params.layers[1].weight = Matrix::Zero(2, 3);
  try {
    forward(net, params, Matrix::Zero(2, 3));
    FAIL("expected ShapeMismatch");
  } catch (const ShapeMismatch& e) {
    CHECK(e.layer() == 1);
  }
}

TEST_CASE("grad_params on the scalar squared-error model") {
  // L = 0.5 (w x - t)^2 with w = 2, x = 1, t = 0.
  NetSpec net{1, {{1, Activation::identity}}, 0};
  ParamSet p{{{Matrix::Constant(1, 1, 2.0), Vector::Zero(1)}}};
  Batch batch{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 0.0)};
  const auto g = grad_params(net, p, batch, Loss::squared_error);
  const auto fd = oracle::central_difference(
      [&](const std::vector<double>& w) {
        const double out = w[0] * 1.0 + w[1];
        return 0.5 * out * out;
      },
      {2.0, 0.0});
  CHECK(g.params.layers[0].weight(0, 0) == doctest::Approx(fd[0]).epsilon(1e-8));
  CHECK(g.params.layers[0].weight(0, 0) == doctest::Approx(2.0));
  CHECK(g.loss == doctest::Approx(2.0));
}

TEST_CASE("zero inputs and targets give zero first-layer weight gradients") {
  NetSpec net{3, {{4, Activation::relu}, {2, Activation::identity}}, 5};
  const auto params = init_params(net);
  Batch batch{Matrix::Zero(4, 3), Matrix::Zero(4, 2)};
  const auto g = grad_params(net, params, batch, Loss::squared_error);
  CHECK(g.params.layers[0].weight.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grad_params matches central finite differences") {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const auto net = small_net(seed);
    const auto params = init_params(net);
    const auto batch = gaussian_batch(4, net.input_dim, net.output_dim(), seed + 1000);
    for (Loss loss : {Loss::squared_error, Loss::sum_of_outputs}) {
      const auto g = grad_params(net, params, batch, loss).params.flatten();
      const auto fd = oracle::central_difference(
          [&](const std::vector<double>& flat) {
            ParamSet p = params;
            p.assign(flat);
            return loss_of(net, p, batch, loss);
          },
          params.flatten());
      REQUIRE(g.size() == fd.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        INFO("seed " << seed << " param " << i);
        CHECK(oracle::close_rel(g[i], fd[i], 1e-5, 1e-8));
      }
    }
  }
}

TEST_CASE("grad_params signals non-finite values with the layer") {
  NetSpec net{2, {{2, Activation::identity}, {1, Activation::identity}}, 0};
  auto params = init_params(net);
  params.layers[0].weight.setConstant(1e308);
  Batch batch{Matrix::Constant(1, 2, 10.0), Matrix::Zero(1, 1)};
  try {
    grad_params(net, params, batch, Loss::squared_error);
    FAIL("expected NumericOverflow");
  } catch (const NumericOverflow& e) {
    CHECK(e.layer() == 0);
  }
}

TEST_CASE("input Jacobian of a linear layer is the column sums") {
  NetSpec net{3, {{2, Activation::identity}}, 0};
  ParamSet p{{{Matrix(2, 3), Vector::Zero(2)}}};
  p.layers[0].weight << 1, 2, 3, -4, 5, 0.5;
  const Matrix rows = grad_inputs_per_example(net, p, gaussian_batch(4, 3, 0, 8).inputs);
  for (int r = 0; r < 4; ++r) {
    CHECK(rows(r, 0) == doctest::Approx(-3.0));
    CHECK(rows(r, 1) == doctest::Approx(7.0));
    CHECK(rows(r, 2) == doctest::Approx(3.5));
  }
}

TEST_CASE("input Jacobian of the identity network is all ones") {
  NetSpec net{3, {{3, Activation::identity}}, 0};
  ParamSet p{{{Matrix::Identity(3, 3), Vector::Zero(3)}}};
  const Matrix rows = grad_inputs_per_example(net, p, gaussian_batch(5, 3, 0, 2).inputs);
  CHECK(rows == Matrix::Ones(5, 3));
}

TEST_CASE("input Jacobian rows match finite differences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = small_net(seed);
    const auto params = init_params(net);
    const auto batch = gaussian_batch(3, net.input_dim, 0, seed + 50);
    const Matrix rows = grad_inputs_per_example(net, params, batch.inputs);
    for (int b = 0; b < batch.size(); ++b) {
      std::vector<double> x(batch.inputs.cols());
      for (int i = 0; i < batch.inputs.cols(); ++i) x[i] = batch.inputs(b, i);
      const auto fd = oracle::central_difference(
          [&](const std::vector<double>& v) {
            Matrix in(1, static_cast<Eigen::Index>(v.size()));
            for (std::size_t i = 0; i < v.size(); ++i) in(0, static_cast<Eigen::Index>(i)) = v[i];
            return naive_forward(net, params, in).sum();
          },
          x);
      for (std::size_t i = 0; i < fd.size(); ++i) {
        CHECK(oracle::close_rel(rows(b, static_cast<Eigen::Index>(i)), fd[i], 1e-5, 1e-8));
      }
    }
  }
}

TEST_CASE("gradients are bit-identical across repeated calls") {
  SearchSpaceSpec space{6, 5, "nb2"};
  const auto n = instantiate(ArchEncoding({1, 2, 3, 4, 0, 1}), space, 3);
  const auto batch = gaussian_batch(16, n.spec.input_dim, n.spec.output_dim(), 4);
  const auto a = grad_params(n.spec, n.params, batch, Loss::squared_error);
  const auto b = grad_params(n.spec, n.params, batch, Loss::squared_error);
  CHECK(a.params == b.params);
  CHECK(a.loss == b.loss);
  CHECK(grad_inputs_per_example(n.spec, n.params, batch.inputs) ==
        grad_inputs_per_example(n.spec, n.params, batch.inputs));
}
