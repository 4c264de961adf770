// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cnn_oracle.hpp"
#include "pyrorisk/cnn/geometry.hpp"
#include "pyrorisk/cnn/network.hpp"
#include "pyrorisk/common/error.hpp"

using namespace pyrorisk;
using namespace pyrorisk::cnn;
using test::conv_oracle;
using test::random_conv;
using test::random_tensor;

namespace {

Conv2D conv_topology(std::uint32_t cin, std::uint32_t cout, bool frozen) {
    Conv2D c;
    c.filter = 3;
    c.in_channels = cin;
    c.out_channels = cout;
    c.pad = 1;
    c.activation = {ActivationKind::ReLU};
    c.frozen = frozen;
    return c;
}

std::vector<Layer> vgg19(bool with_head) {
    std::vector<Layer> layers;
    std::uint32_t c = 3;
    for (auto [n, width] : {std::pair{2, 64u}, {2, 128u}, {4, 256u}, {4, 512u}, {4, 512u}}) {
        for (int i = 0; i < n; ++i) {
            layers.emplace_back(conv_topology(c, width, true));
            c = width;
        }
        layers.emplace_back(MaxPool{2, 2, true});
    }
    if (with_head) {
        layers.emplace_back(Flatten{});
        Dense d;
        d.in = 51200;
        d.out = 2;
        d.activation = {ActivationKind::Sigmoid};
        layers.emplace_back(d);
    }
    return layers;
}

Dense dense_layer(std::uint32_t in, std::uint32_t out, ActivationKind act, float fill = 0.0f) {
    Dense d;
    d.in = in;
    d.out = out;
    d.activation = {act};
    d.weights.assign(std::size_t{in} * out, fill);
    d.bias.assign(out, 0.0f);
    return d;
}

}  // namespace

TEST(Geometry, OutSizeAnchors) {
    EXPECT_EQ(out_size({350, 0, 2, 2}), 175u);
    EXPECT_EQ(out_size({350, 1, 3, 1}), 350u);
    EXPECT_EQ(out_size({10, 0, 10, 1}), 1u);
    EXPECT_EQ(out_size({175, 0, 2, 2}), 87u);
    EXPECT_THROW(out_size({175, 0, 2, 2}, true), DomainError);
    EXPECT_THROW(out_size({4, 0, 5, 1}), DomainError);
    EXPECT_THROW(out_size({4, 0, 2, 0}), DomainError);
}

TEST(Geometry, FilterSizeInverse) {
    EXPECT_EQ(filter_size(350, 0, 2, 175), 2u);
    EXPECT_EQ(filter_size(10, 0, 1, 1), 10u);
    EXPECT_THROW(filter_size(10, 0, 1, 11), DomainError);
    Rng rng(5);
    for (int t = 0; t < 2000; ++t) {
        const auto n = 1 + static_cast<std::uint32_t>(rng.below(400));
        const auto p = static_cast<std::uint32_t>(rng.below(4));
        const auto s = 1 + static_cast<std::uint32_t>(rng.below(4));
        const auto f = 1 + static_cast<std::uint32_t>(rng.below(n + 2 * p));
        const auto o = out_size({n, p, f, s});
        const auto f2 = filter_size(n, p, s, o);
        EXPECT_EQ(out_size({n, p, f2, s}), o);
        EXPECT_GE(f2, f);
        EXPECT_LT(f2, f + s);
    }
}

TEST(Flatten, LengthAndRoundTrip) {
    EXPECT_EQ(flatten(Tensor3({10, 10, 512})).size(), 51200u);
    EXPECT_EQ(flatten(Tensor3({1, 1, 1})).size(), 1u);
    Rng rng(1);
    const auto t = random_tensor(rng, {3, 4, 5});
    const auto v = flatten(t);
    EXPECT_EQ(v[(1 * 4 + 2) * 5 + 3], t.at(1, 2, 3));
    EXPECT_EQ(reshape(v, t.shape()), t);
}

TEST(Tensor, RejectsInvalid) {
    EXPECT_THROW(Tensor3({0, 1, 1}), DomainError);
    EXPECT_THROW(Tensor3({1, 1, 2}, std::vector<float>{1.0f}), DomainError);
    EXPECT_THROW(Tensor3({1, 1, 1}, std::vector<float>{NAN}), DomainError);
}

TEST(Params, Vgg19Anchors) {
    Dense head;
    head.in = 51200;
    head.out = 2;
    EXPECT_EQ(param_count(Layer{head}), 102402u);
    EXPECT_EQ(count_params(std::vector<Layer>{}), (ParamCount{0, 0}));
    EXPECT_EQ(param_count(Layer{conv_topology(3, 64, false)}), 1792u);

    const auto base = vgg19(false);
    EXPECT_EQ(count_params(base).total, 20024384u);
    const auto full = vgg19(true);
    const auto pc = count_params(full);
    EXPECT_EQ(pc.total, 20126786u);
    EXPECT_EQ(pc.trainable, 102402u);
}

TEST(Params, Vgg19ShapeChain) {
    const auto shapes = shape_chain({350, 350, 3}, vgg19(true));
    EXPECT_EQ(shapes[1], (Shape{350, 350, 64}));
    EXPECT_EQ(shapes[2], (Shape{350, 350, 64}));
    EXPECT_EQ(shapes[3], (Shape{175, 175, 64}));
    const std::size_t flat = shapes.size() - 2;
    EXPECT_EQ(shapes[flat - 1], (Shape{10, 10, 512}));
    EXPECT_EQ(shapes[flat], (Shape{1, 1, 51200}));
    EXPECT_EQ(shapes.back(), (Shape{1, 1, 2}));
}

TEST(Activations, Basics) {
    EXPECT_EQ(sigmoid(0), 0.5);
    EXPECT_EQ(sigmoid(-800), 0.0);
    EXPECT_EQ(sigmoid(800), 1.0);
    EXPECT_NEAR(sigmoid(-30), std::exp(-30.0), 1e-20);
    EXPECT_EQ(relu(-2), 0.0);
    EXPECT_EQ(relu(3), 3.0);
    EXPECT_EQ(leaky_relu(-2, 0.1), -0.2);
    EXPECT_EQ(tanh_act(0.5), std::tanh(0.5));
    const auto u = softmax(std::vector{2.0, 2.0, 2.0, 2.0});
    for (double p : u) EXPECT_NEAR(p, 0.25, 1e-15);
    const auto big = softmax(std::vector{1000.0, 0.0});
    EXPECT_NEAR(big[0], 1.0, 1e-12);
    EXPECT_GE(big[1], 0.0);
    EXPECT_LT(big[1], 1e-12);
}

TEST(Activations, SoftmaxSumAndShiftInvariance) {
    Rng rng(8);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> z(1 + rng.below(10));
        for (auto& v : z) v = rng.uniform(-50, 50);
        const auto p = softmax(z);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-6);
        auto shifted = z;
        const double c = rng.uniform(-100, 100);
        for (auto& v : shifted) v += c;
        const auto q = softmax(shifted);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-6);
    }
}

TEST(Activations, NameRoundTrip) {
    for (auto k : {ActivationKind::None, ActivationKind::ReLU, ActivationKind::LeakyReLU, ActivationKind::Tanh,
                   ActivationKind::Sigmoid, ActivationKind::Softmax}) {
        EXPECT_EQ(parse_activation(to_string(k)), k);
    }
    EXPECT_THROW(parse_activation("gelu"), DomainError);
}

TEST(Conv2d, IdentityKernel) {
    Rng rng(2);
    const auto x = random_tensor(rng, {5, 6, 1});
    Conv2D c;
    c.kernel = {1.0f};
    c.bias = {0.0f};
    EXPECT_EQ(conv2d(x, c), x);
}

TEST(Conv2d, OnesKernelOnConstantInput) {
    Conv2D c;
    c.filter = 2;
    c.kernel.assign(4, 1.0f);
    c.bias = {0.0f};
    const auto y = conv2d(Tensor3({4, 4, 1}, 1.0f), c);
    EXPECT_EQ(y.shape(), (Shape{3, 3, 1}));
    for (float v : y.data()) EXPECT_EQ(v, 4.0f);
}

TEST(Conv2d, StridedPaddedMatchesOracle) {
    Rng rng(3);
    const auto x = random_tensor(rng, {8, 8, 3});
    const auto c = random_conv(rng, 3, 3, 5, 2, 1);
    std::uint32_t oh, ow;
    const auto want = conv_oracle(x, c, oh, ow);
    const auto got = conv2d(x, c);
    ASSERT_EQ(got.shape(), (Shape{oh, ow, 5}));
    EXPECT_EQ(got.shape(), (Shape{4, 4, 5}));
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_LE(std::abs(got.data()[i] - want[i]), 1e-5 * std::max(1.0, std::abs(want[i])));
    }
}

TEST(Conv2d, RandomInstancesMatchOracle) {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const auto f = 1 + static_cast<std::uint32_t>(rng.below(5));
        const auto s = 1 + static_cast<std::uint32_t>(rng.below(3));
        const auto p = static_cast<std::uint32_t>(rng.below(3));
        const auto cin = 1 + static_cast<std::uint32_t>(rng.below(4));
        const auto cout = 1 + static_cast<std::uint32_t>(rng.below(4));
        const auto h = std::max<std::uint32_t>(1 + static_cast<std::uint32_t>(rng.below(16)), f > 2 * p ? f - 2 * p : 1);
        const auto w = std::max<std::uint32_t>(1 + static_cast<std::uint32_t>(rng.below(16)), f > 2 * p ? f - 2 * p : 1);
        const auto x = random_tensor(rng, {h, w, cin});
        const auto c = random_conv(rng, f, cin, cout, s, p);
        std::uint32_t oh, ow;
        const auto want = conv_oracle(x, c, oh, ow);
        const auto got = conv2d(x, c);
        ASSERT_EQ(got.shape(), (Shape{oh, ow, cout}));
        for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_LE(std::abs(got.data()[i] - want[i]), 1e-5 * std::max(1.0, std::abs(want[i])));
        }
    }
}

TEST(Conv2d, ChannelMismatchRejected) {
    Rng rng(5);
    const auto c = random_conv(rng, 3, 2, 1, 1, 0);
    EXPECT_THROW(conv2d(random_tensor(rng, {5, 5, 3}), c), DomainError);
    EXPECT_THROW(conv2d(random_tensor(rng, {2, 2, 2}), c), DomainError);
}

TEST(Convolve2d, MatchesLiteralDefinition) {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const auto f = 1 + static_cast<std::uint32_t>(rng.below(4));
        const auto p = static_cast<std::uint32_t>(rng.below(2));
        const auto s = 1 + static_cast<std::uint32_t>(rng.below(2));
        const auto x = random_tensor(rng, {7, 6, 2});
        const auto c = random_conv(rng, f, 2, 3, s, p);
        const auto want = test::convolution_oracle(x, c);
        const auto got = convolve2d(x, c);
        ASSERT_EQ(got.data().size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_LE(std::abs(got.data()[i] - want[i]), 1e-5 * std::max(1.0, std::abs(want[i])));
        }
        EXPECT_EQ(convolve2d(x, flip_kernel(c)), conv2d(x, c));
    }
}

TEST(MaxPool, Basics) {
    const Tensor3 x({2, 2, 1}, std::vector<float>{1, 2, 3, 4});
    const auto y = maxpool2d(x, 2, 2);
    EXPECT_EQ(y.shape(), (Shape{1, 1, 1}));
    EXPECT_EQ(y.at(0, 0, 0), 4.0f);
    const auto c = maxpool2d(Tensor3({6, 6, 3}, 0.7f), 2, 2);
    EXPECT_EQ(c.shape(), (Shape{3, 3, 3}));
    for (float v : c.data()) EXPECT_EQ(v, 0.7f);
    EXPECT_THROW(maxpool2d(x, 3, 1), DomainError);
    EXPECT_THROW(maxpool2d(x, 2, 0), DomainError);
}

TEST(MaxPool, EqualsWindowMaximum) {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const auto f = 1 + static_cast<std::uint32_t>(rng.below(3));
        const auto s = 1 + static_cast<std::uint32_t>(rng.below(3));
        const auto x = random_tensor(rng, {9, 8, 3});
        const auto y = maxpool2d(x, f, s);
        for (std::uint32_t i = 0; i < y.height(); ++i)
            for (std::uint32_t j = 0; j < y.width(); ++j)
                for (std::uint32_t k = 0; k < 3; ++k) {
                    float m = -INFINITY;
                    for (std::uint32_t a = 0; a < f; ++a)
                        for (std::uint32_t b = 0; b < f; ++b) m = std::max(m, x.at(i * s + a, j * s + b, k));
                    ASSERT_EQ(y.at(i, j, k), m);
                }
    }
}

TEST(MaxPool, Vgg19FirstPoolShape) {
    EXPECT_EQ(output_shape(Layer{MaxPool{2, 2}}, {350, 350, 64}), (Shape{175, 175, 64}));
    Rng rng(9);
    const auto y = maxpool2d(random_tensor(rng, {350, 350, 64}), 2, 2);
    EXPECT_EQ(y.shape(), (Shape{175, 175, 64}));
}

TEST(DenseLayer, IdentityZeroAndOracle) {
    auto id = dense_layer(3, 3, ActivationKind::None);
    for (int i = 0; i < 3; ++i) id.w(i, i) = 1.0f;
    const std::vector<float> v{0.5f, -1.0f, 2.0f};
    EXPECT_EQ(dense(v, id), v);

    auto z = dense_layer(4, 1, ActivationKind::Sigmoid);
    z.bias = {0.3f};
    EXPECT_NEAR(dense(std::vector<float>{1, 2, 3, 4}, z)[0], 1.0 / (1.0 + std::exp(-0.3)), 1e-7);

    Rng rng(10);
    auto r = dense_layer(50, 7, ActivationKind::None);
    for (auto& w : r.weights) w = static_cast<float>(rng.uniform(-1, 1));
    for (auto& b : r.bias) b = static_cast<float>(rng.uniform(-1, 1));
    std::vector<float> x(50);
    for (auto& e : x) e = static_cast<float>(rng.uniform(-1, 1));
    const auto y = dense(x, r);
    for (std::uint32_t o = 0; o < 7; ++o) {
        double acc = r.bias[o];
        for (std::uint32_t i = 0; i < 50; ++i) acc += double(x[i]) * r.w(i, o);
        EXPECT_NEAR(y[o], acc, 1e-6);
    }
    EXPECT_THROW(dense(std::vector<float>(49), r), DomainError);
}

TEST(Network, ZeroWeightHeads) {
    std::vector<Layer> soft{Flatten{}, dense_layer(12, 4, ActivationKind::Softmax)};
    const auto net = Network::build(soft, {2, 2, 3});
    Rng rng(11);
    const auto s = net.forward(random_tensor(rng, {2, 2, 3}));
    EXPECT_EQ(s.head, HeadKind::Softmax);
    for (double p : s.probabilities) EXPECT_NEAR(p, 0.25, 1e-7);

    std::vector<Layer> sig{Flatten{}, dense_layer(12, 2, ActivationKind::Sigmoid)};
    const auto s2 = Network::build(sig, {2, 2, 3}).forward(random_tensor(rng, {2, 2, 3}));
    EXPECT_EQ(s2.head, HeadKind::Sigmoid);
    for (double p : s2.probabilities) EXPECT_EQ(p, 0.5);
}

TEST(Network, DeterministicAndShapeChecked) {
    Rng rng(12);
    std::vector<Layer> layers{random_conv(rng, 3, 3, 4, 1, 1), MaxPool{2, 2}, Flatten{},
                              dense_layer(64, 2, ActivationKind::Softmax, 0.01f)};
    std::get<Conv2D>(layers[0]).activation = {ActivationKind::ReLU};
    const auto net = Network::build(layers, {8, 8, 3});
    const auto x = random_tensor(rng, {8, 8, 3}, 0, 1);
    const auto a = net.forward(x), b = net.forward(x);
    EXPECT_EQ(a.probabilities, b.probabilities);
    EXPECT_NEAR(a.probabilities[0] + a.probabilities[1], 1.0, 1e-6);
    EXPECT_THROW(net.forward(random_tensor(rng, {8, 9, 3})), DomainError);
    EXPECT_NO_THROW(Network::build(layers, {9, 9, 3}));
    EXPECT_THROW(Network::build(layers, {10, 10, 3}), DomainError);
    std::vector<Layer> no_head{Flatten{}, dense_layer(12, 2, ActivationKind::ReLU)};
    EXPECT_THROW(Network::build(no_head, {2, 2, 3}), DomainError);
}
