// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "pyrorisk/cnn/signal.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/rng.hpp"

using namespace pyrorisk;
using namespace pyrorisk::cnn;

namespace {

Signal1D random_signal(Rng& rng) {
    Signal1D s;
    s.start = static_cast<std::int64_t>(rng.below(11)) - 5;
    s.samples.resize(1 + rng.below(12));
    for (auto& v : s.samples) v = rng.uniform(-10, 10);
    return s;
}

double value_at(const Signal1D& s, std::int64_t n) {
    const auto i = n - s.start;
    return i >= 0 && i < static_cast<std::int64_t>(s.samples.size()) ? s.samples[i] : 0.0;
}

/// Sum over every pair of support indices; the definition, not a sliding window.
Signal1D brute(const Signal1D& x, const Signal1D& h) {
    Signal1D y;
    y.start = x.start + h.start;
    y.samples.assign(x.samples.size() + h.samples.size() - 1, 0.0);
    for (std::int64_t n = y.start; n < y.start + static_cast<std::int64_t>(y.samples.size()); ++n) {
        double acc = 0;
        for (std::int64_t k = x.start - 50; k < x.start + 50; ++k) acc += value_at(x, k) * value_at(h, n - k);
        y.samples[n - y.start] = acc;
    }
    return y;
}

}  // namespace

TEST(Conv1d, HandCases) {
    EXPECT_EQ(conv1d({0, {1, 2, 3}}, {0, {1}}).samples, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(conv1d({0, {1, 1}}, {0, {1, 1}}).samples, (std::vector<double>{1, 2, 1}));
    const auto y = conv1d({2, {1, 2}}, {-1, {3}});
    EXPECT_EQ(y.start, 1);
    EXPECT_EQ(y.samples, (std::vector<double>{3, 6}));
    EXPECT_THROW(conv1d({0, {}}, {0, {1}}), DomainError);
}

TEST(Conv1d, MatchesDefinition) {
    Rng rng(1);
    Signal1D x{0, std::vector<double>(7)}, h{0, std::vector<double>(4)};
    for (auto& v : x.samples) v = rng.uniform(-1, 1);
    for (auto& v : h.samples) v = rng.uniform(-1, 1);
    const auto got = conv1d(x, h), want = brute(x, h);
    ASSERT_EQ(got.samples.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(got.samples[i], want.samples[i], 1e-12);
}

TEST(Conv1d, CommutativeLinearIdentity) {
    Rng rng(2);
    for (int t = 0; t < 1000; ++t) {
        const auto x = random_signal(rng), h = random_signal(rng);
        auto g = random_signal(rng);
        g.start = h.start;
        g.samples.resize(h.samples.size());
        const auto xh = conv1d(x, h), hx = conv1d(h, x);
        ASSERT_EQ(xh.start, hx.start);
        ASSERT_EQ(xh.samples.size(), hx.samples.size());
        for (std::size_t i = 0; i < xh.samples.size(); ++i) ASSERT_NEAR(xh.samples[i], hx.samples[i], 1e-9);

        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        Signal1D mix{h.start, h.samples};
        for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] = a * h.samples[i] + b * g.samples[i];
        const auto lhs = conv1d(x, mix), xg = conv1d(x, g);
        for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
            ASSERT_NEAR(lhs.samples[i], a * xh.samples[i] + b * xg.samples[i], 1e-9);
        }

        const auto id = conv1d(x, {0, {1.0}});
        ASSERT_EQ(id.start, x.start);
        ASSERT_EQ(id.samples, x.samples);
    }
}

