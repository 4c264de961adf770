// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/parallel.hpp"
#include "pyrorisk/common/rng.hpp"

using namespace pyrorisk;

TEST(Csv, ReadsHeaderAndRows) {
    std::istringstream in("a,b,c\r\n1,2,3\n\n4,5,6\n");
    const auto t = csv::read(in);
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1][2], "6");
    EXPECT_EQ(t.column("b"), 1u);
    EXPECT_FALSE(t.has_column("z"));
    EXPECT_THROW(t.column("z"), DomainError);
}

TEST(Csv, RaggedRowRejected) {
    std::istringstream in("a,b\n1\n");
    EXPECT_THROW(csv::read(in), DomainError);
}

TEST(Csv, StrictNumbers) {
    EXPECT_EQ(csv::to_double("2.5", "x"), 2.5);
    EXPECT_EQ(csv::to_double("-1e3", "x"), -1000.0);
    for (const char* bad : {"", "abc", "1.5x", "nan", "inf"}) {
        try {
            csv::to_double(bad, "col");
            ADD_FAILURE() << bad;
        } catch (const DomainError& e) {
            EXPECT_EQ(e.field(), "col");
        }
    }
}

TEST(Rng, SeededReproducible) {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        (void)c.next_u64();
    }
    EXPECT_NE(Rng(42).next_u64(), Rng(43).next_u64());
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, RangesAndShuffle) {
    Rng rng(7);
    std::vector<int> hits(6, 0);
    for (int i = 0; i < 60000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ++hits[rng.below(6)];
    }
    for (int h : hits) EXPECT_NEAR(h, 10000, 500);
    std::vector<int> v(100);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(std::span(w));
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}

TEST(Parallel, CoversEveryIndexOnce) {
    for (std::size_t threads : {0u, 1u, 3u, 8u}) {
        std::vector<std::atomic<int>> seen(1000);
        parallel_for(seen.size(), [&](std::size_t i) { seen[i]++; }, threads);
        for (auto& s : seen) EXPECT_EQ(s.load(), 1);
    }
    parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsTaskFailure) {
    EXPECT_THROW(parallel_for(
                     100,
                     [](std::size_t i) {
                         if (i == 57) throw DomainError("i", "boom");
                     },
                     4),
                 DomainError);
}
