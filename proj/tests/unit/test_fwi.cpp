// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/rng.hpp"
#include "pyrorisk/fwi/fwi.hpp"
#include "test_util.hpp"

using namespace pyrorisk;
using namespace pyrorisk::fwi;

namespace {

WeatherObservation obs(double t, double h, double w, double r, unsigned month = 4) {
    using namespace std::chrono;
    return {year{2024} / month / day{13}, t, h, w, r};
}

struct RefRow {
    WeatherObservation w;
    double ffmc, dmc, dc, isi, bui, fwi;
};

std::vector<RefRow> reference_rows() {
    const auto t = csv::read_file(test::data_path("fwi_reference.csv"));
    std::vector<RefRow> rows;
    for (const auto& r : t.rows) {
        auto d = [&](const char* c) { return csv::to_double(r[t.column(c)], c); };
        rows.push_back({{parse_date(r[t.column("date")]), d("temp_c"), d("rh_pct"), d("wind_kmh"), d("rain_mm")},
                        d("ffmc"), d("dmc"), d("dc"), d("isi"), d("bui"), d("fwi")});
    }
    return rows;
}

}  // namespace

TEST(FwiReference, ChainMatchesEveryRowWithinTenth) {
    const auto rows = reference_rows();
    ASSERT_EQ(rows.size(), 60u);
    FwiState s;
    for (const auto& row : rows) {
        const auto rep = step_day(s, row.w);
        EXPECT_NEAR(rep.state.ffmc, row.ffmc, 0.1) << format_date(row.w.date);
        EXPECT_NEAR(rep.state.dmc, row.dmc, 0.1) << format_date(row.w.date);
        EXPECT_NEAR(rep.state.dc, row.dc, 0.1) << format_date(row.w.date);
        EXPECT_NEAR(rep.isi, row.isi, 0.1) << format_date(row.w.date);
        EXPECT_NEAR(rep.bui, row.bui, 0.1) << format_date(row.w.date);
        EXPECT_NEAR(rep.fwi, row.fwi, 0.1) << format_date(row.w.date);
        s = rep.state;
    }
}

TEST(FwiReference, PublishedFirstDay) {
    const auto rep = step_day(FwiState{}, obs(17, 42, 25, 0));
    EXPECT_NEAR(rep.state.ffmc, 87.7, 0.1);
    EXPECT_NEAR(rep.state.dmc, 8.5, 0.1);
    EXPECT_NEAR(rep.state.dc, 19.0, 0.1);
    EXPECT_NEAR(rep.isi, 10.9, 0.1);
    EXPECT_NEAR(rep.bui, 8.5, 0.1);
    EXPECT_NEAR(rep.fwi, 10.1, 0.1);
}

TEST(FwiReference, SeriesCoversStressBranches) {
    const auto rows = reference_rows();
    bool high_bui = false, high_dmc = false, heavy_rain = false, cold = false;
    for (const auto& r : rows) {
        high_bui |= r.bui > 80;
        high_dmc |= r.dmc > 65;
        heavy_rain |= r.w.rain_mm > 50;
        cold |= r.w.temp_c < -2.8;
    }
    EXPECT_TRUE(high_bui && high_dmc && heavy_rain && cold);
}

TEST(Ffmc, DryingMonotoneInHumidity) {
    const double wet = update_ffmc(0, obs(20, 100, 10, 0));
    const double dry = update_ffmc(0, obs(20, 10, 10, 0));
    EXPECT_GE(wet, 0.0);
    EXPECT_LE(wet, 101.0);
    EXPECT_LE(wet, dry);
}

TEST(Ffmc, HeavyRainWets) { EXPECT_LT(update_ffmc(85, obs(5, 100, 0, 100)), 85.0); }

TEST(Ffmc, RainReducesResult) { EXPECT_LT(update_ffmc(85, obs(17, 42, 25, 5)), update_ffmc(85, obs(17, 42, 25, 0))); }

TEST(Dmc, ColdFloorKeepsZero) { EXPECT_EQ(update_dmc(0, obs(-1.1, 50, 10, 0)), 0.0); }

TEST(Dmc, ColdBelowFloor) { EXPECT_EQ(update_dmc(0, obs(-5, 50, 10, 0)), 0.0); }

TEST(Dmc, RainReduces) { EXPECT_LT(update_dmc(6, obs(17, 42, 25, 20)), update_dmc(6, obs(17, 42, 25, 0))); }

TEST(Dc, NoDryingBelowFloorInWinter) { EXPECT_DOUBLE_EQ(update_dc(15, obs(-2.8, 50, 10, 0, 1)), 15.0); }

TEST(Dc, AprilAddsDayLengthFactor) { EXPECT_NEAR(update_dc(15, obs(-5, 50, 10, 0, 4)), 15.0 + 0.5 * 0.9, 1e-12); }

TEST(Dc, RainRecharges) { EXPECT_LT(update_dc(400, obs(17, 42, 25, 50)), 400.0); }

TEST(Isi, ZeroFfmcGivesZero) {
    for (double w : {0.0, 10.0, 60.0}) EXPECT_EQ(compute_isi(0, w), 0.0);
}

TEST(Isi, IncreasingInWind) { EXPECT_GT(compute_isi(90, 20), compute_isi(90, 10)); }

TEST(Bui, ZeroDmcGivesZero) {
    EXPECT_EQ(compute_bui(0, 100), 0.0);
    EXPECT_EQ(compute_bui(0, 0), 0.0);
}

TEST(Bui, ClosedFormAtFiftyFifty) {
    // P <= 0.4 D is false, so the second branch applies.
    const double p = 50, d = 50;
    const double expected = p - (1 - 0.8 * d / (p + 0.4 * d)) * (0.92 + std::pow(0.0114 * p, 1.7));
    EXPECT_NEAR(compute_bui(p, d), expected, 1e-12);
    EXPECT_NEAR(compute_bui(p, d), 49.4409, 1e-4);
}

TEST(FwiIndex, ZeroIsiGivesZero) {
    for (double b : {0.0, 10.0, 50.0, 500.0}) EXPECT_EQ(compute_fwi(0, b), 0.0);
}

TEST(FwiIndex, MonotoneInBuildup) { EXPECT_GE(compute_fwi(10, 100), compute_fwi(10, 10)); }

TEST(FwiIndex, PositiveWhenIsiPositive) { EXPECT_GT(compute_fwi(0.01, 0), 0.0); }

TEST(StepDay, Deterministic) {
    const auto a = step_day(FwiState{}, obs(17, 42, 25, 0));
    const auto b = step_day(FwiState{}, obs(17, 42, 25, 0));
    EXPECT_EQ(a.state.ffmc, b.state.ffmc);
    EXPECT_EQ(a.state.dmc, b.state.dmc);
    EXPECT_EQ(a.state.dc, b.state.dc);
    EXPECT_EQ(a.fwi, b.fwi);
}

TEST(StepDay, SeriesThreadsState) {
    std::vector<WeatherObservation> series;
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        auto o = obs(rng.uniform(0, 30), rng.uniform(20, 90), rng.uniform(0, 40), rng.uniform() < 0.3 ? 5.0 : 0.0);
        o.date = std::chrono::sys_days(o.date) + std::chrono::days(i);
        series.push_back(o);
    }
    const auto reps = run_series(FwiState{}, series);
    ASSERT_EQ(reps.size(), 30u);
    FwiState s;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        const auto expect = step_day(s, series[k]);
        EXPECT_EQ(reps[k].state.ffmc, expect.state.ffmc);
        EXPECT_EQ(reps[k].state.dmc, expect.state.dmc);
        EXPECT_EQ(reps[k].state.dc, expect.state.dc);
        s = reps[k].state;
    }
}

TEST(FwiInvariants, RandomWalkStaysInRange) {
    Rng rng(1987);
    FwiState s;
    for (int step = 0; step < 1000; ++step) {
        auto o = obs(rng.uniform(-30, 45), rng.uniform(0, 100), rng.uniform(0, 100),
                     rng.uniform() < 0.3 ? rng.uniform(0, 120) : 0.0, 1 + static_cast<unsigned>(rng.below(12)));
        const auto rep = step_day(s, o);
        ASSERT_GE(rep.state.ffmc, 0.0);
        ASSERT_LE(rep.state.ffmc, 101.0);
        for (double v : {rep.state.dmc, rep.state.dc, rep.isi, rep.bui, rep.fwi}) {
            ASSERT_TRUE(std::isfinite(v));
            ASSERT_GE(v, 0.0);
        }
        if (rep.isi == 0.0) {
            ASSERT_EQ(rep.fwi, 0.0);
        }
        s = rep.state;
    }
}

TEST(FwiValidation, RejectsOutOfRangeFieldsByName) {
    try {
        update_ffmc(85, obs(17, 120, 25, 0));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.field(), "rh_pct");
    }
    EXPECT_THROW(update_ffmc(102, obs(17, 42, 25, 0)), DomainError);
    EXPECT_THROW(update_dmc(-1, obs(17, 42, 25, 0)), DomainError);
    EXPECT_THROW(update_dc(15, obs(17, 42, -1, 0)), DomainError);
    EXPECT_THROW(update_dc(15, obs(17, 42, 1, -0.1)), DomainError);
    EXPECT_THROW(compute_isi(50, -1), DomainError);
    EXPECT_THROW(compute_bui(-1, 5), DomainError);
    EXPECT_THROW(compute_fwi(std::nan(""), 5), DomainError);
}

TEST(DayLength, BandsAndParsing) {
    EXPECT_DOUBLE_EQ(day_length(LatitudeBand::North30To90, 4), 12.8);
    EXPECT_DOUBLE_EQ(day_length_factor(LatitudeBand::North30To90, 4), 0.9);
    EXPECT_EQ(band_for_latitude(46.0), LatitudeBand::North30To90);
    EXPECT_EQ(band_for_latitude(-40.0), LatitudeBand::South30To90);
    EXPECT_EQ(parse_latitude_band("equatorial"), LatitudeBand::Equatorial);
    EXPECT_THROW(parse_latitude_band("north"), DomainError);
    EXPECT_THROW(day_length(LatitudeBand::North30To90, 13), DomainError);
}

TEST(Dates, StrictIsoParsing) {
    EXPECT_EQ(format_date(parse_date("2024-02-29")), "2024-02-29");
    EXPECT_THROW(parse_date("2023-02-29"), DomainError);
    EXPECT_THROW(parse_date("2024-2-01"), DomainError);
    EXPECT_THROW(parse_date("2024-02-01x"), DomainError);
}
