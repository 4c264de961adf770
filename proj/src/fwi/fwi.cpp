// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/fwi/fwi.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::fwi {

namespace {

using MonthTable = std::array<double, 12>;

// Effective day length Le (hours), DMC.
constexpr MonthTable kDayLengthN46 = {6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0};
constexpr MonthTable kDayLengthN20 = {7.9, 8.4, 8.9, 9.5, 9.9, 10.2, 10.1, 9.7, 9.1, 8.6, 8.1, 7.8};
constexpr MonthTable kDayLengthS20 = {10.1, 9.6, 9.1, 8.5, 8.1, 7.8, 7.9, 8.3, 8.9, 9.4, 9.9, 10.2};
constexpr MonthTable kDayLengthS40 = {11.5, 10.5, 9.2, 7.9, 6.8, 6.2, 6.5, 7.4, 8.7, 10.0, 11.2, 11.8};
constexpr double kDayLengthEquator = 9.0;

// Day-length adjustment Lf, DC.
constexpr MonthTable kDcFactorNorth = {-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6};
constexpr MonthTable kDcFactorSouth = {6.4, 5.0, 2.4, 0.4, -1.6, -1.6, -1.6, -1.6, -1.6, 0.9, 3.8, 5.8};
constexpr double kDcFactorEquator = 1.4;

void require_month(unsigned month) {
    if (month < 1 || month > 12) throw DomainError("month", "must be in [1, 12]");
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw DomainError(field, "must be finite");
}

double ffmc_to_moisture(double ffmc) { return 147.2 * (101.0 - ffmc) / (59.5 + ffmc); }

}  // namespace

LatitudeBand band_for_latitude(double lat) {
    if (!(lat >= -90.0 && lat <= 90.0)) throw DomainError("lat", "must be in [-90, 90]");
    if (lat >= 30.0) return LatitudeBand::North30To90;
    if (lat >= 10.0) return LatitudeBand::North10To30;
    if (lat > -10.0) return LatitudeBand::Equatorial;
    if (lat > -30.0) return LatitudeBand::South10To30;
    return LatitudeBand::South30To90;
}

LatitudeBand parse_latitude_band(std::string_view name) {
    if (name == "n30-90") return LatitudeBand::North30To90;
    if (name == "n10-30") return LatitudeBand::North10To30;
    if (name == "equatorial") return LatitudeBand::Equatorial;
    if (name == "s10-30") return LatitudeBand::South10To30;
    if (name == "s30-90") return LatitudeBand::South30To90;
    throw DomainError("latitude_band", "unknown band '" + std::string(name) + "'");
}

std::string_view to_string(LatitudeBand band) {
    switch (band) {
        case LatitudeBand::North30To90: return "n30-90";
        case LatitudeBand::North10To30: return "n10-30";
        case LatitudeBand::Equatorial: return "equatorial";
        case LatitudeBand::South10To30: return "s10-30";
        case LatitudeBand::South30To90: return "s30-90";
    }
    return "?";
}

double day_length(LatitudeBand band, unsigned month) {
    require_month(month);
    const auto i = month - 1;
    switch (band) {
        case LatitudeBand::North30To90: return kDayLengthN46[i];
        case LatitudeBand::North10To30: return kDayLengthN20[i];
        case LatitudeBand::Equatorial: return kDayLengthEquator;
        case LatitudeBand::South10To30: return kDayLengthS20[i];
        case LatitudeBand::South30To90: return kDayLengthS40[i];
    }
    return kDayLengthEquator;
}

double day_length_factor(LatitudeBand band, unsigned month) {
    require_month(month);
    const auto i = month - 1;
    switch (band) {
        case LatitudeBand::North30To90:
        case LatitudeBand::North10To30: return kDcFactorNorth[i];
        case LatitudeBand::Equatorial: return kDcFactorEquator;
        case LatitudeBand::South10To30:
        case LatitudeBand::South30To90: return kDcFactorSouth[i];
    }
    return kDcFactorEquator;
}

void validate(const WeatherObservation& obs) {
    if (!obs.date.ok()) throw DomainError("date", "invalid calendar date");
    require_month(obs.month());
    require_finite(obs.temp_c, "temp_c");
    require_finite(obs.rh_pct, "rh_pct");
    require_finite(obs.wind_kmh, "wind_kmh");
    require_finite(obs.rain_mm, "rain_mm");
    if (obs.rh_pct < 0.0 || obs.rh_pct > 100.0) throw DomainError("rh_pct", "must be in [0, 100]");
    if (obs.wind_kmh < 0.0) throw DomainError("wind_kmh", "must be >= 0");
    if (obs.rain_mm < 0.0) throw DomainError("rain_mm", "must be >= 0");
}

void validate(const FwiState& state) {
    if (!(state.ffmc >= 0.0 && state.ffmc <= 101.0)) throw DomainError("ffmc", "must be in [0, 101]");
    if (!(state.dmc >= 0.0) || !std::isfinite(state.dmc)) throw DomainError("dmc", "must be finite and >= 0");
    if (!(state.dc >= 0.0) || !std::isfinite(state.dc)) throw DomainError("dc", "must be finite and >= 0");
}

double update_ffmc(double prev, const WeatherObservation& obs) {
    validate(FwiState{prev, 0.0, 0.0});
    validate(obs);
    const double T = obs.temp_c;
    const double H = obs.rh_pct;
    const double W = obs.wind_kmh;
    const double r = obs.rain_mm;

    double m0 = ffmc_to_moisture(prev);
    if (r > 0.5) {
        const double rf = r - 0.5;
        double mr = m0 + 42.5 * rf * std::exp(-100.0 / (251.0 - m0)) * (1.0 - std::exp(-6.93 / rf));
        if (m0 > 150.0) mr += 0.0015 * (m0 - 150.0) * (m0 - 150.0) * std::sqrt(rf);
        m0 = std::min(mr, 250.0);
    }

    const double humid = 1.0 - std::exp(-0.115 * H);
    const double ed = 0.942 * std::pow(H, 0.679) + 11.0 * std::exp((H - 100.0) / 10.0) + 0.18 * (21.1 - T) * humid;
    double m = m0;
    if (m0 > ed) {
        const double h = H / 100.0;
        const double k0 = 0.424 * (1.0 - std::pow(h, 1.7)) + 0.0694 * std::sqrt(W) * (1.0 - std::pow(h, 8.0));
        const double kd = k0 * 0.581 * std::exp(0.0365 * T);
        m = ed + (m0 - ed) * std::pow(10.0, -kd);
    } else {
        const double ew =
            0.618 * std::pow(H, 0.753) + 10.0 * std::exp((H - 100.0) / 10.0) + 0.18 * (21.1 - T) * humid;
        if (m0 < ew) {
            const double h = (100.0 - H) / 100.0;
            const double k1 = 0.424 * (1.0 - std::pow(h, 1.7)) + 0.0694 * std::sqrt(W) * (1.0 - std::pow(h, 8.0));
            const double kw = k1 * 0.581 * std::exp(0.0365 * T);
            m = ew - (ew - m0) * std::pow(10.0, -kw);
        }
    }
    const double ffmc = 59.5 * (250.0 - m) / (147.2 + m);
    return std::clamp(ffmc, 0.0, 101.0);
}

double update_dmc(double prev, const WeatherObservation& obs, const FwiConfig& cfg) {
    validate(FwiState{85.0, prev, 0.0});
    validate(obs);
    const double T = obs.temp_c;
    const double H = obs.rh_pct;
    const double r = obs.rain_mm;

    double after_rain = prev;
    if (r > 1.5) {
        const double re = 0.92 * r - 1.27;
        const double m0 = 20.0 + 280.0 / std::exp(0.023 * prev);
        double b;
        if (prev <= 33.0) {
            b = 100.0 / (0.5 + 0.3 * prev);
        } else if (prev <= 65.0) {
            b = 14.0 - 1.3 * std::log(prev);
        } else {
            b = 6.2 * std::log(prev) - 17.2;
        }
        const double mr = m0 + 1000.0 * re / (48.77 + b * re);
        after_rain = std::max(43.43 * (5.6348 - std::log(mr - 20.0)), 0.0);
    }

    double drying = 0.0;
    if (T >= -1.1) drying = 1.894 * (T + 1.1) * (100.0 - H) * day_length(cfg.band, obs.month()) * 1e-4;
    return std::max(after_rain + drying, 0.0);
}

double update_dc(double prev, const WeatherObservation& obs, const FwiConfig& cfg) {
    validate(FwiState{85.0, 0.0, prev});
    validate(obs);
    const double r = obs.rain_mm;

    double after_rain = prev;
    if (r > 2.8) {
        const double rd = 0.83 * r - 1.27;
        const double q0 = 800.0 * std::exp(-prev / 400.0);
        after_rain = std::max(prev - 400.0 * std::log(1.0 + 3.937 * rd / q0), 0.0);
    }

    const double t = std::max(obs.temp_c, -2.8);
    const double pet = std::max(0.36 * (t + 2.8) + day_length_factor(cfg.band, obs.month()), 0.0);
    return after_rain + 0.5 * pet;
}

double compute_isi(double ffmc, double wind_kmh) {
    if (!(ffmc >= 0.0 && ffmc <= 101.0)) throw DomainError("ffmc", "must be in [0, 101]");
    if (!(wind_kmh >= 0.0) || !std::isfinite(wind_kmh)) throw DomainError("wind_kmh", "must be finite and >= 0");
    // FFMC 0 is fully saturated litter: no fine fuel available to carry spread.
    if (ffmc == 0.0) return 0.0;
    const double m = ffmc_to_moisture(ffmc);
    const double wind_fn = std::exp(0.05039 * wind_kmh);
    const double fuel_fn = 91.9 * std::exp(-0.1386 * m) * (1.0 + std::pow(m, 5.31) / 4.93e7);
    return 0.208 * wind_fn * fuel_fn;
}

double compute_bui(double dmc, double dc) {
    validate(FwiState{85.0, dmc, dc});
    if (dmc == 0.0) return 0.0;
    double bui;
    if (dmc <= 0.4 * dc) {
        bui = 0.8 * dmc * dc / (dmc + 0.4 * dc);
    } else {
        bui = dmc - (1.0 - 0.8 * dc / (dmc + 0.4 * dc)) * (0.92 + std::pow(0.0114 * dmc, 1.7));
    }
    return std::max(bui, 0.0);
}

double compute_fwi(double isi, double bui) {
    if (!(isi >= 0.0) || !std::isfinite(isi)) throw DomainError("isi", "must be finite and >= 0");
    if (!(bui >= 0.0) || !std::isfinite(bui)) throw DomainError("bui", "must be finite and >= 0");
    const double fd = bui <= 80.0 ? 0.626 * std::pow(bui, 0.809) + 2.0 : 1000.0 / (25.0 + 108.64 * std::exp(-0.023 * bui));
    const double b = 0.1 * isi * fd;
    if (b > 1.0) return std::exp(2.72 * std::pow(0.434 * std::log(b), 0.647));
    return b;
}

FwiReport step_day(const FwiState& state, const WeatherObservation& obs, const FwiConfig& cfg) {
    validate(state);
    validate(obs);
    FwiReport report;
    report.date = obs.date;
    report.state.ffmc = update_ffmc(state.ffmc, obs);
    report.state.dmc = update_dmc(state.dmc, obs, cfg);
    report.state.dc = update_dc(state.dc, obs, cfg);
    report.isi = compute_isi(report.state.ffmc, obs.wind_kmh);
    report.bui = compute_bui(report.state.dmc, report.state.dc);
    report.fwi = compute_fwi(report.isi, report.bui);
    return report;
}

std::vector<FwiReport> run_series(const FwiState& start, std::span<const WeatherObservation> series,
                                  const FwiConfig& cfg) {
    std::vector<FwiReport> reports;
    reports.reserve(series.size());
    FwiState state = start;
    for (const auto& obs : series) {
        reports.push_back(step_day(state, obs, cfg));
        state = reports.back().state;
    }
    return reports;
}

std::chrono::year_month_day parse_date(std::string_view iso) {
    auto field = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        const auto* first = iso.data() + pos;
        const auto [ptr, ec] = std::from_chars(first, first + len, v);
        if (ec != std::errc() || ptr != first + len) throw DomainError("date", "expected YYYY-MM-DD, got '" + std::string(iso) + "'");
        return v;
    };
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
        throw DomainError("date", "expected YYYY-MM-DD, got '" + std::string(iso) + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{field(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(field(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(field(8, 2))}};
    if (!ymd.ok()) throw DomainError("date", "not a calendar date: '" + std::string(iso) + "'");
    return ymd;
}

std::string format_date(std::chrono::year_month_day date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

}  // namespace pyrorisk::fwi
