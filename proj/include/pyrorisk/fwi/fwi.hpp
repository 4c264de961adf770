// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Canadian Forest Fire Weather Index System (Van Wagner 1987 equation set).
///
/// Three moisture codes carry state from one day to the next:
///   FFMC  Fine Fuel Moisture Code, surface litter, range [0, 101]
///   DMC   Duff Moisture Code, loosely compacted duff, >= 0
///   DC    Drought Code, deep compact organic layer, >= 0
/// and three behaviour indices are derived from them each day:
///   ISI   Initial Spread Index  = f(FFMC, wind)
///   BUI   Buildup Index         = f(DMC, DC)
///   FWI   Fire Weather Index    = f(ISI, BUI)
///
/// Constants, by code:
///
/// FFMC
///   m0 = 147.2 (101 - F0) / (59.5 + F0)                     fuel moisture from code
///   rain: rf = r - 0.5 when r > 0.5
///         mr = m0 + 42.5 rf e^(-100/(251-m0)) (1 - e^(-6.93/rf))
///              [+ 0.0015 (m0-150)^2 sqrt(rf) when m0 > 150], capped at 250
///   Ed = 0.942 H^0.679 + 11 e^((H-100)/10) + 0.18 (21.1-T)(1 - e^(-0.115 H))
///   Ew = 0.618 H^0.753 + 10 e^((H-100)/10) + 0.18 (21.1-T)(1 - e^(-0.115 H))
///   drying  k = (0.424 (1-(H/100)^1.7) + 0.0694 sqrt(W)(1-(H/100)^8)) 0.581 e^(0.0365 T)
///   wetting k = same with (100-H)/100 in place of H/100
///   m = Ed + (m0-Ed) 10^-k  |  Ew - (Ew-m0) 10^-k  |  m0
///   F = 59.5 (250 - m) / (147.2 + m), clamped to [0, 101]
///
/// DMC
///   drying K = 1.894 (T + 1.1)(100 - H) Le 1e-4, zero when T < -1.1
///   rain (r > 1.5): re = 0.92 r - 1.27; M0 = 20 + 280 / e^(0.023 P0)
///         b = 100/(0.5 + 0.3 P0) | 14 - 1.3 ln P0 | 6.2 ln P0 - 17.2 (P0 <= 33 | <= 65 | above)
///         Mr = M0 + 1000 re / (48.77 + b re); Pr = 43.43 (5.6348 - ln(Mr - 20))
///   Le = monthly effective day length, selected by latitude band
///
/// DC
///   potential evapotranspiration V = 0.36 (T + 2.8) + Lf, T floored at -2.8, V floored at 0
///   rain (r > 2.8): rd = 0.83 r - 1.27; Q0 = 800 e^(-D0/400); Dr = D0 - 400 ln(1 + 3.937 rd / Q0)
///   D = max(Dr, 0) + 0.5 V
///   Lf = monthly day-length adjustment, selected by latitude band
///
/// ISI = 0.208 e^(0.05039 W) 91.9 e^(-0.1386 m) (1 + m^5.31 / 4.93e7)
/// BUI = 0.8 P D / (P + 0.4 D)                                  when P <= 0.4 D
///     = P - (1 - 0.8 D / (P + 0.4 D)) (0.92 + (0.0114 P)^1.7)  otherwise, floored at 0
/// FWI: fD = 0.626 U^0.809 + 2 (U <= 80) | 1000 / (25 + 108.64 e^(-0.023 U))
///      B = 0.1 R fD; FWI = e^(2.72 (0.434 ln B)^0.647) when B > 1, else B
namespace pyrorisk::fwi {

/// Day-length tables. The 30N-90N table is the Canadian standard (46N
/// reference latitude) and the default.
enum class LatitudeBand {
    North30To90,
    North10To30,
    Equatorial,
    South10To30,
    South30To90,
};

LatitudeBand band_for_latitude(double lat_deg);
LatitudeBand parse_latitude_band(std::string_view name);
std::string_view to_string(LatitudeBand band);

struct FwiConfig {
    LatitudeBand band = LatitudeBand::North30To90;
};

struct WeatherObservation {
    std::chrono::year_month_day date;
    double temp_c = 0.0;
    double rh_pct = 0.0;
    double wind_kmh = 0.0;
    double rain_mm = 0.0;

    unsigned month() const { return static_cast<unsigned>(date.month()); }
};

struct FwiState {
    double ffmc = 85.0;
    double dmc = 6.0;
    double dc = 15.0;
};

struct FwiReport {
    std::chrono::year_month_day date;
    FwiState state;
    double isi = 0.0;
    double bui = 0.0;
    double fwi = 0.0;
};

/// Throws DomainError naming the first field out of range.
void validate(const WeatherObservation& obs);
void validate(const FwiState& state);

double update_ffmc(double prev_ffmc, const WeatherObservation& obs);
double update_dmc(double prev_dmc, const WeatherObservation& obs, const FwiConfig& cfg = {});
double update_dc(double prev_dc, const WeatherObservation& obs, const FwiConfig& cfg = {});
double compute_isi(double ffmc, double wind_kmh);
double compute_bui(double dmc, double dc);
double compute_fwi(double isi, double bui);

FwiReport step_day(const FwiState& state, const WeatherObservation& obs, const FwiConfig& cfg = {});

/// Threads the moisture codes through a daily series.
std::vector<FwiReport> run_series(const FwiState& start, std::span<const WeatherObservation> series,
                                  const FwiConfig& cfg = {});

double day_length(LatitudeBand band, unsigned month);
double day_length_factor(LatitudeBand band, unsigned month);

std::chrono::year_month_day parse_date(std::string_view iso);
std::string format_date(std::chrono::year_month_day date);

}  // namespace pyrorisk::fwi
