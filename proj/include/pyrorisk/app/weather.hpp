// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pyrorisk/fwi/fwi.hpp"

namespace pyrorisk::app {

/// Daily observations for one station, strictly consecutive dates.
struct WeatherSeries {
    std::optional<double> lat;
    std::optional<double> lon;
    std::vector<fwi::WeatherObservation> days;
};

/// Columns date,temp_c,rh_pct,wind_kmh,rain_mm plus optional lat,lon
/// (constant across rows). Rows must be consecutive days.
WeatherSeries read_weather_csv(std::istream& in);
WeatherSeries read_weather_csv_file(const std::string& path);

/// `date,ffmc,dmc,dc,isi,bui,fwi` with one decimal.
void write_fwi_report_csv(std::ostream& out, std::span<const fwi::FwiReport> reports);

struct DateRange {
    std::chrono::year_month_day from;
    std::chrono::year_month_day to;

    /// Throws DomainError unless from <= to and the span is at most 3660 days.
    void validate() const;
    std::size_t days() const;
};

/// Recorded provider response:
///   {"lat": .., "lon": .., "daily": [{"date": "YYYY-MM-DD", "temp_c": ..,
///     "rh_pct": .., "wind_kmh": .., "rain_mm": ..}, ...]}
struct DailyPayload {
    double lat = 0.0;
    double lon = 0.0;
    std::vector<fwi::WeatherObservation> daily;
};

enum class ProviderErrorKind { Network, Http, Parse, NotFound };

std::string_view to_string(ProviderErrorKind kind);

class ProviderError : public std::runtime_error {
public:
    ProviderError(ProviderErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ProviderErrorKind kind() const { return kind_; }

    bool retryable = false;
    int attempts = 0;
    std::vector<std::chrono::milliseconds> backoff;  // waits already taken
    std::optional<std::chrono::milliseconds> next_backoff;
    std::optional<std::size_t> offset;  // byte offset of a syntax error
    std::string pointer;                // JSON pointer of a schema error
    int http_status = 0;

private:
    ProviderErrorKind kind_;
};

/// Throws ProviderError(Parse) on malformed JSON or schema violations, and
/// DomainError on observations outside their physical range.
DailyPayload parse_daily_payload(std::string_view body);
/// Canonical serialization used for recorded fixtures.
std::string encode_daily_payload(const DailyPayload& payload);

struct FetchResult {
    double lat = 0.0;
    double lon = 0.0;
    std::vector<fwi::WeatherObservation> observations;  // date order
    std::vector<std::chrono::year_month_day> gaps;      // requested days with no data
};

/// Keeps the payload days inside `range`, reporting missing days as gaps.
/// Duplicate dates are a parse error.
FetchResult select_range(const DailyPayload& payload, const DateRange& range);

class WeatherProvider {
public:
    virtual ~WeatherProvider() = default;
    virtual std::string id() const = 0;
    virtual FetchResult fetch(double lat, double lon, const DateRange& range) = 0;
};

/// Replays recorded payloads from a directory of *.json files; the file
/// whose lat/lon match within 1e-4 degrees is used.
class FixtureProvider : public WeatherProvider {
public:
    explicit FixtureProvider(std::string directory) : dir_(std::move(directory)) {}
    std::string id() const override { return "fixture"; }
    FetchResult fetch(double lat, double lon, const DateRange& range) override;

private:
    std::string dir_;
};

struct HttpOptions {
    std::string base_url;  // http://host[:port][/prefix]
    std::string token;     // sent as a Bearer token when non-empty
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{250};
    double backoff_factor = 2.0;
    std::chrono::seconds timeout{10};
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

/// GET {base}/daily?lat=..&lon=..&from=..&to=.. returning a DailyPayload.
/// Connection failures, 429 and 5xx are retried with exponential backoff.
class HttpProvider : public WeatherProvider {
public:
    explicit HttpProvider(HttpOptions options);
    std::string id() const override { return "http"; }
    FetchResult fetch(double lat, double lon, const DateRange& range) override;

private:
    HttpOptions options_;
};

/// Exactly one of endpoint / fixture_dir is set.
struct ProviderSpec {
    std::string endpoint;
    std::string fixture_dir;
    std::string token;

    void validate() const;
};

/// "fixture:<dir>" or an http:// URL.
ProviderSpec parse_provider(std::string_view text);
std::unique_ptr<WeatherProvider> make_provider(const ProviderSpec& spec);

}  // namespace pyrorisk::app
