// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/app/weather.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"

namespace pyrorisk::app {

namespace {

using std::chrono::sys_days;
using std::chrono::year_month_day;
using json = nlohmann::json;

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ProviderError(ProviderErrorKind::NotFound, "cannot read fixture " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProviderError schema_error(const std::string& pointer, const std::string& what) {
    ProviderError e(ProviderErrorKind::Parse, "malformed weather payload at " + pointer + ": " + what);
    e.pointer = pointer;
    return e;
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw schema_error(where + "/" + key, "missing field");
    if (!it->is_number()) throw schema_error(where + "/" + key, "expected a number");
    return it->get<double>();
}

}  // namespace

WeatherSeries read_weather_csv(std::istream& in) {
    const auto table = csv::read(in);
    const std::size_t c_date = table.column("date"), c_t = table.column("temp_c"), c_h = table.column("rh_pct"),
                      c_w = table.column("wind_kmh"), c_r = table.column("rain_mm");
    WeatherSeries s;
    const bool has_lat = table.has_column("lat"), has_lon = table.has_column("lon");
    for (const auto& row : table.rows) {
        fwi::WeatherObservation o;
        o.date = fwi::parse_date(row[c_date]);
        o.temp_c = csv::to_double(row[c_t], "temp_c");
        o.rh_pct = csv::to_double(row[c_h], "rh_pct");
        o.wind_kmh = csv::to_double(row[c_w], "wind_kmh");
        o.rain_mm = csv::to_double(row[c_r], "rain_mm");
        fwi::validate(o);
        if (!s.days.empty() && sys_days(o.date) != sys_days(s.days.back().date) + std::chrono::days(1)) {
            throw DomainError("date", "expected " + fwi::format_date(sys_days(s.days.back().date) + std::chrono::days(1)) +
                                          ", found " + fwi::format_date(o.date));
        }
        for (auto [has, col, slot] : {std::tuple{has_lat, "lat", &s.lat}, std::tuple{has_lon, "lon", &s.lon}}) {
            if (!has) continue;
            const double v = csv::to_double(row[table.column(col)], col);
            if (slot->has_value() && **slot != v) throw DomainError(col, "must be constant across rows");
            *slot = v;
        }
        s.days.push_back(o);
    }
    if (s.days.empty()) throw DomainError("weather", "no observations");
    if (s.lat && std::abs(*s.lat) > 90.0) throw DomainError("lat", "must be in [-90, 90]");
    if (s.lon && std::abs(*s.lon) > 180.0) throw DomainError("lon", "must be in [-180, 180]");
    return s;
}

WeatherSeries read_weather_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_weather_csv(in);
}

void write_fwi_report_csv(std::ostream& out, std::span<const fwi::FwiReport> reports) {
    out << "date,ffmc,dmc,dc,isi,bui,fwi\n";
    char buf[160];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%s,%.1f,%.1f,%.1f,%.1f,%.1f,%.1f\n", fwi::format_date(r.date).c_str(),
                      r.state.ffmc, r.state.dmc, r.state.dc, r.isi, r.bui, r.fwi);
        out << buf;
    }
}

void DateRange::validate() const {
    if (!from.ok() || !to.ok()) throw DomainError("date", "invalid calendar date");
    if (sys_days(from) > sys_days(to)) throw DomainError("from", "must not be after 'to'");
    if (days() > 3660) throw DomainError("to", "range longer than 3660 days");
}

std::size_t DateRange::days() const { return static_cast<std::size_t>((sys_days(to) - sys_days(from)).count() + 1); }

std::string_view to_string(ProviderErrorKind kind) {
    switch (kind) {
        case ProviderErrorKind::Network: return "network";
        case ProviderErrorKind::Http: return "http";
        case ProviderErrorKind::Parse: return "parse";
        case ProviderErrorKind::NotFound: return "not-found";
    }
    return "network";
}

DailyPayload parse_daily_payload(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body.begin(), body.end());
    } catch (const json::parse_error& ex) {
        ProviderError e(ProviderErrorKind::Parse,
                        "malformed weather payload at byte " + std::to_string(ex.byte) + ": " + ex.what());
        e.offset = ex.byte;
        throw e;
    }
    if (!doc.is_object()) throw schema_error("", "expected an object");
    DailyPayload p;
    p.lat = number_at(doc, "lat", "");
    p.lon = number_at(doc, "lon", "");
    const auto daily = doc.find("daily");
    if (daily == doc.end() || !daily->is_array()) throw schema_error("/daily", "expected an array");
    for (std::size_t i = 0; i < daily->size(); ++i) {
        const auto& d = (*daily)[i];
        const std::string where = "/daily/" + std::to_string(i);
        if (!d.is_object()) throw schema_error(where, "expected an object");
        const auto date = d.find("date");
        if (date == d.end() || !date->is_string()) throw schema_error(where + "/date", "expected a date string");
        fwi::WeatherObservation o;
        try {
            o.date = fwi::parse_date(date->get<std::string>());
        } catch (const DomainError& ex) {
            throw schema_error(where + "/date", ex.what());
        }
        o.temp_c = number_at(d, "temp_c", where);
        o.rh_pct = number_at(d, "rh_pct", where);
        o.wind_kmh = number_at(d, "wind_kmh", where);
        o.rain_mm = number_at(d, "rain_mm", where);
        fwi::validate(o);
        p.daily.push_back(o);
    }
    return p;
}

std::string encode_daily_payload(const DailyPayload& payload) {
    nlohmann::ordered_json doc;
    doc["lat"] = payload.lat;
    doc["lon"] = payload.lon;
    doc["daily"] = nlohmann::ordered_json::array();
    for (const auto& o : payload.daily) {
        nlohmann::ordered_json d;
        d["date"] = fwi::format_date(o.date);
        d["temp_c"] = o.temp_c;
        d["rh_pct"] = o.rh_pct;
        d["wind_kmh"] = o.wind_kmh;
        d["rain_mm"] = o.rain_mm;
        doc["daily"].push_back(std::move(d));
    }
    return doc.dump(2) + "\n";
}

FetchResult select_range(const DailyPayload& payload, const DateRange& range) {
    range.validate();
    std::map<sys_days, const fwi::WeatherObservation*> by_day;
    for (const auto& o : payload.daily) {
        if (!by_day.emplace(sys_days(o.date), &o).second) {
            throw schema_error("/daily", "duplicate date " + fwi::format_date(o.date));
        }
    }
    FetchResult r;
    r.lat = payload.lat;
    r.lon = payload.lon;
    for (sys_days d = sys_days(range.from); d <= sys_days(range.to); d += std::chrono::days(1)) {
        const auto it = by_day.find(d);
        if (it == by_day.end()) {
            r.gaps.emplace_back(d);
        } else {
            r.observations.push_back(*it->second);
        }
    }
    return r;
}

FetchResult FixtureProvider::fetch(double lat, double lon, const DateRange& range) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) throw ProviderError(ProviderErrorKind::NotFound, "fixture directory not found: " + dir_);
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(dir_)) {
        if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const auto payload = parse_daily_payload(read_text(f));
        if (std::abs(payload.lat - lat) <= 1e-4 && std::abs(payload.lon - lon) <= 1e-4) {
            return select_range(payload, range);
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f,%.4f", lat, lon);
    throw ProviderError(ProviderErrorKind::NotFound, "no fixture for location " + std::string(buf) + " in " + dir_);
}

HttpProvider::HttpProvider(HttpOptions options) : options_(std::move(options)) {
    if (options_.base_url.rfind("http://", 0) != 0) {
        throw DomainError("provider", "only http:// endpoints are supported");
    }
    if (options_.max_attempts < 1) throw DomainError("max_attempts", "must be >= 1");
    if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

FetchResult HttpProvider::fetch(double lat, double lon, const DateRange& range) {
    range.validate();
    const std::string& url = options_.base_url;
    const auto path_start = url.find('/', 7);
    const std::string host = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

    httplib::Client client(host);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    httplib::Headers headers;
    if (!options_.token.empty()) headers.emplace("Authorization", "Bearer " + options_.token);
    char coord[64];
    httplib::Params params;
    std::snprintf(coord, sizeof coord, "%.6f", lat);
    params.emplace("lat", coord);
    std::snprintf(coord, sizeof coord, "%.6f", lon);
    params.emplace("lon", coord);
    params.emplace("from", fwi::format_date(range.from));
    params.emplace("to", fwi::format_date(range.to));

    std::vector<std::chrono::milliseconds> waited;
    auto wait = options_.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        auto res = client.Get(prefix + "/daily", params, headers);
        std::optional<ProviderError> failure;
        if (!res) {
            failure.emplace(ProviderErrorKind::Network, "request to " + host + " failed: " + httplib::to_string(res.error()));
            failure->retryable = true;
        } else if (res->status == 200) {
            return select_range(parse_daily_payload(res->body), range);
        } else {
            failure.emplace(ProviderErrorKind::Http, "weather endpoint returned HTTP " + std::to_string(res->status));
            failure->http_status = res->status;
            failure->retryable = res->status == 429 || res->status >= 500;
        }
        failure->attempts = attempt;
        failure->backoff = waited;
        if (!failure->retryable || attempt >= options_.max_attempts) {
            if (failure->retryable) failure->next_backoff = wait;
            throw *failure;
        }
        options_.sleep(wait);
        waited.push_back(wait);
        wait = std::chrono::milliseconds(static_cast<long long>(wait.count() * options_.backoff_factor));
    }
}

void ProviderSpec::validate() const {
    if (endpoint.empty() == fixture_dir.empty()) {
        throw DomainError("provider", "exactly one of a live endpoint or a fixture directory must be set");
    }
}

ProviderSpec parse_provider(std::string_view text) {
    ProviderSpec s;
    if (text.rfind("fixture:", 0) == 0) {
        s.fixture_dir = std::string(text.substr(8));
    } else if (text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0) {
        s.endpoint = std::string(text);
    } else {
        throw DomainError("provider", "expected fixture:<dir> or an http:// URL, got '" + std::string(text) + "'");
    }
    s.validate();
    return s;
}

std::unique_ptr<WeatherProvider> make_provider(const ProviderSpec& spec) {
    spec.validate();
    if (!spec.fixture_dir.empty()) return std::make_unique<FixtureProvider>(spec.fixture_dir);
    HttpOptions o;
    o.base_url = spec.endpoint;
    o.token = spec.token;
    return std::make_unique<HttpProvider>(std::move(o));
}

}  // namespace pyrorisk::app
