#include "stlf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "stlf/error.hpp"

namespace stlf::csv {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Error("not a finite number: '" + std::string(text) + "'");
  return v;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "': file not found or unreadable");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Calls fn(fields, line_number) for each data line after checking the header.
template <typename Fn>
void for_each_record(const fs::path& path, std::string_view header, Fn&& fn) {
  const std::string text = read_text(path);
  std::size_t line_no = 0, pos = 0;
  bool seen_header = false;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (!seen_header) {
      if (line != header)
        throw ParseError(path.string(), line_no, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    try {
      fn(fields, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  if (!seen_header) throw ParseError(path.string(), line_no, "missing header");
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t n) {
  if (f.size() != n)
    throw Error("expected " + std::to_string(n) + " fields, found " + std::to_string(f.size()));
}

int parse_int_field(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

HourlySeries read_load(const fs::path& path) {
  HourlySeries s{SeriesKind::Load, {}};
  for_each_record(path, kLoadHeader, [&](const auto& f, std::size_t) {
    expect_fields(f, 2);
    s.entries.push_back({Timestamp::parse(f[0]), parse_double(f[1])});
  });
  return s;
}

void write_load(const fs::path& path, const HourlySeries& load) {
  std::string out(kLoadHeader);
  out += '\n';
  for (const auto& o : load.entries) out += o.time.to_string() + ',' + format_double(o.value) + '\n';
  write_text(path, out);
}

Weather read_weather(const fs::path& path) {
  Weather w;
  for_each_record(path, kWeatherHeader, [&](const auto& f, std::size_t) {
    expect_fields(f, 3);
    const Timestamp t = Timestamp::parse(f[0]);
    w.dry_bulb.entries.push_back({t, parse_double(f[1])});
    w.dew_point.entries.push_back({t, parse_double(f[2])});
  });
  return w;
}

void write_weather(const fs::path& path, const HourlySeries& dry_bulb,
                   const HourlySeries& dew_point) {
  if (dry_bulb.entries.size() != dew_point.entries.size())
    throw Error("write_weather: dry-bulb and dew-point series differ in length");
  std::string out(kWeatherHeader);
  out += '\n';
  for (std::size_t i = 0; i < dry_bulb.entries.size(); ++i) {
    if (dry_bulb.entries[i].time != dew_point.entries[i].time)
      throw Error("write_weather: series timestamps differ");
    out += dry_bulb.entries[i].time.to_string() + ',' + format_double(dry_bulb.entries[i].value) +
           ',' + format_double(dew_point.entries[i].value) + '\n';
  }
  write_text(path, out);
}

std::string prepared_line(const FeatureRow& r) {
  std::string s = r.time.to_string();
  s += ',' + std::to_string(r.hour) + ',' + std::to_string(r.day_of_week) + ',' +
       std::to_string(r.is_working);
  for (double v : {r.dry_bulb, r.dew_point, r.lag_prior_hour, r.lag_prior_day, r.lag_prior_week,
                   r.target})
    s += ',' + format_double(v);
  return s;
}

std::vector<FeatureRow> read_prepared(const fs::path& path) {
  std::vector<FeatureRow> rows;
  for_each_record(path, kPreparedHeader, [&](const auto& f, std::size_t) {
    expect_fields(f, 10);
    FeatureRow r;
    r.time = Timestamp::parse(f[0]);
    r.hour = parse_int_field(f[1]);
    r.day_of_week = parse_int_field(f[2]);
    r.is_working = parse_int_field(f[3]);
    if (r.hour < 0 || r.hour > 23) throw Error("hour out of range [0, 23]");
    if (r.day_of_week < 1 || r.day_of_week > 7) throw Error("day_of_week out of range [1, 7]");
    if (r.is_working != 0 && r.is_working != 1) throw Error("is_working must be 0 or 1");
    r.dry_bulb = parse_double(f[4]);
    r.dew_point = parse_double(f[5]);
    r.lag_prior_hour = parse_double(f[6]);
    r.lag_prior_day = parse_double(f[7]);
    r.lag_prior_week = parse_double(f[8]);
    r.target = parse_double(f[9]);
    rows.push_back(r);
  });
  return rows;
}

void write_prepared(const fs::path& path, const std::vector<FeatureRow>& rows) {
  std::string out(kPreparedHeader);
  out += '\n';
  for (const auto& r : rows) out += prepared_line(r) + '\n';
  write_text(path, out);
}

HolidayCalendar read_holidays(const fs::path& path) {
  const std::string text = read_text(path);
  HolidayCalendar cal;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      cal.add(parse_date(std::string_view(line).substr(b, e - b + 1)));
    } catch (const Error& err) {
      throw ParseError(path.string(), line_no, err.what());
    }
  }
  return cal;
}

}  // namespace stlf::csv
