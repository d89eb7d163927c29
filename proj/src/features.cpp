#include "stlf/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "stlf/error.hpp"

namespace stlf {

namespace {

constexpr std::int64_t kMaxMissingHours = 24;
constexpr std::ptrdiff_t kMedianHalfWidth = 12;  // 25-hour centred window
constexpr double kMadLimit = 5.0;
constexpr int kMaxSmoothingPasses = 100;
constexpr std::int64_t kWeekHours = 168;

std::int64_t day_number(Date d) {
  return std::chrono::sys_days(d).time_since_epoch().count();
}

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// One clamping pass over a snapshot of the values. Returns true if anything changed.
bool clamp_spikes(std::vector<double>& values) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::vector<double> snapshot = values;
  std::vector<double> window, dev;
  bool changed = false;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - kMedianHalfWidth);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + kMedianHalfWidth);
    window.assign(snapshot.begin() + lo, snapshot.begin() + hi + 1);
    const double med = median_of(window);
    dev.resize(window.size());
    for (std::size_t k = 0; k < window.size(); ++k) dev[k] = std::abs(window[k] - med);
    const double mad = median_of(dev);
    // The relative slack keeps rounding noise on flat stretches from counting.
    const double limit = kMadLimit * mad + 1e-9 * std::abs(med);
    if (std::abs(snapshot[i] - med) > limit) {
      values[i] = med;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

void HolidayCalendar::add(Date d) {
  if (!d.ok()) throw Error("invalid holiday date");
  days_.insert(day_number(d));
}

bool HolidayCalendar::contains(Date d) const { return days_.count(day_number(d)) > 0; }

std::array<double, kFeatureCount> FeatureRow::inputs() const {
  return {static_cast<double>(hour), static_cast<double>(day_of_week),
          static_cast<double>(is_working), dry_bulb, dew_point, lag_prior_hour,
          lag_prior_day, lag_prior_week};
}

HourlySeries clean(const HourlySeries& series) {
  if (series.entries.empty()) throw DataError("clean: empty series");
  std::vector<Observation> sorted = series.entries;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Observation& a, const Observation& b) { return a.time < b.time; });
  for (const auto& o : sorted)
    if (!std::isfinite(o.value))
      throw DataError("clean: non-finite value at " + o.time.to_string());

  // Collapse duplicates by mean.
  std::vector<Observation> unique;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].time == sorted[i].time) sum += sorted[j++].value;
    unique.push_back({sorted[i].time, sum / static_cast<double>(j - i)});
    i = j;
  }

  // Fill gaps by linear interpolation.
  HourlySeries out{series.kind, {}};
  out.entries.reserve(static_cast<std::size_t>(unique.back().time - unique.front().time) + 1);
  out.entries.push_back(unique.front());
  for (std::size_t i = 1; i < unique.size(); ++i) {
    const Observation& a = unique[i - 1];
    const Observation& b = unique[i];
    const std::int64_t step = b.time - a.time;
    if (step - 1 > kMaxMissingHours)
      throw DataError("clean: gap of " + std::to_string(step - 1) + " missing hours between " +
                      a.time.to_string() + " and " + b.time.to_string());
    for (std::int64_t k = 1; k < step; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(step);
      out.entries.push_back({a.time + k, a.value + f * (b.value - a.value)});
    }
    out.entries.push_back(b);
  }

  std::vector<double> values(out.entries.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = out.entries[i].value;
  for (int pass = 0; pass < kMaxSmoothingPasses && clamp_spikes(values); ++pass) {
  }
  for (std::size_t i = 0; i < values.size(); ++i) out.entries[i].value = values[i];
  return out;
}

MergedTable merge(const HourlySeries& load, const HourlySeries& dry_bulb,
                  const HourlySeries& dew_point) {
  std::unordered_map<std::int64_t, double> dry, dew;
  for (const auto& o : dry_bulb.entries) dry[o.time.hours()] = o.value;
  for (const auto& o : dew_point.entries) dew[o.time.hours()] = o.value;
  MergedTable out;
  for (const auto& o : load.entries) {
    const auto d = dry.find(o.time.hours());
    const auto w = dew.find(o.time.hours());
    if (d != dry.end() && w != dew.end()) out.push_back({o.time, o.value, d->second, w->second});
  }
  if (out.empty()) throw DataError("merge: load and weather series share no timestamps");
  std::stable_sort(out.begin(), out.end(),
                   [](const MergedRow& a, const MergedRow& b) { return a.time < b.time; });
  return out;
}

std::vector<FeatureRow> extract_features(const MergedTable& merged,
                                         const HolidayCalendar& calendar) {
  if (merged.empty()) throw DataError("extract_features: empty table");
  const Timestamp first = merged.front().time;
  const std::int64_t covered = merged.back().time - first + 1;
  if (covered <= kWeekHours)
    throw DataError("extract_features: need more than 168 hours of data, got " +
                    std::to_string(covered));
  std::unordered_map<std::int64_t, double> load;
  load.reserve(merged.size());
  for (const auto& r : merged) load[r.time.hours()] = r.load;
  auto lookup = [&](Timestamp t, double& out) {
    const auto it = load.find(t.hours());
    if (it == load.end()) return false;
    out = it->second;
    return true;
  };

  std::vector<FeatureRow> rows;
  for (const auto& r : merged) {
    if (r.time - first < kWeekHours) continue;
    FeatureRow f;
    if (!lookup(r.time - 1, f.lag_prior_hour) || !lookup(r.time - 24, f.lag_prior_day) ||
        !lookup(r.time - kWeekHours, f.lag_prior_week))
      continue;
    f.time = r.time;
    f.hour = r.time.hour();
    f.day_of_week = r.time.day_of_week();
    f.is_working = (f.day_of_week >= 6 || calendar.contains(r.time.date())) ? 0 : 1;
    f.dry_bulb = r.dry_bulb;
    f.dew_point = r.dew_point;
    f.target = r.load;
    rows.push_back(f);
  }
  return rows;
}

NormStats fit_normalizer(std::span<const FeatureRow> rows) {
  if (rows.empty()) throw DataError("fit_normalizer: no training rows");
  NormStats s;
  const auto first = rows.front().inputs();
  for (std::size_t c = 0; c < kFeatureCount; ++c) s.inputs[c] = {first[c], first[c]};
  s.target = {rows.front().target, rows.front().target};
  for (const auto& r : rows) {
    const auto x = r.inputs();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      s.inputs[c].min = std::min(s.inputs[c].min, x[c]);
      s.inputs[c].max = std::max(s.inputs[c].max, x[c]);
    }
    s.target.min = std::min(s.target.min, r.target);
    s.target.max = std::max(s.target.max, r.target);
  }
  for (std::size_t c = 0; c < kFeatureCount; ++c)
    if (!(s.inputs[c].max > s.inputs[c].min))
      throw DataError("fit_normalizer: column '" + std::string(kFeatureNames[c]) +
                      "' is constant in the training split");
  if (!(s.target.max > s.target.min)) throw DataError("fit_normalizer: target is constant");
  return s;
}

double scale(double value, const ColumnRange& r) {
  return 2.0 * (value - r.min) / (r.max - r.min) - 1.0;
}

double unscale(double scaled, const ColumnRange& r) {
  return (scaled + 1.0) * 0.5 * (r.max - r.min) + r.min;
}

Vector normalize_inputs(const FeatureRow& row, const NormStats& stats) {
  const auto x = row.inputs();
  Vector v(kFeatureCount);
  for (std::size_t c = 0; c < kFeatureCount; ++c) v[c] = scale(x[c], stats.inputs[c]);
  return v;
}

std::vector<Sample> normalize(std::span<const FeatureRow> rows, const NormStats& stats) {
  std::vector<Sample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({normalize_inputs(r, stats), {scale(r.target, stats.target)}});
  return out;
}

Vector denormalize_target(std::span<const double> values, const NormStats& stats) {
  Vector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = unscale(values[i], stats.target);
  return out;
}

std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> split(std::span<const FeatureRow> rows,
                                                                  Timestamp boundary) {
  std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> out;
  for (const auto& r : rows) (r.time < boundary ? out.first : out.second).push_back(r);
  if (out.first.empty())
    throw DataError("split: no rows before " + boundary.to_string() + " (empty training set)");
  if (out.second.empty())
    throw DataError("split: no rows at or after " + boundary.to_string() + " (empty test set)");
  return out;
}

std::vector<Window> make_windows(std::span<const FeatureRow> rows, const NormStats& stats,
                                 std::size_t length) {
  if (length < 1) throw Error("make_windows: window length must be >= 1");
  std::vector<Window> out;
  std::size_t start = 0;
  while (start + length <= rows.size()) {
    bool contiguous = true;
    for (std::size_t k = 1; k < length; ++k) {
      if (rows[start + k].time - rows[start + k - 1].time != 1) {
        start += k;
        contiguous = false;
        break;
      }
    }
    if (!contiguous) continue;
    Window w;
    for (std::size_t k = 0; k < length; ++k) {
      w.inputs.push_back(normalize_inputs(rows[start + k], stats));
      w.targets.push_back({scale(rows[start + k].target, stats.target)});
    }
    out.push_back(std::move(w));
    start += length;
  }
  return out;
}

}  // namespace stlf
