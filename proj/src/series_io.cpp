#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "smlink/reconstruction.hpp"

namespace smlink {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
}

// "YYYY-MM-DD HH:MM:SS" or with 'T'; returns seconds since the epoch.
bool parse_timestamp(std::string_view text, double& seconds_out) {
  int y, mo, d, h, mi, s;
  char sep;
  if (std::sscanf(std::string(text).c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep,
                  &h, &mi, &s) != 7)
    return false;
  if ((sep != ' ' && sep != 'T') || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 ||
      h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
    return false;
  seconds_out = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 +
                h * 3600.0 + mi * 60.0 + s;
  return true;
}

bool parse_number(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::string_view trim(std::string_view v) {
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) {
    v.remove_prefix(1);
  }
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) {
    v.remove_suffix(1);
  }
  return v;
}

}  // namespace

DemandSeries load_series(const std::filesystem::path& path, const LoadOptions& opts) {
  if (!(opts.tau > 0.0)) throw ValidationError("tau must be > 0");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string fname = path.string();

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError(fname, 1, "missing header line");
  ++line_no;

  std::vector<double> times;
  std::vector<double> watts;
  bool timestamps = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    const std::size_t comma = row.find(',');
    if (comma == std::string_view::npos)
      throw ParseError(fname, line_no, "expected two comma-separated columns");
    const std::string_view time_col = trim(row.substr(0, comma));
    const std::string_view value_col = trim(row.substr(comma + 1));
    if (value_col.find(',') != std::string_view::npos)
      throw ParseError(fname, line_no, "expected two comma-separated columns");

    double t;
    const bool is_timestamp = parse_timestamp(time_col, t);
    if (!is_timestamp && !parse_number(time_col, t))
      throw ParseError(fname, line_no,
                       "first column must be an ISO-8601 timestamp or a number");
    if (times.empty())
      timestamps = is_timestamp;
    else if (timestamps != is_timestamp)
      throw ParseError(fname, line_no, "mixed timestamp and numeric time columns");

    double w;
    if (!parse_number(value_col, w))
      throw ParseError(fname, line_no, "second column must be a number (watts)");
    if (!std::isfinite(w)) throw ParseError(fname, line_no, "power value not finite");
    if (w < 0.0)
      throw ValidationError(fname + ":" + std::to_string(line_no) +
                            ": negative power value");
    if (!times.empty() && !(t > times.back()))
      throw ParseError(fname, line_no, "rows must be strictly increasing in time");

    times.push_back(t);
    watts.push_back(w);
  }
  if (times.size() < 2) throw ValidationError(fname + ": need at least 2 samples");

  DemandSeries s;
  s.tau = opts.tau;
  s.label = path.stem().string();

  if (!opts.resample) {
    s.samples = Eigen::Map<const ArrayXd>(watts.data(),
                                          static_cast<Eigen::Index>(watts.size()));
    validate(s);
    return s;
  }

  // Average rows into tau-wide bins anchored at the first row's time. Numeric
  // time columns are taken as seconds when resampling.
  const double width = opts.tau * 3600.0;
  const double t0 = times.front();
  const auto last_bin =
      static_cast<Eigen::Index>(std::floor((times.back() - t0) / width));
  const Eigen::Index n = last_bin + 1;
  if (n < 2)
    throw ValidationError(fname + ": resampling yields fewer than 2 bins");

  ArrayXd sums = ArrayXd::Zero(n);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto b = static_cast<Eigen::Index>(std::floor((times[i] - t0) / width));
    sums[b] += watts[i];
    ++counts[static_cast<std::size_t>(b)];
  }
  for (Eigen::Index b = 0; b < n; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0)
      throw GapError(fname + ": resampling bin " + std::to_string(b) +
                     " has no rows");
    sums[b] /= static_cast<double>(counts[static_cast<std::size_t>(b)]);
  }
  s.samples = sums;
  validate(s);
  return s;
}

}  // namespace smlink
