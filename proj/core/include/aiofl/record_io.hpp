#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "aiofl/metrics.hpp"

namespace aiofl {

inline constexpr std::string_view kRecordCsvHeader =
    "t,r,r1,r2,y,y_meas,u,v,xi1,xi2,xi3,xi4,xi5,x1,x2,x3,x4";

/// One row per sample; numbers in shortest round-trip form.
void write_csv(const RunRecord& rec, std::ostream& out);

/// Inverse of write_csv. Throws ConfigError on a header or row mismatch.
RunRecord read_csv(std::istream& in);

/// `key=value` lines for itae, isu, iau, opi.
std::string metrics_text(const MetricsReport& m);

struct SeriesStyle {
  std::string label;
  std::string color;
};

/// Static line plot of one or more series against a shared time axis.
std::string svg_plot(const std::vector<double>& t,
                     const std::vector<std::pair<SeriesStyle, const std::vector<double>*>>& series,
                     std::string_view title, std::string_view y_label);

}  // namespace aiofl
