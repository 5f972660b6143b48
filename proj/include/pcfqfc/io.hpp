#pragma once

#include "pcfqfc/conversion.hpp"
#include "pcfqfc/counting.hpp"
#include "pcfqfc/fit.hpp"
#include "pcfqfc/phasematch.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace pcfqfc::io {

/// Nine significant digits, "%.9g". Non-finite values print as "nan"/"inf".
std::string format_number(double x);
/// x rounded to what format_number prints.
double round9(double x);
/// Whole-string numeric parse; throws ConfigError naming `what` on failure.
double parse_number(std::string_view text, const std::string& what);

void write_tuning_csv(std::ostream& out, const TuningCurve& curve);
void write_power_scan_csv(std::ostream& out, const std::vector<PowerScanPoint>& scan);
void write_observations_csv(std::ostream& out, const ObservationSet& obs);
void write_tallies_csv(std::ostream& out, const TallySet& t);
/// Bin centres in ns.
void write_histogram_csv(std::ostream& out, const Histogram& h);

/// Header `lambda_q_nm,depletion[,sigma]`. Without a sigma column the set is
/// unweighted. Errors name the origin, row and column.
ObservationSet read_observations_csv(std::istream& in, const std::string& origin,
                                     const ScanContext& context);

nlohmann::ordered_json to_json(const FitResult& r);
nlohmann::ordered_json to_json(const EfficiencyChain& chain);
nlohmann::ordered_json to_json(const TallySet& t);
nlohmann::ordered_json to_json(const ProbabilityTable& p);

/// Two-space indented JSON with a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::string& path, const std::string& content);

} // namespace pcfqfc::io
