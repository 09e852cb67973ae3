#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "anosov/hitchin.hpp"
#include "anosov/lemma64.hpp"
#include "anosov/surface.hpp"

namespace anosov {

// Extra scalar entries appended to a report object, in order.
using ReportExtras = std::vector<std::pair<std::string, double>>;

// JSON documents with a fixed key order, indented by two spaces.
std::string to_json(const CertReport& r);
std::string to_json(const SolveReport& r, const ReportExtras& extras = {});
std::string to_json(const GapScan& s);
std::string to_json(const ConicReport& r);
std::string to_json(const FlowReport& flow, const std::vector<PushforwardReport>& pushforwards);

// Columns length,count,min_sg12,med_sg12,min_sg23,min_lg12.
void write_csv(std::ostream& os, const GapScan& s);

}  // namespace anosov
