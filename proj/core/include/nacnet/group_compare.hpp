#pragma once

#include "nacnet/census.hpp"
#include "nacnet/matrix.hpp"
#include "nacnet/stats.hpp"

#include <map>
#include <string>
#include <vector>

namespace nacnet {

/// One patient's keyed motif counts and label proportions, the variables
/// the group statistics run over. Keys are prefixed by family ("edge:",
/// "tri:", "prop:") so they stay distinct and sort deterministically.
struct PatientSummary {
    std::string id;
    int label = 0;  // 1 = pCR, 0 = RD
    std::map<std::string, double> values;
};

/// Builds the keyed view of one patient. Proportions may be empty when no
/// histology map is available; census keys are always included.
PatientSummary summarizePatient(const std::string& id, int label, const CensusTable& census,
                                const std::vector<double>& proportions);

struct GroupComparisonRow {
    std::string key;
    WelchResult welch;  // group a = pCR, group b = RD
};

/// Welch t-test per key over the union of all patients' keys; a key
/// missing from a patient counts as 0. Needs >= 2 patients per group.
std::vector<GroupComparisonRow> compareGroups(const std::vector<PatientSummary>& patients);

/// `key,mean_pcr,mean_rd,t,p` rows in key order.
std::string comparisonCsv(const std::vector<GroupComparisonRow>& rows);

/// The patients x keys value matrix over the key union, plus the response
/// vector, for correlation and relevance ranking.
struct SummaryMatrix {
    std::vector<std::string> keys;
    Matrix values;                 // one row per patient, one column per key
    std::vector<double> response;  // 1 = pCR, 0 = RD
};

SummaryMatrix summaryMatrix(const std::vector<PatientSummary>& patients);

} // namespace nacnet
