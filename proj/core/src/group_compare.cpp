#include "nacnet/group_compare.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/histology_map.hpp"
#include "nacnet/text_io.hpp"

#include <set>

namespace nacnet {

PatientSummary summarizePatient(const std::string& id, int label, const CensusTable& census,
                                const std::vector<double>& proportions) {
    if (label != 0 && label != 1) {
        throw DataError("patient '" + id + "' has label " + std::to_string(label) +
                        ", expected 0 or 1");
    }
    PatientSummary s;
    s.id = id;
    s.label = label;
    for (const auto& [key, count] : census.edge_counts) {
        s.values["edge:" + edgeKeyName(key)] = static_cast<double>(count);
    }
    for (const auto& [key, count] : census.triangle_counts) {
        s.values["tri:" + triangleKeyName(key)] = static_cast<double>(count);
    }
    if (census.repeated_label_triangles > 0) {
        s.values["tri:repeated_label"] = static_cast<double>(census.repeated_label_triangles);
    }
    if (!proportions.empty()) {
        if (static_cast<int>(proportions.size()) != kNumLabels) {
            throw DataError("patient '" + id + "' proportion vector has " +
                            std::to_string(proportions.size()) + " entries, expected " +
                            std::to_string(kNumLabels));
        }
        for (int code = 1; code <= kNumLabels; ++code) {
            s.values["prop:" + labelSlug(code)] = proportions[code - 1];
        }
    }
    return s;
}

namespace {

std::vector<std::string> keyUnion(const std::vector<PatientSummary>& patients) {
    std::set<std::string> keys;
    for (const PatientSummary& p : patients) {
        for (const auto& [key, value] : p.values) keys.insert(key);
    }
    return {keys.begin(), keys.end()};
}

double valueOrZero(const PatientSummary& p, const std::string& key) {
    auto it = p.values.find(key);
    return it == p.values.end() ? 0.0 : it->second;
}

} // namespace

std::vector<GroupComparisonRow> compareGroups(const std::vector<PatientSummary>& patients) {
    long pcr = 0;
    long rd = 0;
    for (const PatientSummary& p : patients) (p.label == 1 ? pcr : rd) += 1;
    if (pcr < 2 || rd < 2) {
        throw DataError("group comparison needs at least 2 patients per group, got " +
                        std::to_string(pcr) + " pCR and " + std::to_string(rd) + " RD");
    }

    std::vector<GroupComparisonRow> rows;
    for (const std::string& key : keyUnion(patients)) {
        std::vector<double> a;  // pCR
        std::vector<double> b;  // RD
        for (const PatientSummary& p : patients) {
            (p.label == 1 ? a : b).push_back(valueOrZero(p, key));
        }
        rows.push_back({key, welchTTest(a, b)});
    }
    return rows;
}

std::string comparisonCsv(const std::vector<GroupComparisonRow>& rows) {
    std::string out = "key,mean_pcr,mean_rd,t,p\n";
    for (const GroupComparisonRow& row : rows) {
        out += row.key + ',' + formatDouble(row.welch.mean_a) + ',' +
               formatDouble(row.welch.mean_b) + ',' + formatDouble(row.welch.t) + ',' +
               formatDouble(row.welch.p) + '\n';
    }
    return out;
}

SummaryMatrix summaryMatrix(const std::vector<PatientSummary>& patients) {
    if (patients.empty()) throw DataError("summary matrix needs at least one patient");
    SummaryMatrix m;
    m.keys = keyUnion(patients);
    m.values = Matrix(static_cast<int>(patients.size()), static_cast<int>(m.keys.size()));
    for (std::size_t i = 0; i < patients.size(); ++i) {
        m.response.push_back(static_cast<double>(patients[i].label));
        for (std::size_t k = 0; k < m.keys.size(); ++k) {
            m.values(static_cast<int>(i), static_cast<int>(k)) =
                valueOrZero(patients[i], m.keys[k]);
        }
    }
    return m;
}

} // namespace nacnet
