#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foi/classifier.hpp"
#include "foi/error.hpp"
#include "foi/factor_analysis.hpp"
#include "foi/pillar_index.hpp"
#include "foi/reference_fixture_data.hpp"

namespace foi {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Published index tables (printed values and ranks), cluster memberships and factor values.
/// Read-only; the checksum covers the compact dump of the `payload` object.
class ReferenceFixture {
public:
    static ReferenceFixture parse(std::string_view text) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("reference fixture: ") + e.what());
        }
        ReferenceFixture f;
        f.version_ = doc.at("version").get<int>();
        f.checksum_ = doc.at("checksum").get<std::string>();
        const auto& payload = doc.at("payload");
        const auto actual = "fnv1a64:" + hex64(fnv1a64(payload.dump()));
        if (actual != f.checksum_) {
            throw InputError("reference fixture: checksum mismatch (stored " + f.checksum_ + ", computed " + actual + ")");
        }

        for (const auto& c : payload.at("countries")) f.names_[c.at("code").get<std::string>()] = c.at("name").get<std::string>();

        for (const char* epoch : {"2010", "2020"}) {
            FoiScores scores;
            scores.epoch = std::stoi(epoch);
            for (const auto& row : payload.at("indices")) {
                CountryScores cs;
                cs.country = row.at("country").get<std::string>();
                for (auto p : kPillars) {
                    const auto& cell = row.at(epoch).at(std::string(to_string(p)));
                    cs.index[static_cast<std::size_t>(p)] = cell.at("index").get<double>();
                    cs.rank[static_cast<std::size_t>(p)] = cell.at("rank").get<int>();
                }
                scores.rows.push_back(std::move(cs));
            }
            f.indices_[scores.epoch] = std::move(scores);

            auto& clusters = f.memberships_[std::stoi(epoch)];
            for (const auto& row : payload.at("memberships").at(epoch)) {
                clusters[row.at("country").get<std::string>()] = row.at("cluster").get<int>();
            }
        }

        const auto& fv = payload.at("factor_values");
        f.factor_names_ = fv.at("factors").get<std::vector<std::string>>();
        f.factor_values_.k = f.factor_names_.size();
        for (const auto& row : fv.at("rows")) {
            f.factor_values_.rows.push_back(row.at("country").get<std::string>());
            f.factor_labels_.push_back(row.at("label").get<std::string>());
            std::vector<Cell> values;
            for (const auto& v : row.at("values")) values.push_back(v.is_null() ? kMissing : Cell(v.get<double>()));
            f.factor_values_.values.push_back(std::move(values));
        }
        return f;
    }

    /// The fixture compiled into the library.
    static const ReferenceFixture& embedded() {
        static const ReferenceFixture fixture = parse(detail::kReferenceFixtureJson);
        return fixture;
    }

    int version() const { return version_; }
    const std::string& checksum() const { return checksum_; }
    const std::map<std::string, std::string>& names() const { return names_; }

    std::string name_of(const std::string& code) const {
        auto it = names_.find(code);
        return it == names_.end() ? code : it->second;
    }

    static void check_epoch(int epoch) {
        if (epoch != 2010 && epoch != 2020) throw InputError("reference fixture: epoch must be 2010 or 2020, got " + std::to_string(epoch));
    }

    /// Printed indices with printed ranks.
    const FoiScores& indices(int epoch) const {
        check_epoch(epoch);
        return indices_.at(epoch);
    }

    /// Printed cluster membership, keyed by country code.
    const std::map<std::string, int>& clusters(int epoch) const {
        check_epoch(epoch);
        return memberships_.at(epoch);
    }

    const std::vector<std::string>& factor_names() const { return factor_names_; }
    const fa::FactorScores& factor_values() const { return factor_values_; }
    const std::vector<std::string>& factor_value_labels() const { return factor_labels_; }

private:
    int version_ = 0;
    std::string checksum_;
    std::map<std::string, std::string> names_;
    std::map<int, FoiScores> indices_;
    std::map<int, std::map<std::string, int>> memberships_;
    std::vector<std::string> factor_names_;
    fa::FactorScores factor_values_;
    std::vector<std::string> factor_labels_;
};

struct VerifyMismatch {
    std::string country;
    int computed = 0;
    int reference = 0;
    bool borderline = false;  // every differing pillar is within epsilon of the threshold
};

struct VerifyReport {
    int epoch = 0;
    double threshold = kDefaultThreshold;
    double epsilon = kDefaultEpsilon;
    std::size_t country_count = 0;
    std::size_t matches = 0;
    std::vector<VerifyMismatch> mismatches;  // by country code

    std::size_t hard_count() const {
        return static_cast<std::size_t>(std::count_if(mismatches.begin(), mismatches.end(), [](const auto& m) { return !m.borderline; }));
    }
    std::size_t borderline_count() const { return mismatches.size() - hard_count(); }
};

/// Classifies the printed indices of one epoch and diffs against the printed memberships.
/// Never adjusts either side.
inline VerifyReport verify_reference(const ReferenceFixture& fixture, int epoch, double threshold = kDefaultThreshold,
                                     double epsilon = kDefaultEpsilon) {
    VerifyReport report;
    report.epoch = epoch;
    report.threshold = threshold;
    report.epsilon = epsilon;
    const auto& reference = fixture.clusters(epoch);
    for (const auto& a : classify_epoch(fixture.indices(epoch), threshold, epsilon)) {
        ++report.country_count;
        auto it = reference.find(a.country);
        if (it == reference.end()) throw InputError("verify: country '" + a.country + "' missing from reference memberships");
        if (it->second == a.cluster) {
            ++report.matches;
            continue;
        }
        const auto ref_levels = levels_of(it->second);
        bool borderline = true;
        for (std::size_t k = 0; k < 3; ++k) {
            if (ref_levels[k] != a.levels[k] && !a.borderline[k]) borderline = false;
        }
        report.mismatches.push_back({a.country, a.cluster, it->second, borderline});
    }
    return report;
}

}  // namespace foi
