#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdfscout/forensics.hpp"
#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

// Vector layout contract: structural name slots, then JS indicator slots,
// then meta slots. Ordering is part of the spec identity.
struct FeatureSpec {
    std::vector<std::string> structural_vocabulary;
    std::vector<std::string> js_indicators;
    bool include_meta = true;

    static constexpr std::size_t kMetaCount = 5;  // object, orphan, revision, size_kb, stream

    std::size_t dimension() const {
        return structural_vocabulary.size() + js_indicators.size() +
               (include_meta ? kMetaCount : 0);
    }
    // Stable content hash; vectors and models carry it to detect layout drift.
    std::string id() const;
};

struct FeatureVector {
    Eigen::VectorXd values;
    std::string spec_id;
};

// The stock 37-dimensional layout: 24 structural names, 8 JS identifier
// indicators, 5 meta features.
FeatureSpec default_spec();

// Structural names + meta only; the "keywords-ignorant-of-code" detector.
FeatureSpec structural_spec();

std::vector<std::string> slot_names(const FeatureSpec& spec);

// Structural slots take keyword_scan counts, indicator slots total hit
// counts over every extracted script, meta slots document shape numbers.
// Counts are raw, not size-normalized. Throws EmptySpec on d = 0.
FeatureVector vectorize(const Document& doc, const FeatureSpec& spec);

// CSV dump: header of slot names plus a final "label" column, one row per
// vector, label cell empty when unknown.
void write_features_csv(std::ostream& out, const FeatureSpec& spec,
                        const std::vector<FeatureVector>& vectors,
                        const std::vector<std::optional<int>>& labels);

}  // namespace pdfscout
