#include "pdfscout/features.hpp"

#include <charconv>
#include <ostream>

#include "pdfscout/sha256.hpp"

namespace pdfscout {

std::string FeatureSpec::id() const {
    std::string canon = "structural:";
    for (const std::string& name : structural_vocabulary) canon += name + ";";
    canon += "|js:";
    for (const std::string& id : js_indicators) canon += id + ";";
    canon += include_meta ? "|meta:1" : "|meta:0";
    return sha256_hex(canon).substr(0, 16);
}

FeatureSpec default_spec() {
    FeatureSpec spec;
    spec.structural_vocabulary = {
        "JavaScript", "JS",       "OpenAction", "AA",         "Launch",     "EmbeddedFile",
        "RichMedia",  "AcroForm", "XFA",        "Action",     "Catalog",    "Pages",
        "Page",       "Encrypt",  "ObjStm",     "Filter",     "FlateDecode", "Length",
        "Names",      "URI",      "GoTo",       "SubmitForm", "ImportData", "Font"};
    spec.js_indicators = js_identifier_indicators();
    spec.include_meta = true;
    return spec;
}

FeatureSpec structural_spec() {
    FeatureSpec spec = default_spec();
    spec.js_indicators.clear();
    return spec;
}

std::vector<std::string> slot_names(const FeatureSpec& spec) {
    std::vector<std::string> out;
    out.reserve(spec.dimension());
    for (const std::string& name : spec.structural_vocabulary) out.push_back(name);
    for (const std::string& id : spec.js_indicators) out.push_back(id);
    if (spec.include_meta) {
        out.push_back("object_count");
        out.push_back("orphan_count");
        out.push_back("revision_count");
        out.push_back("file_size_kb");
        out.push_back("stream_count");
    }
    return out;
}

FeatureVector vectorize(const Document& doc, const FeatureSpec& spec) {
    std::size_t d = spec.dimension();
    if (d == 0) throw Error(Errc::EmptySpec, "feature spec has dimension 0");

    FeatureVector out;
    out.spec_id = spec.id();
    out.values = Eigen::VectorXd::Zero(Eigen::Index(d));

    KeywordCensus census = keyword_scan(doc);
    Eigen::Index slot = 0;
    for (const std::string& name : spec.structural_vocabulary)
        out.values[slot++] = double(census.count(name));

    if (!spec.js_indicators.empty()) {
        std::map<std::string, std::int64_t> totals;
        for (const ExtractedScript& script : extract_javascript(doc))
            for (const JsIndicatorHit& hit : scan_js_indicators(script.code))
                ++totals[hit.indicator];
        for (const std::string& id : spec.js_indicators) {
            auto it = totals.find(id);
            out.values[slot++] = it == totals.end() ? 0.0 : double(it->second);
        }
    }

    if (spec.include_meta) {
        auto effective = effective_objects(doc);
        double object_count = double(effective.size());

        double orphan_count = object_count;
        try {
            auto reachable = reachable_set(doc);
            orphan_count = 0;
            for (const auto& [number, obj] : effective)
                if (!reachable.count(number)) ++orphan_count;
        } catch (const Error&) {
            // No /Root: everything is an orphan.
        }

        double stream_count = 0;
        for (const auto& [number, obj] : effective)
            if (obj->value.is_stream()) ++stream_count;

        // The extent the reader consumes, not the raw file size: content
        // smuggled after the last %%EOF must not perturb Strict features.
        std::size_t content_end = 0;
        for (const Revision& rev : doc.revisions)
            content_end = std::max(content_end, rev.end_offset);

        out.values[slot++] = object_count;
        out.values[slot++] = orphan_count;
        out.values[slot++] = double(doc.revisions.size());
        out.values[slot++] = double(content_end) / 1024.0;
        out.values[slot++] = stream_count;
    }
    return out;
}

void write_features_csv(std::ostream& out, const FeatureSpec& spec,
                        const std::vector<FeatureVector>& vectors,
                        const std::vector<std::optional<int>>& labels) {
    auto csv_field = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += "\"\"";
            else quoted.push_back(c);
        }
        quoted += "\"";
        return quoted;
    };

    bool first = true;
    for (const std::string& name : slot_names(spec)) {
        if (!first) out << ',';
        out << csv_field(name);
        first = false;
    }
    out << ",label\n";

    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const Eigen::VectorXd& v = vectors[i].values;
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (j) out << ',';
            double value = v[j];
            if (value == double(std::int64_t(value))) {
                out << std::int64_t(value);
            } else {
                char buf[32];
                auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
                out.write(buf, p - buf);
            }
        }
        out << ',';
        if (i < labels.size() && labels[i]) out << *labels[i];
        out << '\n';
    }
}

}  // namespace pdfscout
