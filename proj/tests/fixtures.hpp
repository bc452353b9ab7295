#pragma once

// Raw-byte PDF fixtures assembled independently of the production writer, so
// parser and serializer tests have a second, hand-rolled construction route.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdfscout/lexer.hpp"

namespace fixtures {

// Rewrites every name token in a source fragment with equivalent #xx hex
// escapes (every other regular character), the way obfuscated malware hides
// keywords. Only safe on fragments without stream payloads.
inline std::string obfuscate_names(const std::string& fragment) {
    static const char* hex = "0123456789ABCDEF";
    auto tokens = pdfscout::tokenize(fragment);
    std::string out;
    std::size_t copied = 0;
    for (const auto& t : tokens) {
        if (t.kind != pdfscout::Token::Kind::Name) continue;
        out += fragment.substr(copied, t.begin - copied);
        out.push_back('/');
        const std::string& body = fragment.substr(t.begin + 1, t.end - t.begin - 1);
        for (std::size_t i = 0; i < body.size(); ++i) {
            unsigned char c = body[i];
            bool escapable = c != '#' && c > 0x20 && c < 0x7f;
            if (i % 2 == 0 && escapable) {
                out.push_back('#');
                out.push_back(hex[c >> 4]);
                out.push_back(hex[c & 0xf]);
            } else {
                out.push_back(char(c));
            }
        }
        copied = t.end;
    }
    out += fragment.substr(copied);
    return out;
}

struct RawObject {
    int number;
    std::string body;  // everything between "N 0 obj" and "endobj"
};

struct RawEntry {
    int number;
    std::size_t offset;
    int generation;
    bool in_use;
};

inline std::string xref_and_trailer(std::vector<RawEntry> entries, std::size_t xref_offset,
                                    const std::string& trailer_body) {
    std::sort(entries.begin(), entries.end(),
              [](const RawEntry& a, const RawEntry& b) { return a.number < b.number; });
    std::string out = "xref\n";
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t run = i + 1;
        while (run < entries.size() && entries[run].number == entries[run - 1].number + 1) ++run;
        out += std::to_string(entries[i].number) + " " + std::to_string(run - i) + "\n";
        for (; i < run; ++i) {
            char line[24];
            std::snprintf(line, sizeof(line), "%010zu %05d %c\r\n", entries[i].offset,
                          entries[i].generation, entries[i].in_use ? 'n' : 'f');
            out += line;
        }
    }
    out += "trailer\n<< " + trailer_body + " >>\nstartxref\n" + std::to_string(xref_offset) +
           "\n%%EOF\n";
    return out;
}

// Single-revision classic PDF. `trailer_body` should not include /Size.
inline std::string build_raw_pdf(const std::vector<RawObject>& objects,
                                 const std::string& trailer_body = "/Root 1 0 R",
                                 const std::string& version = "1.7") {
    std::string out = "%PDF-" + version + "\n";
    std::vector<RawEntry> entries{{0, 0, 65535, false}};
    int max_number = 0;
    for (const RawObject& obj : objects) {
        entries.push_back({obj.number, out.size(), 0, true});
        max_number = std::max(max_number, obj.number);
        out += std::to_string(obj.number) + " 0 obj\n" + obj.body + "\nendobj\n";
    }
    std::size_t xref_offset = out.size();
    out += xref_and_trailer(std::move(entries), xref_offset,
                            "/Size " + std::to_string(max_number + 1) + " " + trailer_body);
    return out;
}

// Appends an incremental update redefining/adding `objects` and marking
// `freed` numbers free. /Prev is wired to the previous startxref target.
inline std::string append_revision(const std::string& base, const std::vector<RawObject>& objects,
                                   const std::string& trailer_body = "/Root 1 0 R",
                                   const std::vector<int>& freed = {}) {
    std::size_t sx = base.rfind("startxref");
    std::size_t prev = 0;
    if (sx != std::string::npos) prev = std::stoul(base.substr(sx + 9));

    std::string out = base;
    if (out.empty() || out.back() != '\n') out.push_back('\n');
    std::vector<RawEntry> entries;
    int max_number = 0;
    for (const RawObject& obj : objects) {
        entries.push_back({obj.number, out.size(), 0, true});
        max_number = std::max(max_number, obj.number);
        out += std::to_string(obj.number) + " 0 obj\n" + obj.body + "\nendobj\n";
    }
    for (int number : freed) {
        entries.push_back({number, 0, 1, false});
        max_number = std::max(max_number, number);
    }
    std::size_t xref_offset = out.size();
    out += xref_and_trailer(std::move(entries), xref_offset,
                            "/Size " + std::to_string(max_number + 1) + " /Prev " +
                                std::to_string(prev) + " " + trailer_body);
    return out;
}

// The classic minimal file: catalog -> pages -> page -> content stream whose
// /Length lives in a separate numeric object referenced as 5 0 R.
inline std::string minimal_five_object_doc() {
    const std::string content = "BT (Hello) Tj ET";
    return build_raw_pdf({
        {1, "<< /Type /Catalog /Pages 2 0 R >>"},
        {2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>"},
        {3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>"},
        {4, "<< /Length 5 0 R >>\nstream\n" + content + "\nendstream"},
        {5, std::to_string(content.size())},
    });
}

// A /Launch action object shaped like the cmd.exe dropper seen in the wild,
// wired from the catalog's /OpenAction.
inline std::string launch_action_doc() {
    return build_raw_pdf({
        {1, "<< /Type /Catalog /OpenAction 2 0 R >>"},
        {2,
         "<< /Type /Action /S /Launch /Win << /F (cmd.exe) "
         "/P (/c echo Dim BinaryStream > vbs1.vbs && echo Set BinaryStream = "
         "CreateObject(\"ADODB.Stream\") >> vbs1.vbs) >> >>"},
    });
}

inline std::string empty_catalog_doc() {
    return build_raw_pdf({{1, "<< /Type /Catalog >>"}});
}

}  // namespace fixtures
