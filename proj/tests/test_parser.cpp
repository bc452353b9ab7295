#include <doctest.h>

#include "fixtures.hpp"
#include "pdfscout/parser.hpp"

using namespace pdfscout;

TEST_CASE("parse_header") {
    CHECK(parse_header("%PDF-1.7\nrest") == "1.7");

    std::string padded(200, 'x');
    padded += "%PDF-1.4\n";
    CHECK(parse_header(padded) == "1.4");

    CHECK_THROWS_AS((void)parse_header("no marker here"), Error);

    std::string too_far(1500, 'x');
    too_far += "%PDF-1.5\n";
    CHECK_THROWS_AS((void)parse_header(too_far), Error);
}

TEST_CASE("empty input is not a PDF") {
    try {
        (void)parse_document("", ParseMode::Strict);
        FAIL("expected NotAPdf");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotAPdf);
    }
}

TEST_CASE("minimal file parses strict into one revision with five objects") {
    Document doc = parse_document(fixtures::minimal_five_object_doc(), ParseMode::Strict);
    REQUIRE(doc.revisions.size() == 1);
    CHECK(doc.header_version == "1.7");
    CHECK(effective_objects(doc).size() == 5);
    CHECK(doc.parse_mode == ParseMode::Strict);
}

TEST_CASE("appended unreferenced objects: invisible strict, visible scavenge") {
    std::string bytes = fixtures::minimal_five_object_doc();
    bytes += "6 0 obj\n<< /Hidden /JavaScript >>\nendobj\n";

    Document strict = parse_document(bytes, ParseMode::Strict);
    Document scavenge = parse_document(bytes, ParseMode::Scavenge);
    CHECK(effective_objects(strict).size() == 5);
    CHECK(effective_objects(scavenge).size() == 6);
    CHECK(effective_objects(scavenge).count(6) == 1);
}

TEST_CASE("mode dominance: strict object numbers are a subset of scavenge") {
    std::vector<std::string> files = {
        fixtures::minimal_five_object_doc(),
        fixtures::launch_action_doc(),
        fixtures::append_revision(fixtures::minimal_five_object_doc(), {{3, "<< /Re (done) >>"}}),
    };
    for (const std::string& bytes : files) {
        auto strict = effective_objects(parse_document(bytes, ParseMode::Strict));
        auto scavenge = effective_objects(parse_document(bytes, ParseMode::Scavenge));
        for (const auto& [number, obj] : strict) CHECK(scavenge.count(number) == 1);
    }
}

TEST_CASE("lying /Length: scanned endstream wins, diagnostic recorded") {
    std::string bytes = fixtures::build_raw_pdf({
        {1, "<< /Type /Catalog >>"},
        {2, "<< /Length 5 >>\nstream\nthis is sixteen!\nendstream"},
    });
    Document doc = parse_document(bytes, ParseMode::Strict);
    const PdfStream* stream = effective_objects(doc).at(2)->value.as_stream();
    REQUIRE(stream != nullptr);
    CHECK(stream->raw == "this is sixteen!");
    bool mentioned = false;
    for (const Diagnostic& d : doc.diagnostics)
        if (d.message.find("/Length") != std::string::npos) mentioned = true;
    CHECK(mentioned);
}

TEST_CASE("consistent direct /Length protects stream bytes containing endstream") {
    std::string body = "fake endstream inside";
    std::string bytes = fixtures::build_raw_pdf({
        {1, "<< /Type /Catalog >>"},
        {2, "<< /Length " + std::to_string(body.size()) + " >>\nstream\n" + body +
                "\nendstream"},
    });
    Document doc = parse_document(bytes, ParseMode::Strict);
    const PdfStream* stream = effective_objects(doc).at(2)->value.as_stream();
    REQUIRE(stream != nullptr);
    CHECK(stream->raw == body);
}

TEST_CASE("scavenge parses loose objects with no x-ref at all") {
    std::string bytes = "%PDF-1.4\n1 0 obj\n<< /A 1 >>\nendobj\n2 0 obj\n(text)\nendobj\n";

    Document doc = parse_document(bytes, ParseMode::Scavenge);
    CHECK(effective_objects(doc).size() == 2);

    try {
        (void)parse_document(bytes, ParseMode::Strict);
        FAIL("expected NoTrailer");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoTrailer);
    }

    ParseOptions fallback;
    fallback.scavenge_fallback = true;
    Document rescued = parse_document(bytes, ParseMode::Strict, fallback);
    CHECK(rescued.parse_mode == ParseMode::Scavenge);
    CHECK(effective_objects(rescued).size() == 2);
}

TEST_CASE("scavenge keeps duplicate numbers, newest offset wins") {
    std::string bytes =
        "%PDF-1.4\n1 0 obj\n(old)\nendobj\n1 0 obj\n(new)\nendobj\n";
    Document doc = parse_document(bytes, ParseMode::Scavenge);
    REQUIRE(doc.revisions.size() == 1);
    CHECK(doc.revisions[0].objects.size() == 2);  // both visible to analyses
    CHECK(effective_objects(doc).at(1)->value.as_string()->bytes == "new");
}

TEST_CASE("scavenge over-reports: headers inside stream payloads are found too") {
    // An x-ref could point a reader straight at the buried header, so the
    // byte scan must surface it; this over-reporting (objects a reader may
    // never parse) is the known trade-off of scanning tools.
    std::string body = "xx 7 0 obj << /Ghost true >> endobj yy";
    std::string bytes = fixtures::build_raw_pdf({
        {1, "<< /Type /Catalog >>"},
        {2, "<< /Length " + std::to_string(body.size()) + " >>\nstream\n" + body +
                "\nendstream"},
    });
    Document doc = parse_document(bytes, ParseMode::Scavenge);
    CHECK(effective_objects(doc).count(7) == 1);
    CHECK(effective_objects(doc).size() == 3);
}

TEST_CASE("dominance holds when the x-ref points inside another object's span") {
    std::string body = "xx 7 0 obj (hidden) endobj yy";
    std::string container = "<< /Length " + std::to_string(body.size()) + " >>\nstream\n" +
                            body + "\nendstream";
    // Hand-build the file so an in-use entry targets the buried header.
    std::string out = "%PDF-1.4\n";
    std::size_t obj1_at = out.size();
    out += "1 0 obj\n<< /Type /Catalog >>\nendobj\n";
    std::size_t obj2_at = out.size();
    out += "2 0 obj\n" + container + "\nendobj\n";
    std::size_t buried_at = out.find("7 0 obj");
    out += fixtures::xref_and_trailer({{0, 0, 65535, false},
                                       {1, obj1_at, 0, true},
                                       {2, obj2_at, 0, true},
                                       {7, buried_at, 0, true}},
                                      out.size(), "/Size 8 /Root 1 0 R");

    auto strict = effective_objects(parse_document(out, ParseMode::Strict));
    auto scavenge = effective_objects(parse_document(out, ParseMode::Scavenge));
    REQUIRE(strict.count(7) == 1);
    CHECK(strict.at(7)->value.as_string()->bytes == "hidden");
    for (const auto& [number, obj] : strict) CHECK(scavenge.count(number) == 1);
}

TEST_CASE("startxref pointing past the end is a truncated file") {
    std::string bytes = fixtures::minimal_five_object_doc();
    std::size_t sx = bytes.rfind("startxref\n");
    bytes = bytes.substr(0, sx) + "startxref\n99999999\n%%EOF\n";
    try {
        (void)parse_document(bytes, ParseMode::Strict);
        FAIL("expected TruncatedFile");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TruncatedFile);
    }
}

TEST_CASE("/Prev loop terminates with a diagnostic") {
    // Point the only trailer's /Prev at its own x-ref table. ("\nxref"
    // avoids matching inside the word "startxref".)
    std::string bytes = fixtures::build_raw_pdf({{1, "<< /Type /Catalog >>"}});
    std::size_t xref_at = bytes.rfind("\nxref\n") + 1;
    std::size_t trailer_at = bytes.rfind("trailer\n<< ");
    bytes.insert(trailer_at + 11, "/Prev " + std::to_string(xref_at) + " ");

    Document doc = parse_document(bytes, ParseMode::Strict);
    CHECK(doc.revisions.size() == 1);
    bool mentioned = false;
    for (const Diagnostic& d : doc.diagnostics)
        if (d.message.find("loop") != std::string::npos) mentioned = true;
    CHECK(mentioned);
}

TEST_CASE("x-ref entry naming the wrong object is diagnosed") {
    std::string bytes = fixtures::build_raw_pdf({{1, "<< /Type /Catalog >>"}});
    // Rewrite the object header number in place: "1 0 obj" -> "9 0 obj".
    std::size_t at = bytes.find("1 0 obj");
    bytes[at] = '9';
    Document doc = parse_document(bytes, ParseMode::Strict);
    bool mentioned = false;
    for (const Diagnostic& d : doc.diagnostics)
        if (d.message.find("bytes hold") != std::string::npos) mentioned = true;
    CHECK(mentioned);
    CHECK(effective_objects(doc).count(9) == 0);  // entry was for number 1
}

TEST_CASE("duplicate keys after normalization: last wins, diagnostic kept") {
    // /A#42 and /AB are the same key once escapes decode.
    std::string bytes = fixtures::build_raw_pdf({{1, "<< /A#42 1 /AB 2 >>"}});
    Document doc = parse_document(bytes, ParseMode::Strict);
    const PdfDict* dict = effective_objects(doc).at(1)->value.as_dict();
    REQUIRE(dict != nullptr);
    CHECK(dict->size() == 1);
    CHECK(*dict->find("AB")->int_value() == 2);
    bool mentioned = false;
    for (const Diagnostic& d : doc.diagnostics)
        if (d.message.find("duplicate") != std::string::npos) mentioned = true;
    CHECK(mentioned);
}

TEST_CASE("oversized input is rejected") {
    std::string big(kMaxFileBytes + 1, 'a');
    try {
        (void)parse_document(big, ParseMode::Scavenge);
        FAIL("expected FileTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FileTooLarge);
    }
}

TEST_CASE("eager decode fills Stream::decoded for supported filters") {
    Document doc = parse_document(fixtures::minimal_five_object_doc(), ParseMode::Strict);
    const PdfStream* stream = effective_objects(doc).at(4)->value.as_stream();
    REQUIRE(stream != nullptr);
    REQUIRE(stream->decoded.has_value());
    CHECK(*stream->decoded == "BT (Hello) Tj ET");
}
