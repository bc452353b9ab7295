#include <doctest.h>

#include <random>

#include "pdfscout/filters.hpp"

using namespace pdfscout;

namespace {

std::string random_bytes(std::mt19937_64& rng, std::size_t max_len) {
    std::string out(rng() % (max_len + 1), '\0');
    for (char& c : out) c = char(rng() & 0xff);
    return out;
}

}  // namespace

TEST_CASE("ascii hex decoding, hand-computed") {
    CHECK(ascii_hex_decode("48 65 6C 6C 6F>") == "Hello");
    CHECK(ascii_hex_decode("4A4B>trailing ignored") == "JK");
    CHECK(ascii_hex_decode("5>") == "P");  // odd digit padded with 0
    CHECK(ascii_hex_decode("") == "");
    CHECK_THROWS_AS((void)ascii_hex_decode("4G>"), Error);
}

TEST_CASE("flate round trip over random byte strings") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        std::string data = random_bytes(rng, 2048);
        CHECK(flate_decode(flate_encode(data)) == data);
    }
}

TEST_CASE("ascii hex round trip over random byte strings") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 1000; ++i) {
        std::string data = random_bytes(rng, 2048);
        CHECK(ascii_hex_decode(ascii_hex_encode(data)) == data);
    }
}

TEST_CASE("no filter honors /Length over the scanned extent") {
    PdfStream stream;
    stream.raw = "0123456789";

    SUBCASE("length matches: identity") {
        stream.dict.set("Length", PdfValue::integer(10));
        Diagnostics diags;
        CHECK(decode_stream(stream, nullptr, &diags) == "0123456789");
        CHECK(diags.empty());
    }
    SUBCASE("shorter length truncates with a diagnostic") {
        stream.dict.set("Length", PdfValue::integer(4));
        Diagnostics diags;
        CHECK(decode_stream(stream, nullptr, &diags) == "0123");
        CHECK(!diags.empty());
    }
    SUBCASE("longer length zero-extends with a diagnostic") {
        stream.dict.set("Length", PdfValue::integer(12));
        Diagnostics diags;
        std::string out = decode_stream(stream, nullptr, &diags);
        CHECK(out.size() == 12);
        CHECK(out.substr(0, 10) == "0123456789");
        CHECK(!diags.empty());
    }
}

TEST_CASE("filter chains apply in declared order") {
    std::string data = "stream content for the chain test";
    PdfStream stream;
    stream.raw = ascii_hex_encode(flate_encode(data));
    stream.dict.set("Filter", PdfValue::array({PdfValue::name("ASCIIHexDecode"),
                                               PdfValue::name("FlateDecode")}));
    CHECK(decode_stream(stream, nullptr) == data);
}

TEST_CASE("unsupported filter and corrupt data") {
    PdfStream stream;
    stream.raw = "x";
    stream.dict.set("Filter", PdfValue::name("DCTDecode"));
    try {
        (void)decode_stream(stream, nullptr);
        FAIL("expected UnsupportedFilter");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedFilter);
    }

    CHECK_THROWS_AS((void)flate_decode("not deflate data at all"), Error);
}

TEST_CASE("decompression bomb hits the output cap") {
    std::string zeros(17u << 20, '\0');
    std::string packed = flate_encode(zeros);
    CHECK(packed.size() < 64 * 1024);  // compresses absurdly well
    try {
        (void)flate_decode(packed);
        FAIL("expected CorruptStream");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CorruptStream);
    }
}
