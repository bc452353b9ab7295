#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pdfscout {

// Plain SHA-256, sufficient for file fingerprints in reports and for
// feature-spec ids. Verified against the FIPS 180-2 test vectors.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(std::string_view bytes) { update(bytes.data(), bytes.size()); }
    // Finalizes and returns the 32-byte digest; the object must not be reused.
    std::string digest();

private:
    void compress(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t total_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
};

std::string sha256_hex(std::string_view bytes);

}  // namespace pdfscout
