#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdfscout {

enum class Errc {
    NotAPdf,
    NoTrailer,
    TruncatedFile,
    FileTooLarge,
    UnknownReference,
    FreeObject,
    NoRoot,
    UnsupportedFilter,
    CorruptStream,
    MalformedEscape,
    EmptySpec,
    SingleClass,
    SpecMismatch,
    NoProgress,
    CorruptModelFile,
    InvalidPayload,
    TargetUnparseable,
    NoCatalog,
    TechniqueNotAllowed,
    ObjectNumberOverflow,
    BadConfig,
    IoError,
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotAPdf: return "NotAPdf";
        case Errc::NoTrailer: return "NoTrailer";
        case Errc::TruncatedFile: return "TruncatedFile";
        case Errc::FileTooLarge: return "FileTooLarge";
        case Errc::UnknownReference: return "UnknownReference";
        case Errc::FreeObject: return "FreeObject";
        case Errc::NoRoot: return "NoRoot";
        case Errc::UnsupportedFilter: return "UnsupportedFilter";
        case Errc::CorruptStream: return "CorruptStream";
        case Errc::MalformedEscape: return "MalformedEscape";
        case Errc::EmptySpec: return "EmptySpec";
        case Errc::SingleClass: return "SingleClass";
        case Errc::SpecMismatch: return "SpecMismatch";
        case Errc::NoProgress: return "NoProgress";
        case Errc::CorruptModelFile: return "CorruptModelFile";
        case Errc::InvalidPayload: return "InvalidPayload";
        case Errc::TargetUnparseable: return "TargetUnparseable";
        case Errc::NoCatalog: return "NoCatalog";
        case Errc::TechniqueNotAllowed: return "TechniqueNotAllowed";
        case Errc::ObjectNumberOverflow: return "ObjectNumberOverflow";
        case Errc::BadConfig: return "BadConfig";
        case Errc::IoError: return "IoError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

// Non-fatal findings accumulated while parsing or analyzing a file.
struct Diagnostic {
    std::size_t offset = 0;
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline void diag(Diagnostics& sink, std::size_t offset, std::string message) {
    sink.push_back({offset, std::move(message)});
}

}  // namespace pdfscout
