#pragma once
// Error codes and the exception type shared by all patgeo components.

#include <stdexcept>
#include <string>

namespace patgeo {

enum class Errc {
    Io,
    Parse,
    UnknownToken,
    DuplicateToken,
    DuplicateId,
    ScoreOutOfRange,
    InvalidSpec,
    SameAxis,
    EmptyCorpus,
    MissingClass,
    DegenerateGroups,
    SingleClass,
    SubgroupTooSmall,
    ShapeMismatch,
    AsymmetricInput,
    NegativeDistance,
    Usage,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::Io: return "Io";
        case Errc::Parse: return "Parse";
        case Errc::UnknownToken: return "UnknownToken";
        case Errc::DuplicateToken: return "DuplicateToken";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::ScoreOutOfRange: return "ScoreOutOfRange";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::SameAxis: return "SameAxis";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::MissingClass: return "MissingClass";
        case Errc::DegenerateGroups: return "DegenerateGroups";
        case Errc::SingleClass: return "SingleClass";
        case Errc::SubgroupTooSmall: return "SubgroupTooSmall";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::AsymmetricInput: return "AsymmetricInput";
        case Errc::NegativeDistance: return "NegativeDistance";
        case Errc::Usage: return "Usage";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace patgeo
