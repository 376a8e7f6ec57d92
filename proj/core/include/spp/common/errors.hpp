#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spp {

/// Base for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Text outside the instruction grammar. Carries the byte offset of the
/// first offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

enum class ApplyErrorCode {
    MissingObject,     // object not in staging
    OccupiedCell,      // resolved cell already holds a tile
    DanglingReference, // relative reference not on the board
    OffBoard,          // resolved cell outside the 4-cell strip
};

const char* to_string(ApplyErrorCode code);

/// A violated precondition of the symbolic executor.
class ApplyError : public Error {
public:
    ApplyError(ApplyErrorCode code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ApplyErrorCode code() const { return code_; }

private:
    ApplyErrorCode code_;
};

class InvalidWord : public Error {
public:
    using Error::Error;
};

class InfeasibleSplit : public Error {
public:
    using Error::Error;
};

class CorruptDataset : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class MissingEmbedding : public Error {
public:
    using Error::Error;
};

class NonFiniteLoss : public Error {
public:
    using Error::Error;
};

class GateFailure : public Error {
public:
    using Error::Error;
};

class PoseOutOfFrame : public Error {
public:
    using Error::Error;
};

class ArtifactMissing : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

inline const char* to_string(ApplyErrorCode code) {
    switch (code) {
        case ApplyErrorCode::MissingObject: return "MissingObject";
        case ApplyErrorCode::OccupiedCell: return "OccupiedCell";
        case ApplyErrorCode::DanglingReference: return "DanglingReference";
        case ApplyErrorCode::OffBoard: return "OffBoard";
    }
    return "?";
}

}  // namespace spp
