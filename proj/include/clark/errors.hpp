#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clark {

enum class ErrorCode {
    GaugeUndefined,
    UnsupportedResolution,
    MissingSeed,
    DomainMismatch,
    DerivativeUnsupported,
    NotASelfMap,
    RootFindingFailed,
    AtomDerivativeVanishes,
    EvaluationTooCloseToBoundary,
    ZeroMeasure,
    NotSingular,
    NoBoundaryContact,
    InvalidTestIndex,
    NotInner,
    PreconditionViolated,
    PoleProximity,
    InvalidConfig,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::GaugeUndefined: return "GaugeUndefined";
        case ErrorCode::UnsupportedResolution: return "UnsupportedResolution";
        case ErrorCode::MissingSeed: return "MissingSeed";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::DerivativeUnsupported: return "DerivativeUnsupported";
        case ErrorCode::NotASelfMap: return "NotASelfMap";
        case ErrorCode::RootFindingFailed: return "RootFindingFailed";
        case ErrorCode::AtomDerivativeVanishes: return "AtomDerivativeVanishes";
        case ErrorCode::EvaluationTooCloseToBoundary: return "EvaluationTooCloseToBoundary";
        case ErrorCode::ZeroMeasure: return "ZeroMeasure";
        case ErrorCode::NotSingular: return "NotSingular";
        case ErrorCode::NoBoundaryContact: return "NoBoundaryContact";
        case ErrorCode::InvalidTestIndex: return "InvalidTestIndex";
        case ErrorCode::NotInner: return "NotInner";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace clark
