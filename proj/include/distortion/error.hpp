#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distortion {

enum class Errc {
    MixedFields,
    DivisionByZero,
    NotPrime,
    NotIrreducible,
    MixedCurves,
    OffCurve,
    SingularCurve,
    FieldTooLarge,
    OrderNotDividing,
    TorsionNotRational,
    BadInput,
    NotTorsion,
    FieldLacksRoots,
    NotRootOfUnity,
    BadKernel,
    KernelNotRationalAsSet,
    InseparableDegree,
    CurveMismatch,
    BasisInvalid,
    DegreeBoundOverflow,
    OrderMismatch,
    PrimeEqualsCharacteristic,
    CurveSupersingular,
    EigenvaluesCoincide,
    BadCongruence,
    ElementInSubfield,
    NoneFound,
    DegeneratePairing,
    SchemaError,
    PairingRetriesExhausted,
};

constexpr std::string_view errc_name(Errc e) noexcept
{
    switch (e) {
    case Errc::MixedFields: return "MixedFields";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotPrime: return "NotPrime";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::MixedCurves: return "MixedCurves";
    case Errc::OffCurve: return "OffCurve";
    case Errc::SingularCurve: return "SingularCurve";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::OrderNotDividing: return "OrderNotDividing";
    case Errc::TorsionNotRational: return "TorsionNotRational";
    case Errc::BadInput: return "BadInput";
    case Errc::NotTorsion: return "NotTorsion";
    case Errc::FieldLacksRoots: return "FieldLacksRoots";
    case Errc::NotRootOfUnity: return "NotRootOfUnity";
    case Errc::BadKernel: return "BadKernel";
    case Errc::KernelNotRationalAsSet: return "KernelNotRationalAsSet";
    case Errc::InseparableDegree: return "InseparableDegree";
    case Errc::CurveMismatch: return "CurveMismatch";
    case Errc::BasisInvalid: return "BasisInvalid";
    case Errc::DegreeBoundOverflow: return "DegreeBoundOverflow";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::PrimeEqualsCharacteristic: return "PrimeEqualsCharacteristic";
    case Errc::CurveSupersingular: return "CurveSupersingular";
    case Errc::EigenvaluesCoincide: return "EigenvaluesCoincide";
    case Errc::BadCongruence: return "BadCongruence";
    case Errc::ElementInSubfield: return "ElementInSubfield";
    case Errc::NoneFound: return "NoneFound";
    case Errc::DegeneratePairing: return "DegeneratePairing";
    case Errc::SchemaError: return "SchemaError";
    case Errc::PairingRetriesExhausted: return "PairingRetriesExhausted";
    }
    return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` names the
/// contract that was violated.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what)
{
    if (!cond)
        fail(code, what);
}

} // namespace distortion
