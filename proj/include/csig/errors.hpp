#pragma once

#include <stdexcept>
#include <string>

namespace csig {

/// Coarse failure category; the CLI maps Input -> exit 1, Numerical -> exit 2.
enum class ErrorKind { Input, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define CSIG_DEFINE_ERROR(NAME, KIND)                                             \
    struct NAME : Error {                                                         \
        explicit NAME(const std::string& what) : Error(ErrorKind::KIND, what) {}  \
    }

CSIG_DEFINE_ERROR(InvalidArgument, Input);
CSIG_DEFINE_ERROR(NonPositivePrice, Input);
CSIG_DEFINE_ERROR(TooShort, Input);
CSIG_DEFINE_ERROR(SeriesShorterThanWindow, Input);
CSIG_DEFINE_ERROR(CalendarMismatch, Input);
CSIG_DEFINE_ERROR(FieldLengthMismatch, Input);
CSIG_DEFINE_ERROR(OverlappingEpochs, Input);
CSIG_DEFINE_ERROR(ParseError, Input);
CSIG_DEFINE_ERROR(EmptyEnsemble, Input);
CSIG_DEFINE_ERROR(ExcessiveMissingData, Input);

CSIG_DEFINE_ERROR(SingularRegression, Numerical);
CSIG_DEFINE_ERROR(RankDeficient, Numerical);
CSIG_DEFINE_ERROR(ConstantInput, Numerical);
CSIG_DEFINE_ERROR(DegenerateDistances, Numerical);

#undef CSIG_DEFINE_ERROR

}  // namespace csig
