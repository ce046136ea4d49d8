#pragma once

#include <stdexcept>
#include <string>

namespace crimenet {

// Base classes map onto CLI exit codes: ConfigError -> 1, DataError -> 2,
// anything else -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

#define CRIMENET_ERROR(NAME, BASE)          \
  struct NAME : BASE {                      \
    explicit NAME(const std::string& what)  \
        : BASE(#NAME ": " + what) {}        \
  }

CRIMENET_ERROR(MissingColumn, DataError);
CRIMENET_ERROR(UnknownCommunity, DataError);
CRIMENET_ERROR(UnknownValue, DataError);
CRIMENET_ERROR(MonthOutOfSpan, DataError);
CRIMENET_ERROR(UnmappedCommunity, DataError);
CRIMENET_ERROR(ZeroCrimeType, DataError);
CRIMENET_ERROR(KeyMismatch, DataError);
CRIMENET_ERROR(IncompleteBundle, DataError);
CRIMENET_ERROR(InvalidPlan, ConfigError);
CRIMENET_ERROR(SpanTooShort, ConfigError);
CRIMENET_ERROR(InvalidHyperparameters, ConfigError);
CRIMENET_ERROR(EmptyLayer, InternalError);
CRIMENET_ERROR(EmptyInput, InternalError);
CRIMENET_ERROR(NotSymmetric, InternalError);
CRIMENET_ERROR(DimensionMismatch, InternalError);
CRIMENET_ERROR(SeriesTooShort, InternalError);
CRIMENET_ERROR(HistoryTooShort, InternalError);

#undef CRIMENET_ERROR

}  // namespace crimenet
