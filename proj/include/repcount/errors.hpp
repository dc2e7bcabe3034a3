#pragma once

#include <stdexcept>
#include <string>

namespace repcount {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define REPCOUNT_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

// model
REPCOUNT_DEFINE_ERROR(NonFiniteCoordinate)
REPCOUNT_DEFINE_ERROR(InconsistentJointLayout)
REPCOUNT_DEFINE_ERROR(EmptySequence)
REPCOUNT_DEFINE_ERROR(ConfigError)

// similarity
REPCOUNT_DEFINE_ERROR(ZeroNormFrame)
REPCOUNT_DEFINE_ERROR(LengthMismatch)

// spectral
REPCOUNT_DEFINE_ERROR(WindowTooShort)
REPCOUNT_DEFINE_ERROR(EmptyBand)
REPCOUNT_DEFINE_ERROR(EmptyTrack)

// engine
REPCOUNT_DEFINE_ERROR(PersonMismatch)
REPCOUNT_DEFINE_ERROR(SessionFinalized)

// data
REPCOUNT_DEFINE_ERROR(InvalidSpec)
REPCOUNT_DEFINE_ERROR(ParseError)
REPCOUNT_DEFINE_ERROR(SchemaError)
REPCOUNT_DEFINE_ERROR(MissingFile)
REPCOUNT_DEFINE_ERROR(MalformedLabels)
REPCOUNT_DEFINE_ERROR(RaggedRow)
REPCOUNT_DEFINE_ERROR(NonMonotonicTimestamps)

// metrics
REPCOUNT_DEFINE_ERROR(EmptyRecords)
REPCOUNT_DEFINE_ERROR(ZeroGroundTruth)

#undef REPCOUNT_DEFINE_ERROR

}  // namespace repcount
