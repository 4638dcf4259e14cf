#pragma once

#include <stdexcept>
#include <string>

namespace emgaction {

// Base class for every error this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EMGACTION_DEFINE_ERROR(NAME)                                  \
    struct NAME : Error {                                             \
        explicit NAME(const std::string& msg) : Error(msg) {}         \
    }

// Ingest / file handling
EMGACTION_DEFINE_ERROR(IoError);
EMGACTION_DEFINE_ERROR(FormatError);
EMGACTION_DEFINE_ERROR(ParseError);
EMGACTION_DEFINE_ERROR(TooShortError);
EMGACTION_DEFINE_ERROR(DegenerateSpecError);

// Signal conditions
EMGACTION_DEFINE_ERROR(NonFiniteError);
EMGACTION_DEFINE_ERROR(ZeroEnergyError);
EMGACTION_DEFINE_ERROR(ConstantSignalError);
EMGACTION_DEFINE_ERROR(OrderError);

// Pipeline / model fitting
EMGACTION_DEFINE_ERROR(ConfigError);
EMGACTION_DEFINE_ERROR(InsufficientDataError);
EMGACTION_DEFINE_ERROR(DimError);
EMGACTION_DEFINE_ERROR(EmptySelectionError);
EMGACTION_DEFINE_ERROR(EmptyModelError);
EMGACTION_DEFINE_ERROR(DegenerateLabelsError);
EMGACTION_DEFINE_ERROR(ConvergenceError);
EMGACTION_DEFINE_ERROR(StratificationError);
EMGACTION_DEFINE_ERROR(EmptyMatrixError);

#undef EMGACTION_DEFINE_ERROR

} // namespace emgaction
