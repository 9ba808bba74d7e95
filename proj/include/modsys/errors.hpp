#pragma once

#include <stdexcept>
#include <string>

namespace modsys {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A symbol or atom was used against a vocabulary/domain that does not declare it.
struct VocabularyMismatchError : Error {
    using Error::Error;
};

// An enumeration would exceed the configured atom ceiling (see atom_ceiling()).
struct EnumerationLimitError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

// Outside the supported fragment, e.g. a choice head under well-founded semantics.
struct UnsupportedConstructError : Error {
    using Error::Error;
};

}  // namespace modsys
