#pragma once

#include <stdexcept>
#include <string>

namespace geotravel {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Record ingestion.
struct RecordMalformed : Error {
  using Error::Error;
};
struct RecordIncomplete : Error {
  using Error::Error;
};

// Feature extraction.
struct EmptyCorpus : Error {
  using Error::Error;
};
struct EmptyVocabulary : Error {
  using Error::Error;
};
struct TermNotFound : Error {
  using Error::Error;
};

// Classification.
struct DegenerateLabels : Error {
  using Error::Error;
};
struct SchemaMismatch : Error {
  using Error::Error;
};

// Evaluation.
struct LengthMismatch : Error {
  using Error::Error;
};
struct AnnotationOrphan : Error {
  using Error::Error;
};
struct LeakageDetected : Error {
  using Error::Error;
};

// Configuration and IO.
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace geotravel
