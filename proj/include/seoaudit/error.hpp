#pragma once

#include <stdexcept>
#include <string>

namespace seoaudit {

enum class Errc {
  EmptyDocument,
  InvalidBaseUrl,
  DivisionByZero,
  UninitializedScorer,
  BlankPage,
  NoRedirection,
  BlankView,
  BlankEvidence,
  MissingSiteStats,
  EmptyLinkSet,
  EmptyInput,
  OutOfRange,
  EmptyMatrix,
  EmptyString,
  BadEdges,
  MissingParams,
  TooFewSites,
  IoFailure,
  NonEmptyOutputDir,
  EmptyQuery,
  EmptyIndex,
  FetchFailure,
  TimeoutExceeded,
  ResolverFailure,
  DatasetEmpty,
  IndexMissing,
  ManifestMissing,
  UnsupportedFormat,
  InvalidData,
};

const char* to_string(Errc code) noexcept;

// Broad class of an error, used by the CLI to pick an exit code.
enum class ErrorCategory { Data, Io };

ErrorCategory category_of(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace seoaudit
