#include "seoaudit/error.hpp"

namespace seoaudit {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::InvalidBaseUrl: return "InvalidBaseUrl";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::UninitializedScorer: return "UninitializedScorer";
    case Errc::BlankPage: return "BlankPage";
    case Errc::NoRedirection: return "NoRedirection";
    case Errc::BlankView: return "BlankView";
    case Errc::BlankEvidence: return "BlankEvidence";
    case Errc::MissingSiteStats: return "MissingSiteStats";
    case Errc::EmptyLinkSet: return "EmptyLinkSet";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::EmptyString: return "EmptyString";
    case Errc::BadEdges: return "BadEdges";
    case Errc::MissingParams: return "MissingParams";
    case Errc::TooFewSites: return "TooFewSites";
    case Errc::IoFailure: return "IoFailure";
    case Errc::NonEmptyOutputDir: return "NonEmptyOutputDir";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::EmptyIndex: return "EmptyIndex";
    case Errc::FetchFailure: return "FetchFailure";
    case Errc::TimeoutExceeded: return "TimeoutExceeded";
    case Errc::ResolverFailure: return "ResolverFailure";
    case Errc::DatasetEmpty: return "DatasetEmpty";
    case Errc::IndexMissing: return "IndexMissing";
    case Errc::ManifestMissing: return "ManifestMissing";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::InvalidData: return "InvalidData";
  }
  return "Unknown";
}

ErrorCategory category_of(Errc code) noexcept {
  switch (code) {
    case Errc::IoFailure:
    case Errc::NonEmptyOutputDir:
    case Errc::FetchFailure:
    case Errc::TimeoutExceeded:
    case Errc::ResolverFailure:
    case Errc::IndexMissing:
    case Errc::ManifestMissing:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace seoaudit
