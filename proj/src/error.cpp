#include "mediaflu/error.hpp"

namespace mediaflu {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::ModelVariant: return "model-variant";
    case ErrorKind::IntegrationBlowup: return "integration-blowup";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::TruncatedWindow: return "truncated-window";
    case ErrorKind::InfeasibleInit: return "infeasible-initialization";
    case ErrorKind::SampleTooSmall: return "sample-too-small";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::ComparisonMismatch: return "comparison-mismatch";
    case ErrorKind::UndefinedStatistic: return "undefined-statistic";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::InsufficientOverlap: return "insufficient-overlap";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace mediaflu
