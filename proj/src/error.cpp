#include "sdqc/error.hpp"

namespace sdqc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::OrphanReply: return "OrphanReply";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::IllegalCombination: return "IllegalCombination";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::LexiconMissing: return "LexiconMissing";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::MissingGoldLabel: return "MissingGoldLabel";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MissingTweetId: return "MissingTweetId";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingPrediction: return "MissingPrediction";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::LabelConflict: return "LabelConflict";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DatasetMismatch: return "DatasetMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace sdqc
