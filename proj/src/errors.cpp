// Copyright 2026 The numflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "numflow/errors.hpp"

namespace numflow {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidNetwork: return "InvalidNetwork";
    case ErrorCode::kInvalidPath: return "InvalidPath";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kInsufficientPaths: return "InsufficientPaths";
    case ErrorCode::kTooManyClasses: return "TooManyClasses";
    case ErrorCode::kInvalidUtility: return "InvalidUtility";
    case ErrorCode::kMixedTags: return "MixedTags";
    case ErrorCode::kMixedExponent: return "MixedExponent";
    case ErrorCode::kNotLegendre: return "NotLegendre";
    case ErrorCode::kNotSupportedUtility: return "NotSupportedUtility";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidPwl: return "InvalidPwl";
    case ErrorCode::kInconsistentTargets: return "InconsistentTargets";
    case ErrorCode::kMaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace numflow
