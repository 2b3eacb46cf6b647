// Copyright 2026 The mergevis Authors
//
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

#include "mergevis/error.hpp"

namespace mergevis
{

std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::NotReached:
      return "NotReached";
    case ErrorCode::OutOfSpan:
      return "OutOfSpan";
    case ErrorCode::OutOfWindow:
      return "OutOfWindow";
    case ErrorCode::HorizonTooShort:
      return "HorizonTooShort";
    case ErrorCode::DegenerateSpeed:
      return "DegenerateSpeed";
    case ErrorCode::SchemaError:
      return "SchemaError";
    case ErrorCode::EmptyFile:
      return "EmptyFile";
    case ErrorCode::IoError:
      return "IoError";
    case ErrorCode::NoConflict:
      return "NoConflict";
    case ErrorCode::RejectionOverflow:
      return "RejectionOverflow";
    case ErrorCode::NeverResolved:
      return "NeverResolved";
    case ErrorCode::ZeroBaseline:
      return "ZeroBaseline";
    case ErrorCode::DegenerateSamples:
      return "DegenerateSamples";
  }
  return "Unknown";
}

}  // namespace mergevis
