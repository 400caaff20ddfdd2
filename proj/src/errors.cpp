// Copyright 2026 The nhsense Authors
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

#include "nhsense/errors.hpp"

namespace nhsense {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::ZeroResponse: return "ZeroResponse";
    case ErrorCode::NotReciprocal: return "NotReciprocal";
    case ErrorCode::NotDirectional: return "NotDirectional";
    case ErrorCode::WrongPerturbation: return "WrongPerturbation";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::UnstableEP: return "UnstableEP";
    case ErrorCode::NotAtEP: return "NotAtEP";
    case ErrorCode::DuplicateTones: return "DuplicateTones";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace nhsense
