// Copyright 2026 The Voxid Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace voxid {

/// Base class for all errors raised by the toolkit. Every failure mode has
/// its own type so callers can react per condition; the message carries the
/// human-readable diagnostic (file, line number, offending value).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// audio
struct MissingFile : Error { using Error::Error; };
struct NotRiffWave : Error { using Error::Error; };
struct UnsupportedEncoding : Error { using Error::Error; };
struct UnsupportedBitDepth : Error { using Error::Error; };
struct TruncatedData : Error { using Error::Error; };
struct ClipTooShort : Error { using Error::Error; };

// mfcc / dsp
struct NegativeFrequency : Error { using Error::Error; };
struct NegativeMel : Error { using Error::Error; };
struct FrameTooLong : Error { using Error::Error; };
struct NonPowerOfTwo : Error { using Error::Error; };
struct DegenerateBank : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct BadCoeffCount : Error { using Error::Error; };
struct SampleRateMismatch : Error { using Error::Error; };

// features
struct EmptyUtterance : Error { using Error::Error; };
struct RaggedVectors : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// svm
struct IndexOutOfRange : Error { using Error::Error; };
struct SingleClassData : Error { using Error::Error; };
struct TooFewSpeakers : Error { using Error::Error; };
struct BadProblem : Error { using Error::Error; };

// model_store
struct IoFailure : Error { using Error::Error; };
struct UnknownVersion : Error { using Error::Error; };
struct MalformedModel : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct MalformedCsv : Error { using Error::Error; };
struct RaggedRows : Error { using Error::Error; };

// cli
struct UnknownLabel : Error { using Error::Error; };
struct BadSizeList : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };

}  // namespace voxid
