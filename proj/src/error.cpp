/*
 * Copyright 2026 The sentipgm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sentipgm/error.hpp"

namespace sentipgm {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnsupportedArff: return "UnsupportedArff";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::CardinalityOverflow: return "CardinalityOverflow";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::TooFewVariables: return "TooFewVariables";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NegativeFeature: return "NegativeFeature";
    case ErrorCode::ColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::VocabHashMismatch: return "VocabHashMismatch";
    case ErrorCode::ModelFormat: return "ModelFormat";
    }
    return "Unknown";
}

}  // namespace sentipgm
