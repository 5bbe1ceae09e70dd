/*
 * Copyright 2026 The hiro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace hiro {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map the whole family to one exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define HIRO_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  };

HIRO_DEFINE_ERROR(DimensionError)
HIRO_DEFINE_ERROR(DegenerateVectorError)
HIRO_DEFINE_ERROR(ParseError)
HIRO_DEFINE_ERROR(InvalidIndexError)
HIRO_DEFINE_ERROR(UnknownTokenizerError)
HIRO_DEFINE_ERROR(EmbedServiceError)
HIRO_DEFINE_ERROR(EmptyDocumentError)
HIRO_DEFINE_ERROR(EmptyReferenceError)
HIRO_DEFINE_ERROR(ShapeError)
HIRO_DEFINE_ERROR(DomainError)
HIRO_DEFINE_ERROR(DatasetMismatchError)
HIRO_DEFINE_ERROR(ReaderError)
HIRO_DEFINE_ERROR(UnknownMetricError)

#undef HIRO_DEFINE_ERROR

}  // namespace hiro
