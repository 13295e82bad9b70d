/* Copyright 2026 The TransLAD Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace translad {

// Runtime failure of a stage: bad inputs, missing files, inconsistent data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A prerequisite stage has not been run yet. The message names the command.
class StageError : public Error {
 public:
  using Error::Error;
};

}  // namespace translad
