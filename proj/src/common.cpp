// Copyright 2026 The rfslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rfslab/common.hpp"

namespace rfslab {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidPlacement:
            return "invalid-placement";
        case ErrorKind::InvalidConfig:
            return "invalid-config";
        case ErrorKind::InvalidGroupData:
            return "invalid-group-data";
        case ErrorKind::DegenerateInput:
            return "degenerate-input";
        case ErrorKind::Label:
            return "label";
        case ErrorKind::Size:
            return "size";
        case ErrorKind::Depth:
            return "depth";
        case ErrorKind::Protocol:
            return "protocol";
        case ErrorKind::Certification:
            return "certification";
        case ErrorKind::Integrity:
            return "integrity";
        case ErrorKind::Version:
            return "version";
        case ErrorKind::Io:
            return "io";
    }
    return "unknown";
}

}  // namespace rfslab
