// Copyright 2026 The xsdmin Authors
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

#pragma once

#include <string>
#include <string_view>

namespace xsdmin::gzip {

inline constexpr int kDefaultLevel = 6;

/// Compress into a GZip member (DEFLATE with CRC-32 trailer).
/// `level` must be within 1..9.
std::string compress(std::string_view payload, int level = kDefaultLevel);

/// Decompress one GZip member. Throws CorruptStream on format or CRC
/// failures.
std::string decompress(std::string_view bytes);

}  // namespace xsdmin::gzip
