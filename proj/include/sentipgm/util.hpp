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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sentipgm::util {

/// Decimal rendering used by every text model format ("%.<digits>g").
std::string format_real(double value, int significant_digits = 12);

/// Strict decimal parse; throws Error(ParseError) on trailing garbage.
double parse_real(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

/// 64-bit FNV-1a content digest.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// splitmix64 mix of (base, stream); used for per-class / per-restart seeds so
/// results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);

}  // namespace sentipgm::util
