// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fairds::service
{

struct ZipEntry
{
    std::string name;
    std::string content;
};

/// Uncompressed (stored) zip archive with fixed 1980-01-01 timestamps, so
/// equal entries give equal bytes.
auto make_zip(const std::vector<ZipEntry>& entries) -> std::string;

} // namespace fairds::service
