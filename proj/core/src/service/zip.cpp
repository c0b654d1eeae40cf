// SPDX-License-Identifier: Apache-2.0
#include <fairds/service/zip.hpp>

#include <zlib.h>

#include <cstdint>
#include <stdexcept>

namespace fairds::service
{

namespace
{

    void put16(std::string& out, std::uint32_t v)
    {
        out.push_back(static_cast<char>(v & 0xFFU));
        out.push_back(static_cast<char>((v >> 8U) & 0xFFU));
    }

    void put32(std::string& out, std::uint32_t v)
    {
        put16(out, v & 0xFFFFU);
        put16(out, v >> 16U);
    }

    // 1980-01-01 00:00:00 in DOS format
    constexpr std::uint32_t dos_time = 0;
    constexpr std::uint32_t dos_date = (0U << 9U) | (1U << 5U) | 1U;
    // version 2.0, UTF-8 names
    constexpr std::uint32_t version = 20;
    constexpr std::uint32_t utf8_flag = 1U << 11U;

} // namespace

auto make_zip(const std::vector<ZipEntry>& entries) -> std::string
{
    auto out = std::string {};
    auto central = std::string {};
    for (const auto& e: entries)
    {
        if (e.content.size() > 0xFFFFFFFEULL || out.size() > 0xFFFFFFFEULL || e.name.size() > 0xFFFFU)
            throw std::length_error("zip entry exceeds the non-zip64 limits");
        auto const crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(e.content.data()), static_cast<uInt>(e.content.size())));
        auto const size = static_cast<std::uint32_t>(e.content.size());
        auto const offset = static_cast<std::uint32_t>(out.size());

        put32(out, 0x04034b50U);
        put16(out, version);
        put16(out, utf8_flag);
        put16(out, 0); // stored
        put16(out, dos_time);
        put16(out, dos_date);
        put32(out, crc);
        put32(out, size);
        put32(out, size);
        put16(out, static_cast<std::uint32_t>(e.name.size()));
        put16(out, 0);
        out += e.name;
        out += e.content;

        put32(central, 0x02014b50U);
        put16(central, version);
        put16(central, version);
        put16(central, utf8_flag);
        put16(central, 0);
        put16(central, dos_time);
        put16(central, dos_date);
        put32(central, crc);
        put32(central, size);
        put32(central, size);
        put16(central, static_cast<std::uint32_t>(e.name.size()));
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put32(central, 0);
        put32(central, offset);
        central += e.name;
    }
    auto const central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, 0x06054b50U);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint32_t>(entries.size()));
    put16(out, static_cast<std::uint32_t>(entries.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, central_offset);
    put16(out, 0);
    return out;
}

} // namespace fairds::service
