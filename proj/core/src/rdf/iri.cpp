// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/term.hpp>
#include <fairds/rdf/turtle.hpp>

#include <cctype>
#include <optional>

namespace fairds::rdf
{

namespace
{

    struct UriParts
    {
        std::optional<std::string> scheme;
        std::optional<std::string> authority;
        std::string path;
        std::optional<std::string> query;
        std::optional<std::string> fragment;
    };

    auto split(std::string_view ref) -> UriParts
    {
        auto parts = UriParts {};
        if (has_scheme(ref))
        {
            auto const colon = ref.find(':');
            parts.scheme = std::string(ref.substr(0, colon));
            ref.remove_prefix(colon + 1);
        }
        if (auto const hash = ref.find('#'); hash != std::string_view::npos)
        {
            parts.fragment = std::string(ref.substr(hash + 1));
            ref = ref.substr(0, hash);
        }
        if (auto const q = ref.find('?'); q != std::string_view::npos)
        {
            parts.query = std::string(ref.substr(q + 1));
            ref = ref.substr(0, q);
        }
        if (ref.starts_with("//"))
        {
            ref.remove_prefix(2);
            auto const slash = ref.find('/');
            parts.authority = std::string(ref.substr(0, slash));
            ref = slash == std::string_view::npos ? std::string_view {} : ref.substr(slash);
        }
        parts.path = std::string(ref);
        return parts;
    }

    auto remove_dot_segments(std::string_view input) -> std::string
    {
        auto in = std::string(input);
        auto out = std::string {};
        while (!in.empty())
        {
            if (in.starts_with("../"))
                in.erase(0, 3);
            else if (in.starts_with("./"))
                in.erase(0, 2);
            else if (in.starts_with("/./"))
                in.erase(0, 2);
            else if (in == "/.")
                in = "/";
            else if (in.starts_with("/../") || in == "/..")
            {
                in = in == "/.." ? "/" : in.substr(3);
                auto const last = out.rfind('/');
                out.erase(last == std::string::npos ? 0 : last);
            }
            else if (in == "." || in == "..")
                in.clear();
            else
            {
                auto const start = in.front() == '/' ? 1 : 0;
                auto const next = in.find('/', start);
                out += in.substr(0, next);
                in.erase(0, next == std::string::npos ? in.size() : next);
            }
        }
        return out;
    }

    auto recompose(const UriParts& p) -> std::string
    {
        auto out = std::string {};
        if (p.scheme)
            out += *p.scheme + ":";
        if (p.authority)
            out += "//" + *p.authority;
        out += p.path;
        if (p.query)
            out += "?" + *p.query;
        if (p.fragment)
            out += "#" + *p.fragment;
        return out;
    }

} // namespace

auto resolve_iri(std::string_view base, std::string_view reference) -> std::string
{
    auto const r = split(reference);
    auto const b = split(base);
    auto t = UriParts {};
    if (r.scheme)
    {
        t = r;
        t.path = remove_dot_segments(r.path);
    }
    else
    {
        if (r.authority)
        {
            t.authority = r.authority;
            t.path = remove_dot_segments(r.path);
            t.query = r.query;
        }
        else
        {
            if (r.path.empty())
            {
                t.path = b.path;
                t.query = r.query ? r.query : b.query;
            }
            else
            {
                if (r.path.front() == '/')
                    t.path = remove_dot_segments(r.path);
                else
                {
                    auto merged = std::string {};
                    if (b.authority && b.path.empty())
                        merged = "/" + r.path;
                    else
                    {
                        auto const slash = b.path.rfind('/');
                        merged = (slash == std::string::npos ? std::string {} : b.path.substr(0, slash + 1)) + r.path;
                    }
                    t.path = remove_dot_segments(merged);
                }
                t.query = r.query;
            }
            t.authority = b.authority;
        }
        t.scheme = b.scheme;
    }
    t.fragment = r.fragment;
    return recompose(t);
}

auto normalize_iri(std::string_view iri) -> std::string
{
    auto out = std::string(iri);
    auto const colon = out.find(':');
    if (colon == std::string::npos || !has_scheme(out))
        return out;
    for (std::size_t i = 0; i < colon; ++i)
        out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    if (out.compare(colon + 1, 2, "//") != 0)
        return out;
    auto const auth_start = colon + 3;
    auto const auth_end = out.find_first_of("/?#", auth_start);
    auto const auth_stop = auth_end == std::string::npos ? out.size() : auth_end;
    auto host_start = auth_start;
    if (auto const at = out.rfind('@', auth_stop - 1); at != std::string::npos && at >= auth_start && at < auth_stop)
        host_start = at + 1;
    auto host_end = auth_stop;
    if (host_start < auth_stop && out[host_start] != '[')
    {
        if (auto const port = out.find(':', host_start); port != std::string::npos && port < auth_stop)
            host_end = port;
    }
    for (auto i = host_start; i < host_end; ++i)
        out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    return out;
}

} // namespace fairds::rdf
