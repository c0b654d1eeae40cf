// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

namespace fairds::rdf
{

ParseError::ParseError(std::string code, std::size_t line, std::size_t column, std::string detail):
    Error(std::move(code), fmt::format("line {}, column {}: {}", line, column, detail)),
    _line(line),
    _column(column),
    _detail(std::move(detail))
{
}

namespace
{

    constexpr std::size_t max_nesting_depth = 256;

    auto is_alpha(unsigned char c) noexcept -> bool
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    }

    auto is_digit(unsigned char c) noexcept -> bool
    {
        return c >= '0' && c <= '9';
    }

    // Bytes >= 0x80 stand in for the non-ASCII ranges of PN_CHARS_BASE.
    auto is_pn_chars_base(unsigned char c) noexcept -> bool
    {
        return is_alpha(c) || c >= 0x80;
    }

    auto is_pn_chars_u(unsigned char c) noexcept -> bool
    {
        return is_pn_chars_base(c) || c == '_';
    }

    auto is_pn_chars(unsigned char c) noexcept -> bool
    {
        return is_pn_chars_u(c) || c == '-' || is_digit(c);
    }

    auto is_hex(unsigned char c) noexcept -> bool
    {
        return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    }

    void append_utf8(std::string& out, char32_t cp)
    {
        if (cp < 0x80)
            out += static_cast<char>(cp);
        else if (cp < 0x800)
        {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        else if (cp < 0x10000)
        {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        else
        {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    class TurtleParser
    {
      public:
        TurtleParser(std::string_view text, std::optional<std::string> base): _src(text), _base(std::move(base))
        {
            if (_base && !has_scheme(*_base))
                throw RelativeIriWithoutBase(1, 1, fmt::format("base IRI <{}> is not absolute", *_base));
            if (_base)
                _base = normalize_iri(*_base);
        }

        auto run() -> Graph
        {
            skip_ws();
            while (!eof())
            {
                statement();
                skip_ws();
            }
            _graph.set_prefixes(_prefixes);
            return std::move(_graph);
        }

      private:
        std::string_view _src;
        std::size_t _pos = 0;
        std::optional<std::string> _base;
        PrefixMap _prefixes;
        Graph _graph;
        std::size_t _anon = 0;
        std::size_t _depth = 0;

        // {{{ low-level helpers
        [[nodiscard]] auto eof() const noexcept -> bool { return _pos >= _src.size(); }

        [[nodiscard]] auto peek(std::size_t ahead = 0) const noexcept -> unsigned char
        {
            return _pos + ahead < _src.size() ? static_cast<unsigned char>(_src[_pos + ahead]) : 0;
        }

        [[nodiscard]] auto location(std::size_t at) const -> std::pair<std::size_t, std::size_t>
        {
            at = std::min(at, _src.size());
            auto line = std::size_t { 1 };
            auto column = std::size_t { 1 };
            for (std::size_t i = 0; i < at; ++i)
            {
                auto const c = static_cast<unsigned char>(_src[i]);
                if (c == '\n')
                {
                    ++line;
                    column = 1;
                }
                else if ((c & 0xC0) != 0x80)
                    ++column;
            }
            return { line, column };
        }

        [[nodiscard]] auto found() const -> std::string
        {
            if (eof())
                return "end of input";
            auto const c = peek();
            if (c < 0x20 || c == 0x7F)
                return fmt::format("character 0x{:02X}", c);
            auto end = _pos + 1;
            while (end < _src.size() && end - _pos < 12 && !std::isspace(static_cast<unsigned char>(_src[end])))
                ++end;
            return fmt::format("'{}'", _src.substr(_pos, end - _pos));
        }

        [[noreturn]] void fail_at(std::size_t at, std::string message) const
        {
            auto const [line, column] = location(at);
            throw SyntaxError(line, column, std::move(message));
        }

        [[noreturn]] void fail(std::string message) const { fail_at(_pos, std::move(message)); }

        void skip_ws()
        {
            while (!eof())
            {
                auto const c = peek();
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                    ++_pos;
                else if (c == '#')
                {
                    while (!eof() && peek() != '\n')
                        ++_pos;
                }
                else
                    break;
            }
        }

        void expect(char c, std::string_view what)
        {
            if (peek() != static_cast<unsigned char>(c))
                fail(fmt::format("expected {}, found {}", what, found()));
            ++_pos;
        }

        // Case-insensitive keyword not followed by a name character or ':'.
        [[nodiscard]] auto at_keyword(std::string_view word) const -> bool
        {
            if (_pos + word.size() > _src.size())
                return false;
            for (std::size_t i = 0; i < word.size(); ++i)
            {
                if (std::toupper(static_cast<unsigned char>(_src[_pos + i])) != word[i])
                    return false;
            }
            auto const next = peek(word.size());
            return !(is_pn_chars(next) || next == ':' || next == '.');
        }
        // }}}

        // {{{ IRIs
        auto resolve(std::string iri, std::size_t at) -> std::string
        {
            if (has_scheme(iri))
                return normalize_iri(iri);
            if (!_base)
            {
                auto const [line, column] = location(at);
                throw RelativeIriWithoutBase(
                    line, column, fmt::format("relative IRI <{}> cannot be resolved without a base IRI", iri));
            }
            return normalize_iri(resolve_iri(*_base, iri));
        }

        auto read_hex(std::size_t digits) -> char32_t
        {
            auto value = char32_t { 0 };
            for (std::size_t i = 0; i < digits; ++i)
            {
                auto const c = peek();
                if (!is_hex(c))
                    fail("malformed unicode escape, expected a hex digit");
                value = value * 16 + static_cast<char32_t>(is_digit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
                ++_pos;
            }
            if (value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF))
                fail_at(_pos - digits, "unicode escape denotes an invalid code point");
            return value;
        }

        // Expects the current character to be '<'.
        auto iriref_raw() -> std::string
        {
            auto const start = _pos;
            ++_pos;
            auto out = std::string {};
            while (true)
            {
                if (eof())
                    fail_at(start, "unterminated IRI, missing '>'");
                auto const c = peek();
                if (c == '>')
                {
                    ++_pos;
                    return out;
                }
                if (c == '\\')
                {
                    ++_pos;
                    if (peek() == 'u')
                    {
                        ++_pos;
                        append_utf8(out, read_hex(4));
                    }
                    else if (peek() == 'U')
                    {
                        ++_pos;
                        append_utf8(out, read_hex(8));
                    }
                    else
                        fail("invalid escape sequence in IRI, only \\u and \\U are allowed");
                    continue;
                }
                if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`')
                    fail(fmt::format("invalid character {} in IRI", c <= 0x20 ? fmt::format("0x{:02X}", c) : std::string(1, static_cast<char>(c))));
                out += static_cast<char>(c);
                ++_pos;
            }
        }

        auto iriref() -> std::string
        {
            auto const start = _pos;
            return resolve(iriref_raw(), start);
        }

        // Reads a PN_PREFIX candidate (possibly empty); strips trailing dots.
        auto read_prefix_label() -> std::string
        {
            auto const start = _pos;
            if (!is_pn_chars_base(peek()))
                return {};
            auto end = _pos;
            auto good = _pos;
            while (end < _src.size())
            {
                auto const c = static_cast<unsigned char>(_src[end]);
                if (is_pn_chars(c))
                    good = ++end;
                else if (c == '.')
                    ++end;
                else
                    break;
            }
            _pos = good;
            return std::string(_src.substr(start, good - start));
        }

        auto read_local_name() -> std::string
        {
            auto out = std::string {};
            auto good_len = std::size_t { 0 };
            auto good_pos = _pos;
            auto first = true;
            while (!eof())
            {
                auto const c = peek();
                auto const ok = first ? (is_pn_chars_u(c) || c == ':' || is_digit(c) || c == '%' || c == '\\')
                                      : (is_pn_chars(c) || c == '.' || c == ':' || c == '%' || c == '\\');
                if (!ok)
                    break;
                first = false;
                if (c == '%')
                {
                    if (!is_hex(peek(1)) || !is_hex(peek(2)))
                        fail("malformed percent-encoding in local name");
                    out.append(_src.substr(_pos, 3));
                    _pos += 3;
                }
                else if (c == '\\')
                {
                    constexpr auto escapable = std::string_view("_~.-!$&'()*+,;=/?#@%");
                    auto const e = peek(1);
                    if (e == 0 || escapable.find(static_cast<char>(e)) == std::string_view::npos)
                        fail("invalid escape sequence in local name");
                    out += static_cast<char>(e);
                    _pos += 2;
                }
                else
                {
                    out += static_cast<char>(c);
                    ++_pos;
                    if (c == '.')
                        continue;
                }
                good_len = out.size();
                good_pos = _pos;
            }
            out.resize(good_len);
            _pos = good_pos;
            return out;
        }

        auto expand(const std::string& prefix, const std::string& local, std::size_t at) -> std::string
        {
            auto const it = _prefixes.find(prefix);
            if (it == _prefixes.end())
            {
                auto const [line, column] = location(at);
                throw UnresolvedPrefix(line, column, fmt::format("prefix '{}:' is not declared", prefix));
            }
            return normalize_iri(it->second + local);
        }

        // IRIREF or prefixed name.
        auto iri() -> Term
        {
            if (peek() == '<')
                return Term::iri(iriref());
            auto const start = _pos;
            auto prefix = read_prefix_label();
            if (peek() != ':')
            {
                _pos = start;
                fail(fmt::format("expected an IRI or prefixed name, found {}", found()));
            }
            ++_pos;
            auto local = read_local_name();
            return Term::iri(expand(prefix, local, start));
        }
        // }}}

        // {{{ directives
        void statement()
        {
            if (peek() == '@')
            {
                auto const start = _pos;
                ++_pos;
                auto word = std::string {};
                while (is_alpha(peek()))
                    word += static_cast<char>(_src[_pos++]);
                if (word == "prefix")
                    prefix_directive(true);
                else if (word == "base")
                    base_directive(true);
                else
                    fail_at(start, fmt::format("unknown directive '@{}'", word));
                return;
            }
            if (at_keyword("PREFIX"))
            {
                _pos += 6;
                prefix_directive(false);
                return;
            }
            if (at_keyword("BASE"))
            {
                _pos += 4;
                base_directive(false);
                return;
            }
            triples();
            skip_ws();
            expect('.', "'.' at the end of the statement");
        }

        void prefix_directive(bool turtle_style)
        {
            skip_ws();
            auto label = read_prefix_label();
            if (peek() != ':')
                fail(fmt::format("expected a prefix label followed by ':', found {}", found()));
            ++_pos;
            skip_ws();
            if (peek() != '<')
                fail(fmt::format("expected the namespace IRI in <...>, found {}", found()));
            _prefixes[label] = iriref();
            if (turtle_style)
            {
                skip_ws();
                expect('.', "'.' after @prefix declaration");
            }
        }

        void base_directive(bool turtle_style)
        {
            skip_ws();
            if (peek() != '<')
                fail(fmt::format("expected the base IRI in <...>, found {}", found()));
            _base = iriref();
            if (turtle_style)
            {
                skip_ws();
                expect('.', "'.' after @base declaration");
            }
        }
        // }}}

        // {{{ triples
        auto fresh_blank() -> Term { return Term::blank(fmt::format("anon#{}", _anon++)); }

        void reject_unsupported()
        {
            if (peek() == '(')
                fail("RDF collections '( ... )' are not supported");
        }

        void triples()
        {
            reject_unsupported();
            if (peek() == '[')
            {
                auto [node, had_properties] = blank_node_property_list();
                skip_ws();
                if (had_properties && peek() == '.')
                    return;
                predicate_object_list(node);
                return;
            }
            auto subject = subject_term();
            skip_ws();
            predicate_object_list(subject);
        }

        auto subject_term() -> Term
        {
            auto const c = peek();
            if (c == '_')
                return blank_label();
            if (c == '"' || c == '\'' || is_digit(c) || c == '+' || c == '-')
                fail("a literal cannot be used as a subject");
            return iri();
        }

        auto blank_label() -> Term
        {
            if (peek(1) != ':')
                fail(fmt::format("expected a blank node label '_:name', found {}", found()));
            _pos += 2;
            auto const start = _pos;
            if (!(is_pn_chars_u(peek()) || is_digit(peek())))
                fail("empty or invalid blank node label");
            auto good = _pos;
            while (!eof())
            {
                auto const c = peek();
                if (is_pn_chars(c))
                    good = ++_pos;
                else if (c == '.')
                    ++_pos;
                else
                    break;
            }
            _pos = good;
            return Term::blank(std::string(_src.substr(start, good - start)));
        }

        auto blank_node_property_list() -> std::pair<Term, bool>
        {
            if (++_depth > max_nesting_depth)
                fail("blank nodes nested too deeply");
            ++_pos; // '['
            skip_ws();
            auto node = fresh_blank();
            auto had_properties = false;
            if (peek() != ']')
            {
                predicate_object_list(node);
                had_properties = true;
                skip_ws();
            }
            expect(']', "']' to close the blank node");
            --_depth;
            return { std::move(node), had_properties };
        }

        [[nodiscard]] auto at_list_end() const -> bool
        {
            auto const c = peek();
            return eof() || c == '.' || c == ']';
        }

        void predicate_object_list(const Term& subject)
        {
            while (true)
            {
                auto predicate = verb();
                skip_ws();
                object_list(subject, predicate);
                skip_ws();
                if (peek() != ';')
                    return;
                while (peek() == ';')
                {
                    ++_pos;
                    skip_ws();
                }
                if (at_list_end())
                    return;
            }
        }

        auto verb() -> Term
        {
            if (peek() == 'a' && !(is_pn_chars(peek(1)) || peek(1) == ':' || peek(1) == '.'))
            {
                ++_pos;
                return Term::iri(std::string(vocab::rdf::type));
            }
            if (peek() != '<' && !is_pn_chars_base(peek()) && peek() != ':')
                fail(fmt::format("expected a predicate, found {}", found()));
            return iri();
        }

        void object_list(const Term& subject, const Term& predicate)
        {
            while (true)
            {
                _graph.insert(subject, predicate, object_term());
                skip_ws();
                if (peek() != ',')
                    return;
                ++_pos;
                skip_ws();
            }
        }

        auto object_term() -> Term
        {
            reject_unsupported();
            auto const c = peek();
            if (c == '[')
                return blank_node_property_list().first;
            if (c == '_')
                return blank_label();
            if (c == '"' || c == '\'')
                return rdf_literal();
            if (is_digit(c) || c == '+' || c == '-' || (c == '.' && is_digit(peek(1))))
                return numeric_literal();
            if (c == '<')
                return iri();
            if (is_pn_chars_base(c) || c == ':')
            {
                auto const start = _pos;
                auto word = read_prefix_label();
                if (peek() != ':' && (word == "true" || word == "false"))
                    return Term::typed_literal(word, std::string(vocab::xsd::boolean));
                _pos = start;
                return iri();
            }
            fail(fmt::format("expected an object (IRI, blank node or literal), found {}", found()));
        }
        // }}}

        // {{{ literals
        auto rdf_literal() -> Term
        {
            auto const start = _pos;
            auto const quote = peek();
            if (peek(1) == quote && peek(2) == quote)
                fail("multi-line (triple-quoted) string literals are not supported");
            ++_pos;
            auto lexical = std::string {};
            while (true)
            {
                if (eof())
                    fail_at(start, "unterminated string literal");
                auto const c = peek();
                if (c == quote)
                {
                    ++_pos;
                    break;
                }
                if (c == '\n' || c == '\r')
                    fail_at(start, "unterminated string literal (line break inside a quoted string)");
                if (c == '\\')
                {
                    ++_pos;
                    auto const e = peek();
                    ++_pos;
                    switch (e)
                    {
                        case 't': lexical += '\t'; break;
                        case 'b': lexical += '\b'; break;
                        case 'n': lexical += '\n'; break;
                        case 'r': lexical += '\r'; break;
                        case 'f': lexical += '\f'; break;
                        case '"': lexical += '"'; break;
                        case '\'': lexical += '\''; break;
                        case '\\': lexical += '\\'; break;
                        case 'u': append_utf8(lexical, read_hex(4)); break;
                        case 'U': append_utf8(lexical, read_hex(8)); break;
                        default: fail_at(_pos - 2, "invalid escape sequence in string literal");
                    }
                    continue;
                }
                lexical += static_cast<char>(c);
                ++_pos;
            }

            if (peek() == '@')
            {
                ++_pos;
                auto const tag_start = _pos;
                while (is_alpha(peek()))
                    ++_pos;
                if (_pos == tag_start)
                    fail("empty language tag");
                while (peek() == '-' && (is_alpha(peek(1)) || is_digit(peek(1))))
                {
                    ++_pos;
                    while (is_alpha(peek()) || is_digit(peek()))
                        ++_pos;
                }
                return Term::lang_literal(std::move(lexical), _src.substr(tag_start, _pos - tag_start));
            }
            if (peek() == '^' && peek(1) == '^')
            {
                _pos += 2;
                auto datatype = iri();
                return Term::typed_literal(std::move(lexical), datatype.value());
            }
            return Term::literal(std::move(lexical));
        }

        auto numeric_literal() -> Term
        {
            auto const start = _pos;
            if (peek() == '+' || peek() == '-')
                ++_pos;
            auto digits = std::size_t { 0 };
            while (is_digit(peek()))
            {
                ++_pos;
                ++digits;
            }
            auto decimal = false;
            if (peek() == '.' && is_digit(peek(1)))
            {
                decimal = true;
                ++_pos;
                while (is_digit(peek()))
                {
                    ++_pos;
                    ++digits;
                }
            }
            if (peek() == 'e' || peek() == 'E')
                fail_at(start, "numeric literals with exponents are not supported");
            if (digits == 0)
                fail_at(start, "malformed numeric literal");
            auto lexical = std::string(_src.substr(start, _pos - start));
            return Term::typed_literal(std::move(lexical),
                                       std::string(decimal ? vocab::xsd::decimal : vocab::xsd::integer));
        }
        // }}}
    };

} // namespace

auto parse_turtle(std::string_view text, std::optional<std::string> base_iri) -> Graph
{
    return TurtleParser(text, std::move(base_iri)).run();
}

} // namespace fairds::rdf
