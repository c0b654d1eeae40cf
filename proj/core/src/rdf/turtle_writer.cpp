// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

namespace fairds::rdf
{

namespace
{

    auto is_name_start(unsigned char c) noexcept -> bool
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
    }

    auto is_name_char(unsigned char c) noexcept -> bool
    {
        return is_name_start(c) || c == '-' || c == '.';
    }

    // Conservative subset of PN_LOCAL: no escapes, no percent-encoding.
    auto is_plain_local(std::string_view local) noexcept -> bool
    {
        if (local.empty())
            return true;
        if (!is_name_start(static_cast<unsigned char>(local.front())) || local.back() == '.')
            return false;
        return std::ranges::all_of(local, [](char c) { return is_name_char(static_cast<unsigned char>(c)); });
    }

    auto is_prefix_label(std::string_view label) noexcept -> bool
    {
        if (label.empty())
            return true;
        auto const first = static_cast<unsigned char>(label.front());
        if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z') || first >= 0x80))
            return false;
        return label.back() != '.'
               && std::ranges::all_of(label, [](char c) { return is_name_char(static_cast<unsigned char>(c)); });
    }

    auto escape_iri(std::string_view iri) -> std::string
    {
        auto out = std::string {};
        out.reserve(iri.size());
        for (char ch: iri)
        {
            auto const c = static_cast<unsigned char>(ch);
            if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^'
                || c == '`' || c == '\\')
                out += fmt::format("\\u{:04X}", c);
            else
                out += ch;
        }
        return out;
    }

    auto escape_string(std::string_view s) -> std::string
    {
        auto out = std::string {};
        out.reserve(s.size() + 2);
        for (char ch: s)
        {
            auto const c = static_cast<unsigned char>(ch);
            switch (c)
            {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default:
                    if (c < 0x20 || c == 0x7F)
                        out += fmt::format("\\u{:04X}", c);
                    else
                        out += ch;
            }
        }
        return out;
    }

    auto matches(std::string_view s, bool allow_dot) -> bool
    {
        auto i = std::size_t { 0 };
        if (i < s.size() && (s[i] == '+' || s[i] == '-'))
            ++i;
        auto digits_before = std::size_t { 0 };
        while (i < s.size() && s[i] >= '0' && s[i] <= '9')
        {
            ++i;
            ++digits_before;
        }
        if (!allow_dot)
            return digits_before > 0 && i == s.size();
        if (i >= s.size() || s[i] != '.')
            return false;
        ++i;
        auto digits_after = std::size_t { 0 };
        while (i < s.size() && s[i] >= '0' && s[i] <= '9')
        {
            ++i;
            ++digits_after;
        }
        return digits_after > 0 && i == s.size();
    }

    class TurtleWriter
    {
      public:
        explicit TurtleWriter(const Graph& graph): _graph(graph)
        {
            for (const auto& [label, ns]: graph.prefixes())
            {
                if (is_prefix_label(label) && has_scheme(ns))
                    _prefixes.emplace_back(label, ns);
            }
        }

        auto run() -> std::string
        {
            for (const auto& [label, ns]: _prefixes)
                _out += fmt::format("@prefix {}: <{}> .\n", label, escape_iri(ns));

            plan_inlining();

            auto first = true;
            auto subjects = std::vector<Term> {};
            for (const auto& t: _graph)
            {
                if (subjects.empty() || subjects.back() != t.subject)
                    subjects.push_back(t.subject);
            }
            for (const auto& subject: subjects)
            {
                if (subject.is_blank() && _inline.contains(subject.value()))
                    continue;
                if (first)
                {
                    if (!_prefixes.empty())
                        _out += "\n";
                    first = false;
                }
                else
                    _out += "\n";
                _out += term(subject, 0);
                _out += predicates(subject, 1, " ");
                _out += " .\n";
            }
            return std::move(_out);
        }

      private:
        const Graph& _graph;
        std::vector<std::pair<std::string, std::string>> _prefixes;
        std::set<std::string> _inline;
        std::map<std::string, std::string> _labels;
        std::string _out;

        // A blank node is nested inline when it is the object of exactly one
        // triple and is reachable from a written subject. Pure blank-node
        // cycles get their smallest member demoted to a labeled node.
        void plan_inlining()
        {
            auto references = std::map<std::string, std::size_t> {};
            for (const auto& t: _graph)
            {
                if (t.object.is_blank())
                    ++references[t.object.value()];
            }
            for (const auto& [label, count]: references)
            {
                if (count == 1)
                    _inline.insert(label);
            }

            while (true)
            {
                auto reached = std::set<std::string> {};
                auto stack = std::vector<Term> {};
                for (const auto& t: _graph)
                {
                    if (!(t.subject.is_blank() && _inline.contains(t.subject.value())))
                        stack.push_back(t.subject);
                }
                while (!stack.empty())
                {
                    auto node = std::move(stack.back());
                    stack.pop_back();
                    for (const auto& t: _graph.about(node))
                    {
                        if (t.object.is_blank() && _inline.contains(t.object.value())
                            && reached.insert(t.object.value()).second)
                            stack.push_back(t.object);
                    }
                }
                auto unreached = std::optional<std::string> {};
                for (const auto& label: _inline)
                {
                    if (!reached.contains(label))
                    {
                        unreached = label;
                        break;
                    }
                }
                if (!unreached)
                    return;
                _inline.erase(*unreached);
            }
        }

        auto iri_text(const std::string& iri) const -> std::string
        {
            const std::pair<std::string, std::string>* best = nullptr;
            for (const auto& entry: _prefixes)
            {
                if (iri.starts_with(entry.second) && is_plain_local(std::string_view(iri).substr(entry.second.size()))
                    && (best == nullptr || entry.second.size() > best->second.size()))
                    best = &entry;
            }
            if (best != nullptr)
                return best->first + ":" + iri.substr(best->second.size());
            return "<" + escape_iri(iri) + ">";
        }

        auto literal_text(const Term& t) const -> std::string
        {
            if (!t.language().empty())
                return "\"" + escape_string(t.value()) + "\"@" + t.language();
            auto const& dt = t.datatype();
            if (dt == vocab::xsd::string)
                return "\"" + escape_string(t.value()) + "\"";
            if ((dt == vocab::xsd::integer && matches(t.value(), false))
                || (dt == vocab::xsd::decimal && matches(t.value(), true))
                || (dt == vocab::xsd::boolean && (t.value() == "true" || t.value() == "false")))
                return t.value();
            return "\"" + escape_string(t.value()) + "\"^^" + iri_text(dt);
        }

        auto label_for(const std::string& internal) -> std::string
        {
            auto [it, inserted] = _labels.try_emplace(internal, fmt::format("b{}", _labels.size()));
            return "_:" + it->second;
        }

        auto term(const Term& t, int depth) -> std::string
        {
            switch (t.kind())
            {
                case TermKind::Iri: return iri_text(t.value());
                case TermKind::Literal: return literal_text(t);
                case TermKind::BlankNode:
                    if (!_inline.contains(t.value()))
                        return label_for(t.value());
                    if (_graph.about(t).empty())
                        return "[]";
                    return "[" + predicates(t, depth + 1, "\n" + indent(depth + 1)) + "\n" + indent(depth) + "]";
            }
            return {};
        }

        static auto indent(int depth) -> std::string { return std::string(static_cast<std::size_t>(depth) * 4, ' '); }

        // Predicate-object list of `subject`; `lead` precedes the first predicate.
        auto predicates(const Term& subject, int depth, const std::string& lead) -> std::string
        {
            auto const triples = _graph.about(subject);
            auto const type = std::string(vocab::rdf::type);
            auto out = lead;
            for (std::size_t i = 0; i < triples.size();)
            {
                auto const& predicate = triples[i].predicate;
                auto objects = std::vector<Term> {};
                while (i < triples.size() && triples[i].predicate == predicate)
                    objects.push_back(triples[i++].object);
                std::ranges::stable_sort(objects, [](const Term& a, const Term& b) {
                    return std::tie(a.value(), a) < std::tie(b.value(), b);
                });

                out += predicate.value() == type ? std::string("a") : iri_text(predicate.value());
                for (std::size_t k = 0; k < objects.size(); ++k)
                {
                    out += k == 0 ? " " : " , ";
                    out += term(objects[k], depth);
                }
                if (i < triples.size())
                    out += " ;\n" + indent(depth);
            }
            return out;
        }
    };

} // namespace

auto serialize_turtle(const Graph& graph) -> std::string
{
    return TurtleWriter(graph).run();
}

} // namespace fairds::rdf
