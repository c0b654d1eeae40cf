// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/isomorphism.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace fairds::rdf
{

TooManyBlankNodes::TooManyBlankNodes(std::size_t count):
    Error("too_many_blank_nodes",
          fmt::format("graph has {} blank nodes; comparison is limited to {}", count, max_comparable_blank_nodes))
{
}

namespace
{

    auto relabel(const Term& t, const std::map<std::string, std::string>& mapping) -> std::optional<Term>
    {
        if (!t.is_blank())
            return t;
        auto const it = mapping.find(t.value());
        if (it == mapping.end())
            return std::nullopt;
        return Term::blank(it->second);
    }

    auto relabel(const Triple& t, const std::map<std::string, std::string>& mapping) -> std::optional<Triple>
    {
        auto s = relabel(t.subject, mapping);
        auto o = relabel(t.object, mapping);
        if (!s || !o)
            return std::nullopt;
        return Triple(std::move(*s), t.predicate, std::move(*o));
    }

    class SubsumptionSearch
    {
      public:
        SubsumptionSearch(const Graph& base, const Graph& extended): _base(base), _extended(extended)
        {
            auto const labels = base.blank_nodes();
            if (labels.size() > max_comparable_blank_nodes)
                throw TooManyBlankNodes(labels.size());
            _base_nodes.assign(labels.begin(), labels.end());
            auto const ext = extended.blank_nodes();
            _candidates.assign(ext.begin(), ext.end());
            _stage.resize(_base_nodes.size());

            auto index_of = [&](const std::string& label) {
                return static_cast<std::size_t>(std::ranges::lower_bound(_base_nodes, label) - _base_nodes.begin());
            };
            for (const auto& t: base)
            {
                if (!t.subject.is_blank() && !t.object.is_blank())
                {
                    if (!extended.contains(t))
                        _ground_missing.push_back(t);
                    continue;
                }
                auto stage = std::size_t { 0 };
                if (t.subject.is_blank())
                    stage = std::max(stage, index_of(t.subject.value()));
                if (t.object.is_blank())
                    stage = std::max(stage, index_of(t.object.value()));
                _stage[stage].push_back(t);
                ++_blank_triples;
            }
        }

        auto run() -> Subsumption
        {
            _best_failed = _blank_triples + 1;
            _used.assign(_candidates.size(), false);
            search(0, 0);

            auto result = Subsumption {};
            result.mapping = _best_mapping;
            auto image = TripleSet {};
            for (const auto& t: _ground_missing)
                result.witness.removed.insert(t);
            for (const auto& stage: _stage)
            {
                for (const auto& t: stage)
                {
                    auto mapped = relabel(t, _best_mapping);
                    if (mapped && _extended.contains(*mapped))
                        image.insert(std::move(*mapped));
                    else
                        result.witness.removed.insert(t);
                }
            }
            for (const auto& t: _extended)
            {
                auto const ground = !t.subject.is_blank() && !t.object.is_blank();
                if (ground ? !_base.contains(t) : !image.contains(t))
                    result.witness.added.insert(t);
            }
            result.subsumed = result.witness.removed.empty();
            return result;
        }

      private:
        const Graph& _base;
        const Graph& _extended;
        std::vector<std::string> _base_nodes;
        std::vector<std::string> _candidates;
        std::vector<std::vector<Triple>> _stage;
        std::vector<Triple> _ground_missing;
        std::size_t _blank_triples = 0;

        std::map<std::string, std::string> _mapping;
        std::vector<bool> _used;
        std::map<std::string, std::string> _best_mapping;
        std::size_t _best_failed = 0;
        bool _done = false;

        auto failures_at(std::size_t stage) const -> std::size_t
        {
            auto failed = std::size_t { 0 };
            for (const auto& t: _stage[stage])
            {
                auto mapped = relabel(t, _mapping);
                if (!mapped || !_extended.contains(*mapped))
                    ++failed;
            }
            return failed;
        }

        void search(std::size_t index, std::size_t failed)
        {
            if (_done || failed >= _best_failed)
                return;
            if (index == _base_nodes.size())
            {
                _best_failed = failed;
                _best_mapping = _mapping;
                _done = failed == 0;
                return;
            }
            auto const& label = _base_nodes[index];
            for (std::size_t c = 0; c < _candidates.size() && !_done; ++c)
            {
                if (_used[c])
                    continue;
                _used[c] = true;
                _mapping[label] = _candidates[c];
                search(index + 1, failed + failures_at(index));
                _mapping.erase(label);
                _used[c] = false;
            }
            if (!_done)
                search(index + 1, failed + failures_at(index));
        }
    };

} // namespace

auto graph_subsumes(const Graph& base, const Graph& extended) -> Subsumption
{
    return SubsumptionSearch(base, extended).run();
}

auto graph_isomorphic(const Graph& a, const Graph& b) -> bool
{
    auto const blanks_a = a.blank_nodes();
    auto const blanks_b = b.blank_nodes();
    if (blanks_a.size() > max_comparable_blank_nodes)
        throw TooManyBlankNodes(blanks_a.size());
    if (blanks_b.size() > max_comparable_blank_nodes)
        throw TooManyBlankNodes(blanks_b.size());
    if (a.size() != b.size() || blanks_a.size() != blanks_b.size())
        return false;

    auto const from = std::vector<std::string>(blanks_a.begin(), blanks_a.end());
    auto const to = std::vector<std::string>(blanks_b.begin(), blanks_b.end());
    auto permutation = std::vector<std::size_t>(from.size());
    std::iota(permutation.begin(), permutation.end(), 0);
    do
    {
        auto mapping = std::map<std::string, std::string> {};
        for (std::size_t i = 0; i < from.size(); ++i)
            mapping[from[i]] = to[permutation[i]];
        auto const all_present = std::ranges::all_of(a, [&](const Triple& t) {
            auto mapped = relabel(t, mapping);
            return mapped && b.contains(*mapped);
        });
        if (all_present)
            return true;
    } while (std::next_permutation(permutation.begin(), permutation.end()));
    return false;
}

} // namespace fairds::rdf
