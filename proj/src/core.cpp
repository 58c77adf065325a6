#include "pomega/core.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pomega {

StateSet make_state_set(std::vector<StateId> states)
{
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return states;
}

bool contains(const StateSet& set, StateId state)
{
    return std::binary_search(set.begin(), set.end(), state);
}

bool intersects(const StateSet& lhs, const StateSet& rhs)
{
    auto l = lhs.begin();
    auto r = rhs.begin();
    while (l != lhs.end() && r != rhs.end()) {
        if (*l == *r)
            return true;
        if (*l < *r)
            ++l;
        else
            ++r;
    }
    return false;
}

StateSet all_states(std::size_t count)
{
    StateSet result(count);
    for (std::size_t i = 0; i < count; ++i)
        result[i] = i;
    return result;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols))
{
    if (symbols_.empty())
        throw Error("alphabet must be nonempty");
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.empty())
            throw Error("alphabet symbols must be nonempty");
        for (char c : s)
            if (std::isspace(static_cast<unsigned char>(c)) || c == '|' || c == '#')
                throw Error("invalid character in alphabet symbol '" + s + "'");
        if (!seen.insert(s).second)
            throw Error("duplicate alphabet symbol '" + s + "'");
    }
}

std::optional<Symbol> Alphabet::find(std::string_view token) const
{
    for (Symbol i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == token)
            return i;
    return std::nullopt;
}

Symbol Alphabet::index(std::string_view token) const
{
    if (auto found = find(token))
        return *found;
    throw Error("symbol '" + std::string(token) + "' is not in the alphabet");
}

bool is_buchi(const AcceptanceCondition& acc) { return std::holds_alternative<Buchi>(acc); }

const StateSet& final_states(const AcceptanceCondition& acc)
{
    if (const auto* buchi = std::get_if<Buchi>(&acc))
        return buchi->final_states;
    throw Error("expected a Büchi acceptance condition, got " + kind_name(acc));
}

std::size_t pair_count(const AcceptanceCondition& acc)
{
    if (const auto* rabin = std::get_if<Rabin>(&acc))
        return rabin->pairs.size();
    if (const auto* streett = std::get_if<Streett>(&acc))
        return streett->pairs.size();
    return 0;
}

std::string kind_name(const AcceptanceCondition& acc)
{
    switch (acc.index()) {
    case 0: return "buchi";
    case 1: return "rabin";
    default: return "streett";
    }
}

StateSet ProbabilisticAutomaton::initial_support() const
{
    StateSet support;
    for (StateId q = 0; q < initial.size(); ++q)
        if (!is_zero(initial[q]))
            support.push_back(q);
    return support;
}

ProbabilisticAutomaton make_probabilistic(const Alphabet& alphabet, std::vector<std::string> states)
{
    ProbabilisticAutomaton result;
    const auto n = states.size();
    result.states = std::move(states);
    result.alphabet = alphabet;
    result.delta.assign(n, std::vector<Distribution>(alphabet.size()));
    result.initial.assign(n, Rational(0));
    result.acceptance = Buchi{};
    return result;
}

NondeterministicAutomaton make_nondeterministic(const Alphabet& alphabet, std::vector<std::string> states)
{
    NondeterministicAutomaton result;
    const auto n = states.size();
    result.states = std::move(states);
    result.alphabet = alphabet;
    result.delta.assign(n, std::vector<StateSet>(alphabet.size()));
    result.acceptance = Buchi{};
    return result;
}

void add_transition(ProbabilisticAutomaton& automaton, StateId from, Symbol symbol, StateId to,
                    const Rational& probability)
{
    auto& row = automaton.delta.at(from).at(symbol);
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const Transition& t, StateId target) { return t.target < target; });
    if (it != row.end() && it->target == to)
        it->probability += probability;
    else
        row.insert(it, Transition{to, probability});
}

void add_transition(NondeterministicAutomaton& automaton, StateId from, Symbol symbol, StateId to)
{
    auto& row = automaton.delta.at(from).at(symbol);
    auto it = std::lower_bound(row.begin(), row.end(), to);
    if (it == row.end() || *it != to)
        row.insert(it, to);
}

Symbol LassoWord::at(std::size_t position) const
{
    return position < stem.size() ? stem[position] : loop[position - stem.size()];
}

std::size_t LassoWord::next(std::size_t position) const
{
    return position + 1 == schedule_length() ? stem.size() : position + 1;
}

void check_lasso(const LassoWord& word, std::size_t alphabet_size)
{
    if (word.loop.empty())
        throw Error("lasso loop must be nonempty");
    for (const Word* part : {&word.stem, &word.loop})
        for (Symbol s : *part)
            if (s >= alphabet_size)
                throw Error("lasso symbol " + std::to_string(s) + " is outside the alphabet");
}

namespace {

void check_set(const StateSet& set, std::size_t n, const std::string& what, std::vector<std::string>& out)
{
    for (StateId q : set)
        if (q >= n)
            out.push_back(what + " references missing state " + std::to_string(q));
    if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end())
        out.push_back(what + " is not a sorted duplicate-free state set");
}

void check_acceptance(const AcceptanceCondition& acc, std::size_t n, std::vector<std::string>& out)
{
    if (const auto* buchi = std::get_if<Buchi>(&acc)) {
        check_set(buchi->final_states, n, "Büchi set", out);
        return;
    }
    const auto& pairs = std::holds_alternative<Rabin>(acc) ? std::get<Rabin>(acc).pairs : std::get<Streett>(acc).pairs;
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        check_set(pairs[l].h, n, "pair " + std::to_string(l) + " H", out);
        check_set(pairs[l].k, n, "pair " + std::to_string(l) + " K", out);
    }
}

void check_shape(std::size_t n, std::size_t rows, std::size_t alphabet, const auto& delta,
                 std::vector<std::string>& out)
{
    if (n == 0)
        out.push_back("automaton has no states");
    if (rows != n)
        out.push_back("transition table has " + std::to_string(rows) + " rows for " + std::to_string(n) + " states");
    for (const auto& row : delta)
        if (row.size() != alphabet) {
            out.push_back("transition table row width differs from alphabet size");
            break;
        }
}

} // namespace

ValidationReport validate_automaton(const ProbabilisticAutomaton& automaton)
{
    ValidationReport report;
    auto& out = report.violations;
    const auto n = automaton.num_states();
    check_shape(n, automaton.delta.size(), automaton.alphabet.size(), automaton.delta, out);
    if (!out.empty())
        return report;

    for (StateId p = 0; p < n; ++p) {
        for (Symbol a = 0; a < automaton.alphabet.size(); ++a) {
            const auto& row = automaton.row(p, a);
            Rational sum = 0;
            for (const auto& t : row) {
                if (t.target >= n)
                    out.push_back("row (" + automaton.states[p] + "," + automaton.alphabet.symbol(a)
                                  + ") references missing state " + std::to_string(t.target));
                if (sgn(t.probability) <= 0 || t.probability > 1)
                    out.push_back("row (" + automaton.states[p] + "," + automaton.alphabet.symbol(a)
                                  + ") has probability " + to_string(t.probability) + " outside (0, 1]");
                sum += t.probability;
            }
            if (!is_zero(sum) && !is_one(sum))
                out.push_back("row (" + automaton.states[p] + "," + automaton.alphabet.symbol(a) + ") sums to "
                              + to_string(sum));
        }
    }
    if (automaton.initial.size() != n) {
        out.push_back("initial distribution has " + std::to_string(automaton.initial.size()) + " entries for "
                      + std::to_string(n) + " states");
    } else {
        Rational sum = 0;
        for (StateId q = 0; q < n; ++q) {
            if (sgn(automaton.initial[q]) < 0)
                out.push_back("initial mass of " + automaton.states[q] + " is negative");
            sum += automaton.initial[q];
        }
        if (!is_one(sum))
            out.push_back("initial distribution sums to " + to_string(sum));
    }
    check_acceptance(automaton.acceptance, n, out);
    return report;
}

ValidationReport validate_automaton(const NondeterministicAutomaton& automaton)
{
    ValidationReport report;
    auto& out = report.violations;
    const auto n = automaton.num_states();
    check_shape(n, automaton.delta.size(), automaton.alphabet.size(), automaton.delta, out);
    if (!out.empty())
        return report;
    for (StateId p = 0; p < n; ++p)
        for (Symbol a = 0; a < automaton.alphabet.size(); ++a)
            check_set(automaton.successors(p, a), n,
                      "row (" + automaton.states[p] + "," + automaton.alphabet.symbol(a) + ")", out);
    check_set(automaton.initial, n, "initial set", out);
    check_acceptance(automaton.acceptance, n, out);
    return report;
}

AcceptanceCondition buchi_as_rabin(const AcceptanceCondition& acc)
{
    return Rabin{{AcceptancePair{{}, final_states(acc)}}};
}

AcceptanceCondition buchi_as_streett(const AcceptanceCondition& acc, std::size_t num_states)
{
    return Streett{{AcceptancePair{final_states(acc), all_states(num_states)}}};
}

AcceptanceCondition dualize_pairs(const AcceptanceCondition& acc)
{
    if (const auto* rabin = std::get_if<Rabin>(&acc))
        return Streett{rabin->pairs};
    if (const auto* streett = std::get_if<Streett>(&acc))
        return Rabin{streett->pairs};
    throw Error("dualize_pairs needs a Rabin or Streett condition");
}

NondeterministicAutomaton support_automaton(const ProbabilisticAutomaton& automaton)
{
    auto result = make_nondeterministic(automaton.alphabet, automaton.states);
    for (StateId p = 0; p < automaton.num_states(); ++p)
        for (Symbol a = 0; a < automaton.alphabet.size(); ++a)
            for (const auto& t : automaton.row(p, a))
                if (!is_zero(t.probability))
                    result.delta[p][a].push_back(t.target);
    result.initial = automaton.initial_support();
    result.acceptance = automaton.acceptance;
    return result;
}

ProbabilisticAutomaton uniform_resolution(const NondeterministicAutomaton& automaton)
{
    if (automaton.initial.empty())
        throw Error("uniform resolution needs a nonempty initial set");
    auto result = make_probabilistic(automaton.alphabet, automaton.states);
    for (StateId p = 0; p < automaton.num_states(); ++p) {
        for (Symbol a = 0; a < automaton.alphabet.size(); ++a) {
            const auto& succ = automaton.successors(p, a);
            if (succ.empty())
                continue;
            const Rational share(1, succ.size());
            for (StateId q : succ)
                result.delta[p][a].push_back(Transition{q, share});
        }
    }
    const Rational share(1, automaton.initial.size());
    for (StateId q : automaton.initial)
        result.initial[q] = share;
    result.acceptance = automaton.acceptance;
    return result;
}

} // namespace pomega
