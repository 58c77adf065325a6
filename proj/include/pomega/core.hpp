#pragma once

#include "pomega/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pomega {

/// Raised for precondition violations (wrong acceptance kind, foreign symbol,
/// alphabet mismatch, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using StateId = std::size_t;
using Symbol = std::size_t;
using Word = std::vector<Symbol>;

/// Sorted, duplicate-free list of states.
using StateSet = std::vector<StateId>;

StateSet make_state_set(std::vector<StateId> states);
bool contains(const StateSet& set, StateId state);
bool intersects(const StateSet& lhs, const StateSet& rhs);
StateSet all_states(std::size_t count);

/// Ordered list of distinct tokens. Tokens are nonempty and contain no
/// whitespace, '|' or '#'.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(Symbol index) const { return symbols_.at(index); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    std::optional<Symbol> find(std::string_view token) const;
    /// Throws Error for a token outside the alphabet.
    Symbol index(std::string_view token) const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> symbols_;
};

struct AcceptancePair {
    StateSet h;
    StateSet k;
    bool operator==(const AcceptancePair&) const = default;
};

struct Buchi {
    StateSet final_states;
    bool operator==(const Buchi&) const = default;
};

/// Accepting iff some pair has inf ∩ H empty and inf ∩ K nonempty.
struct Rabin {
    std::vector<AcceptancePair> pairs;
    bool operator==(const Rabin&) const = default;
};

/// Accepting iff every pair has inf ∩ H nonempty or inf ∩ K empty.
struct Streett {
    std::vector<AcceptancePair> pairs;
    bool operator==(const Streett&) const = default;
};

using AcceptanceCondition = std::variant<Buchi, Rabin, Streett>;

bool is_buchi(const AcceptanceCondition& acc);
const StateSet& final_states(const AcceptanceCondition& acc);
std::size_t pair_count(const AcceptanceCondition& acc);
std::string kind_name(const AcceptanceCondition& acc);

struct Transition {
    StateId target;
    Rational probability;
    bool operator==(const Transition&) const = default;
};

/// Outgoing distribution of one (state, symbol) row, sorted by target.
/// An empty row means the symbol cannot be consumed.
using Distribution = std::vector<Transition>;

struct ProbabilisticAutomaton {
    std::vector<std::string> states;
    Alphabet alphabet;
    std::vector<std::vector<Distribution>> delta; ///< [state][symbol]
    std::vector<Rational> initial;                ///< one entry per state
    AcceptanceCondition acceptance;

    std::size_t num_states() const { return states.size(); }
    const Distribution& row(StateId state, Symbol symbol) const { return delta[state][symbol]; }
    StateSet initial_support() const;

    bool operator==(const ProbabilisticAutomaton&) const = default;
};

struct NondeterministicAutomaton {
    std::vector<std::string> states;
    Alphabet alphabet;
    std::vector<std::vector<StateSet>> delta; ///< [state][symbol]
    StateSet initial;
    AcceptanceCondition acceptance;

    std::size_t num_states() const { return states.size(); }
    const StateSet& successors(StateId state, Symbol symbol) const { return delta[state][symbol]; }

    bool operator==(const NondeterministicAutomaton&) const = default;
};

/// Skeleton with the given state names, empty rows, zero initial mass and an
/// empty Büchi set.
ProbabilisticAutomaton make_probabilistic(const Alphabet& alphabet, std::vector<std::string> states);
NondeterministicAutomaton make_nondeterministic(const Alphabet& alphabet, std::vector<std::string> states);

/// Adds probability to (from, symbol, to), merging with an existing entry.
void add_transition(ProbabilisticAutomaton& automaton, StateId from, Symbol symbol, StateId to,
                    const Rational& probability);
void add_transition(NondeterministicAutomaton& automaton, StateId from, Symbol symbol, StateId to);

/// The ultimately periodic word stem·loop^ω.
struct LassoWord {
    Word stem;
    Word loop;

    std::size_t schedule_length() const { return stem.size() + loop.size(); }
    /// Letter read at schedule position `position` (< schedule_length()).
    Symbol at(std::size_t position) const;
    /// Successor position: +1, wrapping from the end back to the loop start.
    std::size_t next(std::size_t position) const;

    bool operator==(const LassoWord&) const = default;
};

/// Throws Error on an empty loop or a symbol >= alphabet_size.
void check_lasso(const LassoWord& word, std::size_t alphabet_size);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_automaton(const ProbabilisticAutomaton& automaton);
ValidationReport validate_automaton(const NondeterministicAutomaton& automaton);

/// Büchi F becomes Rabin [(∅, F)].
AcceptanceCondition buchi_as_rabin(const AcceptanceCondition& acc);
/// Büchi F becomes Streett [(F, Q)].
AcceptanceCondition buchi_as_streett(const AcceptanceCondition& acc, std::size_t num_states);
/// Same pair list read under the dual condition. Throws for Büchi.
AcceptanceCondition dualize_pairs(const AcceptanceCondition& acc);

template <typename Automaton>
Automaton dualize_pairs(Automaton automaton)
{
    automaton.acceptance = dualize_pairs(automaton.acceptance);
    return automaton;
}

template <typename Automaton>
Automaton with_rabin_acceptance(Automaton automaton)
{
    automaton.acceptance = buchi_as_rabin(automaton.acceptance);
    return automaton;
}

template <typename Automaton>
Automaton with_streett_acceptance(Automaton automaton)
{
    automaton.acceptance = buchi_as_streett(automaton.acceptance, automaton.num_states());
    return automaton;
}

/// Erases probabilities: successor sets are the positive-probability targets.
NondeterministicAutomaton support_automaton(const ProbabilisticAutomaton& automaton);

/// Resolves every nonempty successor set of size k by 1/k each and the initial
/// set of size m by 1/m each. Throws Error for an empty initial set.
ProbabilisticAutomaton uniform_resolution(const NondeterministicAutomaton& automaton);

} // namespace pomega
