#pragma once

#include "pomega/core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pomega {

/// Partially observable MDP. Actions share the Alphabet type; an action is
/// available in a state iff its row is nonempty (sums to 1).
struct Pomdp {
    std::vector<std::string> states;
    Alphabet actions;
    std::vector<std::vector<Distribution>> delta; ///< [state][action]
    std::vector<Rational> initial;
    std::vector<std::size_t> observation;         ///< class index per state
    std::vector<std::string> observation_names;   ///< one per class

    std::size_t num_states() const { return states.size(); }
    std::size_t num_observations() const { return observation_names.size(); }
    const Distribution& row(StateId state, Symbol action) const { return delta[state][action]; }
    bool available(StateId state, Symbol action) const { return !delta[state][action].empty(); }
    StateSet initial_support() const;
    StateSet observation_class(std::size_t obs) const;

    bool operator==(const Pomdp&) const = default;
};

ValidationReport validate_pomdp(const Pomdp& pomdp);

/// Every observation class is a singleton.
bool is_fully_observable(const Pomdp& pomdp);

/// Lifts a probabilistic automaton to a POMDP with a single observation class.
/// The acceptance condition must be Büchi; its set is returned as the target.
std::pair<Pomdp, StateSet> pba_as_pomdp(const ProbabilisticAutomaton& pba);

/// Every state in its own observation class.
Pomdp make_mdp(std::vector<std::string> states, Alphabet actions, std::vector<std::vector<Distribution>> delta,
               std::vector<Rational> initial);

enum class ObjectiveKind {
    recurrence, ///< □◇F
    persistence ///< ◇□F
};
enum class ObjectiveMode { almost_sure, positive };

struct Objective {
    ObjectiveKind kind = ObjectiveKind::recurrence;
    ObjectiveMode mode = ObjectiveMode::almost_sure;
    StateSet target;
};

std::string describe(const Objective& objective);

/// Finite-memory observation-based strategy. In product state (s, m) the
/// strategy plays choice[m][obs(s)]; after moving to s' the memory becomes
/// update[m][obs(s')]. `no_action` lets runs die.
struct StrategyCertificate {
    static constexpr Symbol no_action = static_cast<Symbol>(-1);

    std::size_t memory_count = 1;
    std::vector<std::size_t> initial;          ///< [obs]
    std::vector<std::vector<std::size_t>> update; ///< [memory][obs]
    std::vector<std::vector<Symbol>> choice;   ///< [memory][obs]
    std::optional<LassoWord> word;             ///< set when the strategy plays a fixed lasso word

    /// Plays the word letter by letter, ignoring observations.
    static StrategyCertificate from_word(const LassoWord& word, std::size_t num_observations);
};

struct CertificateCheck {
    bool valid = false;
    bool unavailable_action = false;
    std::string message;
};

/// Exact check on the finite product chain (state × memory).
CertificateCheck validate_certificate(const Pomdp& pomdp, const StrategyCertificate& certificate,
                                      const Objective& objective);

enum class Verdict { yes, no, unknown };

std::string to_string(Verdict verdict);

struct DecisionOutcome {
    Verdict verdict = Verdict::unknown;
    std::optional<StrategyCertificate> certificate;
    std::optional<LassoWord> witness;
    std::vector<std::string> diagnostics;
};

/// Polynomial qualitative analysis of a fully observable MDP via maximal end
/// components. Complete; yes verdicts carry a memoryless certificate.
DecisionOutcome mdp_decide(const Pomdp& mdp, const Objective& objective);

/// Search limits. Zero selects the per-procedure default.
struct SearchBounds {
    std::size_t stem = 0;
    std::size_t loop = 0;
};

/// Searches the support graph for a lasso accepted with probability 1.
/// yes: L^{=1} is nonempty (witness attached). no: no witness whose loop is a
/// simple support cycle exists. unknown: bounds cut the search.
/// Defaults: stem and loop length 2^|Q|.
DecisionOutcome as_empty(const ProbabilisticAutomaton& pba, SearchBounds bounds = {});

struct UniversalityOutcome {
    bool refuted = false;
    std::optional<LassoWord> witness;
    Rational witness_probability = 0;
    SearchBounds bounds; ///< bounds actually used
    std::vector<std::string> diagnostics;
};

/// Searches for a lasso accepted with probability < 1. Universality is only
/// ever reported up to the bounds. Defaults: stem 2^|Q|, loop min(2^|Q|, 8).
UniversalityOutcome as_universal(const ProbabilisticAutomaton& pba, SearchBounds bounds = {});

/// Belief-support strategy synthesis for (□◇F, almost-sure) and (◇□F,
/// positive). `bound` caps the number of candidate strategies (0 = 100000).
/// The other two combinations are rejected with Error.
DecisionOutcome pomdp_decide(const Pomdp& pomdp, const Objective& objective, std::size_t bound = 0);

/// Semi-decision for nonemptiness under probable semantics: yes with a
/// witness, otherwise unknown. Defaults: stem 2^|Q|, loop min(2^|Q|, 8).
DecisionOutcome positive_empty_bounded(const ProbabilisticAutomaton& pba, SearchBounds bounds = {});

} // namespace pomega
