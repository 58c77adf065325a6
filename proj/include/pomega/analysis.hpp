#pragma once

#include "pomega/core.hpp"

#include <cstdint>
#include <optional>

namespace pomega {

/// (state, schedule position): in `state`, about to read letter `position`
/// of the lasso schedule.
struct ChainNode {
    StateId state;
    std::size_t position;
    bool operator==(const ChainNode&) const = default;
};

struct ChainEdge {
    std::size_t target;
    Rational probability;
};

/// Finite Markov chain induced by a probabilistic automaton on a lasso word.
/// Only nodes reachable from the initial distribution are materialized.
/// Node 0 is the absorbing reject sink; mass missing from an automaton row
/// flows there.
struct LassoChain {
    static constexpr std::size_t reject_node = 0;

    std::vector<ChainNode> nodes; ///< nodes[0] is a placeholder for the sink
    std::vector<std::vector<ChainEdge>> edges;
    std::vector<std::pair<std::size_t, Rational>> initial;

    std::size_t size() const { return nodes.size(); }
    std::optional<std::size_t> find(StateId state, std::size_t position) const;
};

LassoChain build_lasso_chain(const ProbabilisticAutomaton& automaton, const LassoWord& word);

struct Bscc {
    std::vector<std::size_t> nodes;
    StateSet projected_states; ///< empty for the reject sink
    bool is_reject = false;
    Rational reach_probability;
};

/// BSCCs of the reachable part, ordered by their smallest (state, position)
/// member; the reject sink, when reachable, comes last.
struct BsccDecomposition {
    std::vector<Bscc> bsccs;
};

BsccDecomposition bscc_decomposition(const LassoChain& chain);

/// Run acceptance on the set of states visited infinitely often.
bool condition_satisfied(const AcceptanceCondition& acc, const StateSet& infinitely_often);

/// Exact probability of the accepting runs on stem·loop^ω.
Rational acceptance_probability(const ProbabilisticAutomaton& automaton, const LassoWord& word);

/// Probability that a run consumes all of `prefix` without hitting an empty row.
Rational prefix_consumption_probability(const ProbabilisticAutomaton& automaton, const Word& prefix);

/// Support-level summary of the lasso chain: projected state sets of the
/// reachable BSCCs and whether the reject sink is reachable. Probable and
/// almost-sure membership depend only on this.
struct BsccSummary {
    std::vector<StateSet> bsccs;
    bool reject_reachable = false;
};

BsccSummary bscc_summary(const ProbabilisticAutomaton& automaton, const LassoWord& word);

struct QualitativeVerdict {
    bool positive = false;    ///< Pr > 0
    bool almost_sure = false; ///< Pr = 1
};

QualitativeVerdict qualitative_acceptance(const ProbabilisticAutomaton& automaton, const LassoWord& word);

enum class SemanticsKind { probable, almost_sure, threshold };

struct Semantics {
    SemanticsKind kind = SemanticsKind::probable;
    Rational lambda = 0; ///< used by threshold only, 0 <= lambda < 1

    static Semantics probable() { return {SemanticsKind::probable, 0}; }
    static Semantics almost_sure() { return {SemanticsKind::almost_sure, 0}; }
    static Semantics threshold(Rational lambda) { return {SemanticsKind::threshold, std::move(lambda)}; }
};

bool member(const ProbabilisticAutomaton& automaton, const LassoWord& word, const Semantics& semantics);

/// True iff some run of `automaton` on stem·loop^ω is accepting.
bool nondet_lasso_member(const NondeterministicAutomaton& automaton, const LassoWord& word);

struct MonteCarloEstimate {
    double estimate = 0;
    double half_width = 0; ///< 99% Hoeffding bound
    std::uint64_t samples = 0;
    std::uint64_t accepted = 0;
};

/// Simulates runs until they enter a BSCC (or die) and classifies them by the
/// BSCC's projected states. Reproducible per seed.
MonteCarloEstimate monte_carlo_estimate(const ProbabilisticAutomaton& automaton, const LassoWord& word,
                                        std::uint64_t samples, std::uint64_t seed);

/// sqrt(ln(2/0.01) / (2n)).
double hoeffding_half_width(std::uint64_t samples, double confidence = 0.99);

} // namespace pomega
